#pragma once

#include <iosfwd>
#include <memory>
#include <optional>

#include "kmm/base_discovery.hpp"
#include "kmm/cost_counters.hpp"
#include "kmm/oshr.hpp"
#include "kmm/ot_index.hpp"
#include "kmm/search.hpp"
#include "kmm/suffix_tree.hpp"
#include "kmm/text.hpp"

namespace kmm {

struct PhaseTimes {
  double tree_ms = 0;
  double preprocessing_ms = 0;
  double base_suffix_ms = 0;
  double uncle_ms = 0;
  double indexing_ms = 0;
  double mapping_ms = 0;
};

// A complete searchable index: suffix tree, OSHR preprocessing, base suffixes and the OT
// indexes the chosen variant needs.
class Index {
 public:
  static Index build(const Text& text, IndexConfig config);

  const IndexConfig& config() const { return config_; }
  const Text& text() const { return tree_->text(); }
  const SuffixTree& tree() const { return *tree_; }
  const Oshr& oshr() const { return *oshr_; }
  const NodeSuffixLists& base_suffixes() const { return base_; }
  const std::optional<UncleSuffixes>& uncle_suffixes() const { return uncle_; }
  // Index over base suffixes (trivial, tails and uncle variants).
  const OtIndex* suffix_index() const { return suffix_index_.get(); }
  // Index over base paths (base-path and uncle variants).
  const OtIndex* path_index() const { return path_index_.get(); }
  // Number of base paths (computed from the OSHR when no path index was built).
  std::size_t base_path_count() const;

  const CostCounters& counters() const { return counters_; }
  const PhaseTimes& times() const { return times_; }

  MatchResult search(const Query& q, QueryStats* stats = nullptr) const { return searcher_->search(q, stats); }
  const Searcher& searcher() const { return *searcher_; }

  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  // Rebuilds the tree from the stored text and reads the OT indexes back.
  static Index load(std::istream& in);
  static Index load(const std::string& path);

 private:
  Index() = default;
  void prepare(const Text& text);
  void make_searcher();

  IndexConfig config_;
  std::unique_ptr<SuffixTree> tree_;
  std::unique_ptr<Oshr> oshr_;
  NodeSuffixLists base_;
  std::optional<UncleSuffixes> uncle_;
  std::unique_ptr<OtIndex> suffix_index_;
  std::unique_ptr<OtIndex> path_index_;
  CostCounters counters_;
  PhaseTimes times_;
  std::unique_ptr<Searcher> searcher_;
};

}  // namespace kmm
