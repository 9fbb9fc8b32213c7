#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kmm/ot_index.hpp"
#include "kmm/suffix_tree.hpp"

namespace kmm {

struct Query {
  std::string pattern;
  int k = 0;
};

struct Match {
  std::int64_t position = 0;
  int mismatches = 0;
  friend bool operator==(const Match&, const Match&) = default;
  friend auto operator<=>(const Match&, const Match&) = default;
};

// Matches sorted by position, one per position.
struct MatchResult {
  std::vector<Match> matches;
  std::size_t occ() const { return matches.size(); }
  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

struct SuffixWalkEntry {
  NodeId end_node = kNoNode;
  std::int32_t matched = 0;
  bool on_edge = false;
};

// Longest match of every pattern suffix, computed in one pass with suffix links.
class SuffixWalkTable {
 public:
  SuffixWalkTable() = default;
  static SuffixWalkTable build(const SuffixTree& tree, std::string_view pattern, std::uint64_t* steps = nullptr);

  std::size_t size() const { return entries_.size(); }
  const SuffixWalkEntry& operator[](std::size_t i) const { return entries_[i]; }
  bool fully_matched(std::size_t i) const {
    return entries_[i].matched == static_cast<std::int32_t>(entries_.size() - i);
  }
  // Node at or directly below the end of suffix i when it occurs in the text, else kNoNode.
  // Offset m (empty suffix) maps to the root.
  NodeId sink(std::size_t i) const;

 private:
  std::vector<SuffixWalkEntry> entries_;
  NodeId root_ = kNoNode;
};

SuffixWalkTable precompute_suffix_walks(const SuffixTree& tree, std::string_view pattern);

struct QueryStats {
  std::uint64_t steps = 0;
  std::uint64_t lookups = 0;
  std::uint64_t backtrack_steps = 0;
};

struct BacktrackResult {
  NodeId node = kNoNode;
  std::int32_t key = -1;
  int steps = 0;
  bool found() const { return node != kNoNode; }
};

// Tries the range lookup at t_sigma and then at each ancestor up to the root.
BacktrackResult backtrack_lookup(const SuffixTree& tree, const OtIndex& paths, NodeId t_sigma, NodeId a,
                                 std::string_view letter);

class Searcher {
 public:
  // suffix_index serves the base-suffix variants, path_index the base-path variant;
  // the uncle variant uses both.
  Searcher(const SuffixTree& tree, Variant variant, int built_k, const OtIndex* suffix_index,
           const OtIndex* path_index);

  MatchResult search(const Query& query, QueryStats* stats = nullptr) const;

  // Start positions of label(y) followed by pattern[z_begin..], where y is the deepest internal
  // node on that path. Leaf children are decided by the walk table in constant time; an internal
  // child only needs its connecting edge checked.
  std::vector<std::int32_t> match_leaf_and_edge(NodeId y, std::string_view pattern, const SuffixWalkTable& table,
                                                std::size_t z_begin) const;

 private:
  struct Context;

  void terminal_step(Context& ctx, NodeId a, char sigma, int used) const;
  void suffix_variant_step(Context& ctx, NodeId a, char sigma, int used) const;
  void base_path_step(Context& ctx, NodeId a, char sigma, int used) const;

  const SuffixTree* tree_;
  Variant variant_;
  int built_k_;
  const OtIndex* suffix_index_;
  const OtIndex* path_index_;
};

}  // namespace kmm
