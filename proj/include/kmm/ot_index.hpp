#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kmm/base_discovery.hpp"
#include "kmm/oshr.hpp"
#include "kmm/suffix_tree.hpp"

namespace kmm {

struct CostCounters;

enum class Variant { base_suffix_trivial, base_suffix_tails, base_paths, base_uncle };

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);
inline constexpr Variant kAllVariants[] = {Variant::base_suffix_trivial, Variant::base_suffix_tails,
                                           Variant::base_paths, Variant::base_uncle};

struct IndexConfig {
  Variant variant = Variant::base_suffix_tails;
  int k = 2;
};

// Inclusive key interval; left == right + 1 encodes an empty range.
struct OtRange {
  std::int32_t left = 0;
  std::int32_t right = -1;
  bool empty() const { return right < left; }
  bool contains(std::int32_t key) const { return left <= key && key <= right; }
  friend bool operator==(const OtRange&, const OtRange&) = default;
};

struct CatalogEntry {
  std::int32_t guided_suffix = 0;
  std::int32_t top_depth = 0;
  std::int32_t bottom_depth = 0;
  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

// Entries sharing one transition string; positions index the node's entry array.
struct LetterGroup {
  std::string_view letter;
  std::span<const std::int32_t> positions;
};

// Read-only view of one node's postings.
class PostingView {
 public:
  PostingView() = default;
  PostingView(std::span<const std::int32_t> keys, std::span<const std::int32_t> transitions,
              std::span<const std::int32_t> positions, std::span<const std::int32_t> group_starts,
              std::string_view text, int k)
      : keys_(keys), transitions_(transitions), positions_(positions), group_starts_(group_starts),
        text_(text), k_(k) {}

  std::span<const std::int32_t> entries() const { return keys_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  std::string_view transition(std::size_t i) const;

  std::size_t group_count() const { return group_starts_.empty() ? 0 : group_starts_.size() - 1; }
  LetterGroup group(std::size_t g) const;
  // Positions of entries whose transition string equals letter (empty when none).
  std::span<const std::int32_t> letter_positions(std::string_view letter) const;

 private:
  std::span<const std::int32_t> keys_;
  std::span<const std::int32_t> transitions_;
  std::span<const std::int32_t> positions_;
  std::span<const std::int32_t> group_starts_;
  std::string_view text_;
  int k_ = 0;
};

// Keys in range carrying the given transition string.
std::vector<std::int32_t> lookup_ot_range(const PostingView& posting, OtRange range, std::string_view letter);
// Keys in range regardless of transition string.
std::vector<std::int32_t> lookup_ot_range(const PostingView& posting, OtRange range);
std::optional<std::int32_t> first_in_range(const PostingView& posting, OtRange range, std::string_view letter);
std::optional<std::int32_t> first_in_range(const PostingView& posting, OtRange range);

class OtIndex {
 public:
  OtIndex() = default;

  int k() const { return k_; }
  std::int32_t node_count() const { return static_cast<std::int32_t>(ranges_.size()); }
  OtRange range(NodeId v) const { return ranges_[v]; }
  PostingView postings(NodeId v) const;
  std::size_t posting_count() const { return keys_.size(); }

  std::span<const CatalogEntry> catalog() const { return catalog_; }
  std::int32_t keys_counter() const { return static_cast<std::int32_t>(catalog_.size()) - 1; }
  std::size_t key_count() const { return catalog_.size(); }

  bool operator==(const OtIndex& o) const;

  // Raw arrays for serialization.
  const std::vector<OtRange>& raw_ranges() const { return ranges_; }
  const std::vector<std::int32_t>& raw_offsets() const { return offsets_; }
  const std::vector<std::int32_t>& raw_keys() const { return keys_; }
  const std::vector<std::int32_t>& raw_transitions() const { return transitions_; }

  static OtIndex from_raw(std::string_view text, int k, std::vector<OtRange> ranges,
                          std::vector<std::int32_t> offsets, std::vector<std::int32_t> keys,
                          std::vector<std::int32_t> transitions, std::vector<CatalogEntry> catalog);

  friend class OtIndexBuilder;

 private:
  void build_groups();

  std::string_view text_;
  int k_ = 0;
  std::vector<OtRange> ranges_;
  std::vector<std::int32_t> offsets_;
  std::vector<std::int32_t> keys_;
  std::vector<std::int32_t> transitions_;
  std::vector<std::int32_t> positions_;
  std::vector<std::int32_t> group_offsets_;
  std::vector<std::int32_t> group_starts_;
  std::vector<CatalogEntry> catalog_;
};

// Accumulates postings and keys, then lays them out per node.
class OtIndexBuilder {
 public:
  OtIndexBuilder(const SuffixTree& tree, int k);

  std::int32_t issue_key(CatalogEntry entry);
  std::int32_t counter() const { return static_cast<std::int32_t>(catalog_.size()) - 1; }
  void post(NodeId node, std::int32_t key, std::int32_t transition_pos);
  void set_range(NodeId v, OtRange r) { ranges_[v] = r; }

  // Throws ConsistencyError if a node received a key twice.
  OtIndex finish();

 private:
  const SuffixTree* tree_;
  int k_;
  std::vector<OtRange> ranges_;
  std::vector<NodeId> post_node_;
  std::vector<std::int32_t> post_key_;
  std::vector<std::int32_t> post_trans_;
  std::vector<CatalogEntry> catalog_;
};

OtIndex index_base_suffixes_trivial(const Oshr& oshr, const NodeSuffixLists& base, int k,
                                    CostCounters* counters = nullptr);
OtIndex index_base_suffix_tails(const Oshr& oshr, const NodeSuffixLists& base, int k,
                                CostCounters* counters = nullptr);
OtIndex index_base_uncle_suffixes(const Oshr& oshr, const NodeSuffixLists& base, const UncleSuffixes& uncle,
                                  int k, CostCounters* counters = nullptr);

struct StagedTuple {
  std::int32_t leaf_key = 0;
  std::int32_t key = 0;
  std::int32_t transition_pos = 0;
};

// Output of the base-path key pass: ranges and catalog are final, postings wait in the staging
// buckets (indexed by residual depth) until map_base_paths_to_root places them.
struct BasePathBuild {
  std::vector<BasePath> paths;
  std::vector<std::vector<StagedTuple>> staging;
  std::size_t staged_count = 0;
  OtIndexBuilder builder;
};

BasePathBuild index_base_paths(const Oshr& oshr, int k, CostCounters* counters = nullptr);
OtIndex map_base_paths_to_root(const Oshr& oshr, BasePathBuild&& build, CostCounters* counters = nullptr);

// Longest prefix (at most cap symbols) of text[pos..] that continues the path label of node below it.
std::int32_t longest_match_below(const SuffixTree& tree, NodeId node, std::int32_t pos, std::int32_t cap,
                                 std::uint64_t* steps = nullptr);

}  // namespace kmm
