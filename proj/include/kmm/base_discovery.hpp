#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kmm/oshr.hpp"
#include "kmm/suffix_tree.hpp"

namespace kmm {

struct CostCounters;

// Per-node lists of encoded suffixes (suffix index + node depth), stored compactly.
class NodeSuffixLists {
 public:
  NodeSuffixLists() = default;
  explicit NodeSuffixLists(const std::vector<std::vector<std::int32_t>>& per_node);

  std::span<const std::int32_t> at(NodeId v) const {
    return {values_.data() + begin_[v], values_.data() + begin_[v + 1]};
  }
  std::size_t total() const { return values_.size(); }
  std::int32_t node_count() const { return static_cast<std::int32_t>(begin_.size()) - 1; }

 private:
  std::vector<std::int32_t> begin_{0};
  std::vector<std::int32_t> values_;
};

// Suffixes seen under a node but under none of the nodes linking to it.
// Encoded value p = suffix index + depth(v), i.e. the text position just below v.
NodeSuffixLists find_base_suffixes(const Oshr& oshr, CostCounters* counters = nullptr);

struct UncleSuffixes {
  NodeSuffixLists per_node;
  // Indexed by encoded value; true when that value was claimed as an uncle suffix.
  std::vector<std::uint8_t> singleton;
  std::size_t singleton_count = 0;
};

UncleSuffixes find_base_uncle_suffixes(const Oshr& oshr, const NodeSuffixLists& base,
                                       CostCounters* counters = nullptr);

struct BasePath {
  NodeId top = kNoNode;
  NodeId bottom = kNoNode;
  friend bool operator==(const BasePath&, const BasePath&) = default;
  friend auto operator<=>(const BasePath&, const BasePath&) = default;
};

// True when some symbol c makes both c.label(top) and c.label(bottom) internal nodes,
// i.e. the pair's label already appeared under a node linking to top.
bool is_redundant_path(const Oshr& oshr, NodeId top, NodeId bottom);

// Reusable collector for the bottom nodes of one visited node.
class BottomCollector {
 public:
  explicit BottomCollector(const Oshr& oshr);

  // Raw candidates from the three rules plus the root case (may contain redundant pairs).
  void candidates(NodeId visited, std::vector<NodeId>& out, std::uint64_t* steps = nullptr);
  // Candidates with redundant pairs removed.
  void bottoms(NodeId visited, std::vector<NodeId>& out, std::uint64_t* steps = nullptr);

 private:
  void note(NodeId v, std::vector<NodeId>& out);

  const Oshr* oshr_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

std::vector<NodeId> collect_bottom_candidates(const Oshr& oshr, NodeId visited);
std::vector<NodeId> find_base_paths_bottoms(const Oshr& oshr, NodeId visited);

// All base paths, grouped by top node in OSHR postorder.
std::vector<BasePath> find_base_paths(const Oshr& oshr, CostCounters* counters = nullptr);

}  // namespace kmm
