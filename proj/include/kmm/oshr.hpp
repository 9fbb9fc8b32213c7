#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kmm/suffix_tree.hpp"

namespace kmm {

struct CostCounters;

// Inclusive index interval into one of the left-to-right OSHR lists.
struct ListRange {
  std::int32_t first = 0;
  std::int32_t last = -1;
  bool empty() const { return last < first; }
  std::int32_t size() const { return empty() ? 0 : last - first + 1; }
};

// Reversed suffix links over the internal nodes of a suffix tree, with the auxiliary
// marks and lists the indexing phases consume. Per-node vectors are indexed by NodeId.
class Oshr {
 public:
  explicit Oshr(const SuffixTree& tree) : tree_(&tree) {}

  // All preprocessing steps in order.
  static Oshr preprocess(const SuffixTree& tree, CostCounters* counters = nullptr);

  void build_oshr();
  void mark_inbetween_nodes(CostCounters* counters = nullptr);
  void collect_oshr_lists();

  const SuffixTree& tree() const { return *tree_; }

  // Nodes whose suffix link targets v, in suffix-tree postorder.
  std::span<const NodeId> oshr_children(NodeId v) const {
    return {oshr_child_ids_.data() + oshr_begin_[v], oshr_child_ids_.data() + oshr_begin_[v + 1]};
  }
  bool is_oshr_leaf(NodeId v) const { return oshr_begin_[v] == oshr_begin_[v + 1]; }
  bool is_oshr_internal(NodeId v) const { return !is_oshr_leaf(v); }
  bool is_grand(NodeId v) const { return grand_[v] != 0; }

  bool is_inbetween(NodeId v) const { return inbetween_begin_[v] != inbetween_begin_[v + 1]; }
  std::span<const NodeId> inbetween_refs(NodeId v) const {
    return {inbetween_ids_.data() + inbetween_begin_[v], inbetween_ids_.data() + inbetween_begin_[v + 1]};
  }

  std::span<const NodeId> oshr_leaves_ltr() const { return oshr_leaves_; }
  std::span<const NodeId> oshr_internals_ltr() const { return oshr_internals_; }
  // OSHR leaves / internals among the strict internal descendants of v.
  ListRange oshr_leaf_range(NodeId v) const { return leaf_range_[v]; }
  ListRange oshr_internal_range(NodeId v) const { return internal_range_[v]; }
  std::span<const NodeId> oshr_leaves_in(NodeId v) const { return slice(oshr_leaves_, leaf_range_[v]); }
  std::span<const NodeId> oshr_internals_in(NodeId v) const {
    return slice(oshr_internals_, internal_range_[v]);
  }

  // Internal nodes in OSHR postorder (root last).
  std::span<const NodeId> postorder() const { return postorder_; }

  // Suffix link with the root mapped to itself.
  NodeId link_or_root(NodeId v) const {
    return v == tree_->root() ? v : tree_->suffix_link(v);
  }

 private:
  static std::span<const NodeId> slice(const std::vector<NodeId>& list, ListRange r) {
    if (r.empty()) return {};
    return {list.data() + r.first, static_cast<std::size_t>(r.size())};
  }

  const SuffixTree* tree_;
  std::vector<std::int32_t> oshr_begin_;
  std::vector<NodeId> oshr_child_ids_;
  std::vector<std::uint8_t> grand_;
  std::vector<std::int32_t> inbetween_begin_;
  std::vector<NodeId> inbetween_ids_;
  std::vector<NodeId> oshr_leaves_;
  std::vector<NodeId> oshr_internals_;
  std::vector<ListRange> leaf_range_;
  std::vector<ListRange> internal_range_;
  std::vector<NodeId> postorder_;
};

}  // namespace kmm
