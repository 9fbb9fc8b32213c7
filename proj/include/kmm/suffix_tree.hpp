#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kmm/text.hpp"

namespace kmm {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

enum class WalkMode { exact, skip_mismatch };

struct WalkResult {
  NodeId end_node = kNoNode;
  std::size_t matched = 0;
  bool on_edge = false;
  std::int32_t edge_offset = 0;
  std::vector<std::size_t> mismatch_positions;
};

// Suffix tree with canonical node numbering: leaves are 0..n-1 in left-to-right order
// (so a leaf's id is its leaf key), internal nodes follow in postorder and the root is last.
class SuffixTree {
 public:
  static SuffixTree build(const Text& text);

  const Text& text() const { return text_; }
  std::int32_t n() const { return static_cast<std::int32_t>(text_.size()); }

  std::int32_t node_count() const { return static_cast<std::int32_t>(parent_.size()); }
  std::int32_t leaf_count() const { return n(); }
  std::int32_t internal_count() const { return node_count() - n(); }
  NodeId root() const { return node_count() - 1; }
  NodeId first_internal() const { return n(); }

  bool is_leaf(NodeId v) const { return v < n(); }
  bool is_internal(NodeId v) const { return v >= n(); }

  NodeId parent(NodeId v) const { return parent_[v]; }
  std::int32_t depth(NodeId v) const { return depth_[v]; }
  // Start of one occurrence of the path label; for leaves this is the suffix index.
  std::int32_t label_start(NodeId v) const { return label_start_[v]; }
  std::int32_t suffix_index(NodeId leaf) const { return label_start_[leaf]; }
  // kNoNode for the root and for leaves.
  NodeId suffix_link(NodeId v) const { return suffix_link_[v]; }

  std::int32_t leaf_key(NodeId leaf) const { return leaf; }
  std::int32_t leftmost_leaf_key(NodeId v) const { return lo_[v]; }
  std::int32_t rightmost_leaf_key(NodeId v) const { return hi_[v]; }
  std::int32_t leaf_count_under(NodeId v) const { return hi_[v] - lo_[v] + 1; }
  bool contains_leaf(NodeId v, std::int32_t key) const { return lo_[v] <= key && key <= hi_[v]; }

  std::span<const NodeId> children(NodeId v) const {
    return {child_ids_.data() + child_begin_[v], child_ids_.data() + child_begin_[v + 1]};
  }
  NodeId child(NodeId v, char symbol) const;

  // First symbol of the edge entering v.
  char edge_symbol(NodeId v) const { return text_[label_start_[v] + depth_[parent_[v]]]; }
  std::int32_t edge_length(NodeId v) const { return depth_[v] - depth_[parent_[v]]; }
  std::string_view edge_label(NodeId v) const;
  std::string_view path_label(NodeId v) const;

  NodeId leaf_for_suffix(std::int32_t i) const;
  // Suffix indexes in left-to-right leaf order.
  std::span<const std::int32_t> left_to_right_suffix_indexes() const {
    return {label_start_.data(), static_cast<std::size_t>(n())};
  }
  // Suffix indexes of the leaves under v.
  std::span<const std::int32_t> leaves_under(NodeId v) const {
    return {label_start_.data() + lo_[v], static_cast<std::size_t>(hi_[v] - lo_[v] + 1)};
  }

  WalkResult walk(NodeId from, std::string_view s, WalkMode mode) const;

  std::int32_t height() const;

 private:
  Text text_;
  std::vector<NodeId> parent_;
  std::vector<std::int32_t> depth_;
  std::vector<std::int32_t> label_start_;
  std::vector<NodeId> suffix_link_;
  std::vector<std::int32_t> lo_;
  std::vector<std::int32_t> hi_;
  std::vector<std::int32_t> child_begin_;
  std::vector<NodeId> child_ids_;
  std::vector<NodeId> leaf_by_suffix_;
};

}  // namespace kmm
