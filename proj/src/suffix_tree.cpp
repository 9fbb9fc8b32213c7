#include "kmm/suffix_tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "kmm/errors.hpp"

namespace kmm {

namespace {

// Ukkonen's online construction over a node arena with sibling lists.
class Builder {
 public:
  explicit Builder(std::string_view s) : s_(s) {
    const std::size_t cap = 2 * s.size() + 2;
    start_.reserve(cap);
    end_.reserve(cap);
    link_.reserve(cap);
    first_child_.reserve(cap);
    next_sibling_.reserve(cap);
    root_ = make_node(-1, -1);
  }

  void run() {
    const auto n = static_cast<std::int32_t>(s_.size());
    for (std::int32_t pos = 0; pos < n; ++pos) extend(pos);
  }

  std::string_view s_;
  std::vector<std::int32_t> start_, end_, link_, first_child_, next_sibling_;
  std::int32_t root_ = 0;

  static constexpr std::int32_t kOpen = -2;

  std::int32_t edge_end(std::int32_t v) const {
    return end_[v] == kOpen ? static_cast<std::int32_t>(s_.size()) : end_[v];
  }

  std::int32_t find_child(std::int32_t v, char c) const {
    for (std::int32_t ch = first_child_[v]; ch != -1; ch = next_sibling_[ch]) {
      if (s_[start_[ch]] == c) return ch;
    }
    return -1;
  }

 private:
  std::int32_t make_node(std::int32_t start, std::int32_t end) {
    start_.push_back(start);
    end_.push_back(end);
    link_.push_back(-1);
    first_child_.push_back(-1);
    next_sibling_.push_back(-1);
    return static_cast<std::int32_t>(start_.size()) - 1;
  }

  void add_child(std::int32_t parent, std::int32_t child) {
    next_sibling_[child] = first_child_[parent];
    first_child_[parent] = child;
  }

  void replace_child(std::int32_t parent, std::int32_t old_child, std::int32_t new_child) {
    std::int32_t* slot = &first_child_[parent];
    while (*slot != old_child) slot = &next_sibling_[*slot];
    next_sibling_[new_child] = next_sibling_[old_child];
    *slot = new_child;
    next_sibling_[old_child] = -1;
  }

  void add_link(std::int32_t v) {
    if (need_link_ != -1 && need_link_ != root_) link_[need_link_] = v;
    need_link_ = v;
  }

  void extend(std::int32_t pos) {
    need_link_ = -1;
    ++remainder_;
    while (remainder_ > 0) {
      if (active_length_ == 0) active_edge_ = pos;
      const char ac = s_[active_edge_];
      const std::int32_t next = find_child(active_node_, ac);
      if (next == -1) {
        add_child(active_node_, make_node(pos, kOpen));
        add_link(active_node_);
      } else {
        const std::int32_t len = std::min(edge_end(next), pos + 1) - start_[next];
        if (active_length_ >= len) {
          active_edge_ += len;
          active_length_ -= len;
          active_node_ = next;
          continue;
        }
        if (s_[start_[next] + active_length_] == s_[pos]) {
          ++active_length_;
          add_link(active_node_);
          break;
        }
        const std::int32_t split = make_node(start_[next], start_[next] + active_length_);
        replace_child(active_node_, next, split);
        add_child(split, make_node(pos, kOpen));
        start_[next] += active_length_;
        add_child(split, next);
        add_link(split);
      }
      --remainder_;
      if (active_node_ == root_ && active_length_ > 0) {
        --active_length_;
        active_edge_ = pos - remainder_ + 1;
      } else if (active_node_ != root_) {
        active_node_ = link_[active_node_] == -1 ? root_ : link_[active_node_];
      }
    }
  }

  std::int32_t need_link_ = -1;
  std::int32_t remainder_ = 0;
  std::int32_t active_node_ = 0;
  std::int32_t active_edge_ = 0;
  std::int32_t active_length_ = 0;
};

}  // namespace

SuffixTree SuffixTree::build(const Text& text) {
  if (text.size() < 2) throw InputFormatError("text too short");
  const std::string_view s = text.str();
  Builder b(s);
  b.run();

  const auto n = static_cast<std::int32_t>(s.size());
  const auto total = static_cast<std::int32_t>(b.start_.size());

  SuffixTree t;
  t.text_ = text;
  t.parent_.assign(total, kNoNode);
  t.depth_.assign(total, 0);
  t.label_start_.assign(total, 0);
  t.suffix_link_.assign(total, kNoNode);
  t.lo_.assign(total, 0);
  t.hi_.assign(total, 0);
  t.leaf_by_suffix_.assign(n, kNoNode);

  // Canonical renumbering by an iterative DFS with children in symbol order.
  std::vector<std::int32_t> new_id(total, -1);
  std::vector<std::int32_t> bdepth(total, 0);
  std::vector<std::int32_t> bparent(total, -1);
  std::vector<std::vector<std::int32_t>> sorted_children(total);
  std::int32_t next_leaf = 0;
  std::int32_t next_internal = n;

  struct Frame {
    std::int32_t node;
    std::size_t next;
  };
  std::vector<Frame> stack;
  stack.push_back({b.root_, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    const std::int32_t v = f.node;
    if (f.next == 0 && sorted_children[v].empty()) {
      for (std::int32_t ch = b.first_child_[v]; ch != -1; ch = b.next_sibling_[ch]) {
        sorted_children[v].push_back(ch);
      }
      std::sort(sorted_children[v].begin(), sorted_children[v].end(),
                [&](std::int32_t x, std::int32_t y) { return symbol_less(s[b.start_[x]], s[b.start_[y]]); });
    }
    if (f.next < sorted_children[v].size()) {
      const std::int32_t c = sorted_children[v][f.next++];
      bparent[c] = v;
      bdepth[c] = bdepth[v] + (b.edge_end(c) - b.start_[c]);
      if (b.first_child_[c] == -1) {
        const std::int32_t id = next_leaf++;
        new_id[c] = id;
        const std::int32_t suffix = n - bdepth[c];
        t.depth_[id] = bdepth[c];
        t.label_start_[id] = suffix;
        t.lo_[id] = t.hi_[id] = id;
        t.leaf_by_suffix_[suffix] = id;
      } else {
        stack.push_back({c, 0});
      }
      continue;
    }
    const std::int32_t id = next_internal++;
    new_id[v] = id;
    t.depth_[id] = bdepth[v];
    t.label_start_[id] = v == b.root_ ? 0 : b.start_[v] - bdepth[bparent[v]];
    stack.pop_back();
  }
  if (next_leaf != n || next_internal != total) {
    throw ConsistencyError("suffix tree construction produced an unexpected node count");
  }

  t.child_begin_.assign(total + 1, 0);
  for (std::int32_t v = 0; v < total; ++v) {
    t.child_begin_[new_id[v] + 1] = static_cast<std::int32_t>(sorted_children[v].size());
  }
  for (std::int32_t i = 0; i < total; ++i) t.child_begin_[i + 1] += t.child_begin_[i];
  t.child_ids_.resize(t.child_begin_[total]);
  for (std::int32_t v = 0; v < total; ++v) {
    const std::int32_t id = new_id[v];
    std::int32_t pos = t.child_begin_[id];
    for (std::int32_t c : sorted_children[v]) {
      t.child_ids_[pos++] = new_id[c];
      t.parent_[new_id[c]] = id;
    }
  }
  // Internal ids are postorder, so children are final before their parent.
  for (std::int32_t id = n; id < total; ++id) {
    auto kids = t.children(id);
    t.lo_[id] = t.lo_[kids.front()];
    t.hi_[id] = t.hi_[kids.back()];
  }
  for (std::int32_t v = 0; v < total; ++v) {
    if (v == b.root_ || b.first_child_[v] == -1) continue;
    const std::int32_t target = b.link_[v] == -1 ? b.root_ : b.link_[v];
    t.suffix_link_[new_id[v]] = new_id[target];
  }
  return t;
}

NodeId SuffixTree::child(NodeId v, char symbol) const {
  auto kids = children(v);
  const NodeId* lo = kids.data();
  const NodeId* hi = kids.data() + kids.size();
  if (kids.size() <= 8) {
    for (const NodeId* p = lo; p != hi; ++p) {
      if (edge_symbol(*p) == symbol) return *p;
    }
    return kNoNode;
  }
  const int r = symbol_rank(symbol);
  const NodeId* it =
      std::lower_bound(lo, hi, r, [&](NodeId c, int rank) { return symbol_rank(edge_symbol(c)) < rank; });
  return (it != hi && edge_symbol(*it) == symbol) ? *it : kNoNode;
}

std::string_view SuffixTree::edge_label(NodeId v) const {
  if (v == root()) return {};
  const std::int32_t pd = depth_[parent_[v]];
  return text_.str().substr(label_start_[v] + pd, depth_[v] - pd);
}

std::string_view SuffixTree::path_label(NodeId v) const {
  return text_.str().substr(label_start_[v], depth_[v]);
}

NodeId SuffixTree::leaf_for_suffix(std::int32_t i) const {
  if (i < 0 || i >= n()) {
    throw std::out_of_range("suffix index " + std::to_string(i) + " outside [0, " + std::to_string(n()) + ")");
  }
  return leaf_by_suffix_[i];
}

WalkResult SuffixTree::walk(NodeId from, std::string_view s, WalkMode mode) const {
  WalkResult r;
  r.end_node = from;
  NodeId node = from;
  std::size_t i = 0;
  const std::string_view t = text_.str();
  while (i < s.size()) {
    const NodeId c = child(node, s[i]);
    if (c == kNoNode) break;
    const std::int32_t begin = label_start_[c] + depth_[node];
    const std::int32_t len = depth_[c] - depth_[node];
    std::int32_t off = 0;
    while (off < len && i < s.size()) {
      if (t[begin + off] != s[i]) {
        if (mode == WalkMode::exact) break;
        r.mismatch_positions.push_back(i);
      }
      ++off;
      ++i;
    }
    if (off == len) {
      node = c;
      r.end_node = c;
      r.on_edge = false;
      r.edge_offset = 0;
      continue;
    }
    r.end_node = c;
    r.on_edge = true;
    r.edge_offset = off;
    break;
  }
  r.matched = i;
  return r;
}

std::int32_t SuffixTree::height() const {
  std::int32_t h = 0;
  for (NodeId v = n(); v < node_count(); ++v) h = std::max(h, depth_[v]);
  return h;
}

}  // namespace kmm
