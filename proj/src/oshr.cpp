#include "kmm/oshr.hpp"

#include <algorithm>

#include "kmm/cost_counters.hpp"

namespace kmm {

namespace {

void add(CostCounters* c, std::uint64_t v) {
  if (c) c->preprocessing += v;
}

}  // namespace

Oshr Oshr::preprocess(const SuffixTree& tree, CostCounters* counters) {
  Oshr o(tree);
  o.build_oshr();
  add(counters, static_cast<std::uint64_t>(tree.internal_count()));
  o.mark_inbetween_nodes(counters);
  o.collect_oshr_lists();
  add(counters, static_cast<std::uint64_t>(tree.internal_count()));
  return o;
}

void Oshr::build_oshr() {
  const SuffixTree& t = *tree_;
  const std::int32_t total = t.node_count();
  oshr_begin_.assign(total + 1, 0);
  grand_.assign(total, 0);
  for (NodeId v = t.first_internal(); v < t.root(); ++v) {
    ++oshr_begin_[t.suffix_link(v) + 1];
  }
  for (std::int32_t i = 0; i < total; ++i) oshr_begin_[i + 1] += oshr_begin_[i];
  oshr_child_ids_.resize(oshr_begin_[total]);
  std::vector<std::int32_t> fill(oshr_begin_.begin(), oshr_begin_.end() - 1);
  // Ascending ids are suffix-tree postorder.
  for (NodeId v = t.first_internal(); v < t.root(); ++v) {
    oshr_child_ids_[fill[t.suffix_link(v)]++] = v;
  }
  for (NodeId v = t.first_internal(); v < total; ++v) {
    for (NodeId c : t.children(v)) {
      if (t.is_internal(c)) {
        grand_[v] = 1;
        break;
      }
    }
  }

  postorder_.clear();
  postorder_.reserve(t.internal_count());
  struct Frame {
    NodeId node;
    std::int32_t next;
  };
  std::vector<Frame> stack{{t.root(), oshr_begin_[t.root()]}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < oshr_begin_[f.node + 1]) {
      const NodeId c = oshr_child_ids_[f.next++];
      stack.push_back({c, oshr_begin_[c]});
    } else {
      postorder_.push_back(f.node);
      stack.pop_back();
    }
  }
}

void Oshr::mark_inbetween_nodes(CostCounters* counters) {
  const SuffixTree& t = *tree_;
  const std::int32_t total = t.node_count();
  const NodeId root = t.root();
  std::vector<std::vector<NodeId>> refs(total);
  std::uint64_t steps = 0;
  for (NodeId b = t.first_internal(); b < root; ++b) {
    const NodeId a = t.parent(b);
    const NodeId c = link_or_root(a);
    const NodeId d = t.suffix_link(b);
    ++steps;
    if (d == root) continue;
    for (NodeId x = t.parent(d); x != c; x = t.parent(x)) {
      refs[x].push_back(b);
      ++steps;
    }
  }
  add(counters, steps);
  inbetween_begin_.assign(total + 1, 0);
  for (std::int32_t v = 0; v < total; ++v) {
    inbetween_begin_[v + 1] = inbetween_begin_[v] + static_cast<std::int32_t>(refs[v].size());
  }
  inbetween_ids_.clear();
  inbetween_ids_.reserve(inbetween_begin_[total]);
  for (auto& r : refs) inbetween_ids_.insert(inbetween_ids_.end(), r.begin(), r.end());
}

void Oshr::collect_oshr_lists() {
  const SuffixTree& t = *tree_;
  const std::int32_t total = t.node_count();
  const NodeId first = t.first_internal();
  oshr_leaves_.clear();
  oshr_internals_.clear();
  leaf_range_.assign(total, ListRange{});
  internal_range_.assign(total, ListRange{});

  // Smallest internal id in each subtree; ids are postorder so the subtree is a contiguous id run.
  std::vector<NodeId> first_in_subtree(total, kNoNode);
  std::vector<std::int32_t> leaves_before(total + 1, 0);
  std::vector<std::int32_t> internals_before(total + 1, 0);
  for (NodeId v = first; v < total; ++v) {
    NodeId lowest = v;
    for (NodeId c : t.children(v)) {
      if (t.is_internal(c)) lowest = std::min(lowest, first_in_subtree[c]);
    }
    first_in_subtree[v] = lowest;
    leaves_before[v + 1] = leaves_before[v];
    internals_before[v + 1] = internals_before[v];
    if (is_oshr_leaf(v)) {
      oshr_leaves_.push_back(v);
      ++leaves_before[v + 1];
    } else {
      oshr_internals_.push_back(v);
      ++internals_before[v + 1];
    }
  }
  for (NodeId v = first; v < total; ++v) {
    const NodeId lo = first_in_subtree[v];
    leaf_range_[v] = {leaves_before[lo], leaves_before[v] - 1};
    internal_range_[v] = {internals_before[lo], internals_before[v] - 1};
  }
}

}  // namespace kmm
