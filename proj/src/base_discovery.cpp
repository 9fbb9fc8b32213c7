#include "kmm/base_discovery.hpp"

#include <bitset>

#include "kmm/cost_counters.hpp"

namespace kmm {

NodeSuffixLists::NodeSuffixLists(const std::vector<std::vector<std::int32_t>>& per_node) {
  begin_.assign(per_node.size() + 1, 0);
  std::size_t total = 0;
  for (std::size_t v = 0; v < per_node.size(); ++v) {
    total += per_node[v].size();
    begin_[v + 1] = static_cast<std::int32_t>(total);
  }
  values_.reserve(total);
  for (const auto& list : per_node) values_.insert(values_.end(), list.begin(), list.end());
}

NodeSuffixLists find_base_suffixes(const Oshr& oshr, CostCounters* counters) {
  const SuffixTree& t = oshr.tree();
  const std::int32_t n = t.n();
  const NodeId root = t.root();
  std::vector<std::vector<std::int32_t>> base(t.node_count());
  std::uint64_t steps = 0;

  auto add = [&](NodeId v, std::int32_t value) {
    base[v].push_back(value);
    ++steps;
  };

  for (NodeId cur = t.first_internal(); cur <= root; ++cur) {
    ++steps;
    const NodeId end = oshr.link_or_root(cur);
    for (NodeId ch : t.children(cur)) {
      if (!t.is_leaf(ch)) continue;
      const std::int32_t i = t.suffix_index(ch);
      if (i + 1 >= n) continue;
      const NodeId next_parent = t.parent(t.leaf_for_suffix(i + 1));
      if (next_parent == end) continue;
      NodeId temp = next_parent;
      if (cur == root) {
        while (true) {
          ++steps;
          if (oshr.is_oshr_internal(temp)) add(temp, i + 1 + t.depth(temp));
          if (temp == root) break;
          temp = t.parent(temp);
        }
      } else {
        while (temp != end) {
          ++steps;
          if (oshr.is_oshr_internal(temp)) add(temp, i + 1 + t.depth(temp));
          temp = t.parent(temp);
        }
      }
    }

    if (cur != root && t.suffix_link(cur) != root) {
      const NodeId top = oshr.link_or_root(t.parent(cur));
      const NodeId bottom = t.parent(t.suffix_link(cur));
      for (NodeId x = bottom; x != top; x = t.parent(x)) {
        ++steps;
        if (!oshr.is_oshr_internal(x)) continue;
        for (std::int32_t li : t.leaves_under(cur)) add(x, li + 1 + t.depth(x));
      }
    }

    if (oshr.is_oshr_leaf(cur)) {
      for (std::int32_t li : t.leaves_under(cur)) add(cur, li + t.depth(cur));
    }
  }

  const NodeId leaf0 = t.leaf_for_suffix(0);
  if (t.parent(leaf0) != root) {
    NodeId temp = leaf0;
    while (temp != root) {
      temp = t.parent(temp);
      ++steps;
      if (oshr.is_oshr_internal(temp)) add(temp, t.depth(temp));
    }
  } else if (oshr.is_oshr_internal(root)) {
    add(root, 0);
  }

  if (oshr.is_oshr_internal(root)) {
    for (NodeId ch : t.children(root)) {
      ++steps;
      if (t.is_leaf(ch)) {
        const std::int32_t i = t.suffix_index(ch);
        if (i + 1 < n && t.parent(t.leaf_for_suffix(i + 1)) == root) add(root, i + 1);
      } else if (t.suffix_link(ch) != root) {
        for (std::int32_t li : t.leaves_under(ch)) add(root, li + 1);
      }
    }
  }

  if (counters) counters->base_suffix_finding += steps;
  return NodeSuffixLists(base);
}

UncleSuffixes find_base_uncle_suffixes(const Oshr& oshr, const NodeSuffixLists& base,
                                       CostCounters* counters) {
  const SuffixTree& t = oshr.tree();
  const NodeId root = t.root();
  std::vector<std::vector<std::int32_t>> uncle(t.node_count());
  UncleSuffixes out;
  out.singleton.assign(t.n(), 0);
  std::uint64_t steps = 0;

  auto claim = [&](NodeId v, std::int32_t value) {
    uncle[v].push_back(value);
    out.singleton[value] = 1;
    ++out.singleton_count;
  };

  for (NodeId cur = t.first_internal(); cur <= root; ++cur) {
    for (std::int32_t p : base.at(cur)) {
      ++steps;
      const std::int32_t si = p - t.depth(cur);
      const NodeId leaf_parent = t.parent(t.leaf_for_suffix(si));
      if (oshr.is_grand(leaf_parent) && leaf_parent != cur) {
        claim(cur, p);
        continue;
      }
      if (cur == root) continue;
      NodeId top = t.suffix_link(cur);
      std::int32_t next_si = si + 1;
      while (true) {
        ++steps;
        const NodeId lp = t.parent(t.leaf_for_suffix(next_si));
        if (oshr.is_grand(lp) && lp != top) {
          claim(top, next_si + t.depth(top));
          break;
        }
        if (top == root) break;
        ++next_si;
        top = t.suffix_link(top);
      }
    }
  }
  out.per_node = NodeSuffixLists(uncle);
  if (counters) counters->uncle_finding += steps;
  return out;
}

bool is_redundant_path(const Oshr& oshr, NodeId top, NodeId bottom) {
  const SuffixTree& t = oshr.tree();
  std::bitset<256> first;
  for (NodeId z : oshr.oshr_children(top)) {
    first.set(static_cast<unsigned char>(t.text()[t.label_start(z)]));
  }
  for (NodeId z : oshr.oshr_children(bottom)) {
    if (first.test(static_cast<unsigned char>(t.text()[t.label_start(z)]))) return true;
  }
  return false;
}

BottomCollector::BottomCollector(const Oshr& oshr)
    : oshr_(&oshr), stamp_(oshr.tree().node_count(), 0) {}

void BottomCollector::note(NodeId v, std::vector<NodeId>& out) {
  if (stamp_[v] == epoch_) return;
  stamp_[v] = epoch_;
  out.push_back(v);
}

void BottomCollector::candidates(NodeId visited, std::vector<NodeId>& out, std::uint64_t* steps) {
  const Oshr& o = *oshr_;
  const SuffixTree& t = o.tree();
  out.clear();
  ++epoch_;
  std::uint64_t s = 1;

  if (o.is_inbetween(visited) && o.is_oshr_internal(visited)) {
    for (NodeId r : o.inbetween_refs(visited)) {
      note(t.suffix_link(r), out);
      for (NodeId x : o.oshr_leaves_in(r)) note(t.suffix_link(x), out);
      for (NodeId x : o.oshr_internals_in(r)) note(t.suffix_link(x), out);
      s += 1 + o.oshr_leaf_range(r).size() + o.oshr_internal_range(r).size();
    }
  }
  for (NodeId x : o.oshr_leaves_in(visited)) note(x, out);
  s += o.oshr_leaf_range(visited).size();
  if (o.is_inbetween(visited) && o.is_oshr_leaf(visited)) {
    for (NodeId x : o.oshr_internals_in(visited)) note(x, out);
    s += o.oshr_internal_range(visited).size();
  }
  if (visited == t.root()) {
    for (NodeId ch : t.children(visited)) {
      ++s;
      if (t.is_leaf(ch) || t.suffix_link(ch) == t.root()) continue;
      note(t.suffix_link(ch), out);
      for (NodeId x : o.oshr_leaves_in(ch)) note(t.suffix_link(x), out);
      for (NodeId x : o.oshr_internals_in(ch)) note(t.suffix_link(x), out);
      s += o.oshr_leaf_range(ch).size() + o.oshr_internal_range(ch).size();
    }
  }
  if (steps) *steps += s;
}

void BottomCollector::bottoms(NodeId visited, std::vector<NodeId>& out, std::uint64_t* steps) {
  candidates(visited, out, steps);
  std::size_t keep = 0;
  for (NodeId b : out) {
    if (!is_redundant_path(*oshr_, visited, b)) out[keep++] = b;
  }
  out.resize(keep);
  if (steps) *steps += out.size();
}

std::vector<NodeId> collect_bottom_candidates(const Oshr& oshr, NodeId visited) {
  BottomCollector c(oshr);
  std::vector<NodeId> out;
  c.candidates(visited, out);
  return out;
}

std::vector<NodeId> find_base_paths_bottoms(const Oshr& oshr, NodeId visited) {
  BottomCollector c(oshr);
  std::vector<NodeId> out;
  c.bottoms(visited, out);
  return out;
}

std::vector<BasePath> find_base_paths(const Oshr& oshr, CostCounters* counters) {
  BottomCollector collector(oshr);
  std::vector<BasePath> paths;
  std::vector<NodeId> scratch;
  std::uint64_t steps = 0;
  for (NodeId v : oshr.postorder()) {
    collector.bottoms(v, scratch, &steps);
    for (NodeId b : scratch) paths.push_back({v, b});
  }
  if (counters) counters->base_path_finding += steps;
  return paths;
}

}  // namespace kmm
