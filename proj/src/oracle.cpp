#include "kmm/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace kmm {

std::int32_t hamming(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming distance needs equal lengths");
  std::int32_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

MatchResult brute_force_hamming(const Text& text, std::string_view pattern, int k) {
  if (pattern.empty()) throw std::invalid_argument("pattern must not be empty");
  if (pattern.find(kTerminator) != std::string_view::npos) {
    throw std::invalid_argument("pattern must not contain the terminator symbol");
  }
  MatchResult r;
  const std::string_view body = text.body();
  if (pattern.size() > body.size()) return r;
  for (std::size_t i = 0; i + pattern.size() <= body.size(); ++i) {
    int d = 0;
    for (std::size_t j = 0; j < pattern.size() && d <= k; ++j) d += body[i + j] != pattern[j];
    if (d <= k) r.matches.push_back({static_cast<std::int64_t>(i), d});
  }
  return r;
}

namespace {

std::vector<std::int32_t> subtree_set(const SuffixTree& t, NodeId v) {
  std::vector<std::int32_t> out;
  for (std::int32_t i : t.leaves_under(v)) out.push_back(i + t.depth(v));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> internal_descendants(const SuffixTree& t, NodeId v) {
  std::vector<NodeId> out;
  std::vector<NodeId> stack;
  for (NodeId c : t.children(v)) {
    if (t.is_internal(c)) stack.push_back(c);
  }
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    out.push_back(x);
    for (NodeId c : t.children(x)) {
      if (t.is_internal(c)) stack.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::int32_t>> naive_base_suffixes(const Oshr& oshr) {
  const SuffixTree& t = oshr.tree();
  std::vector<std::vector<std::int32_t>> out(t.node_count());
  for (NodeId v = t.first_internal(); v <= t.root(); ++v) {
    std::vector<std::int32_t> mine = subtree_set(t, v);
    for (NodeId c : oshr.oshr_children(v)) {
      std::vector<std::int32_t> theirs = subtree_set(t, c);
      std::vector<std::int32_t> diff;
      std::set_difference(mine.begin(), mine.end(), theirs.begin(), theirs.end(), std::back_inserter(diff));
      mine.swap(diff);
    }
    out[v] = std::move(mine);
  }
  return out;
}

std::set<std::pair<NodeId, NodeId>> naive_base_paths(const Oshr& oshr) {
  const SuffixTree& t = oshr.tree();
  const std::string_view s = t.text().str();
  std::set<std::pair<NodeId, NodeId>> out;
  // Labels already seen under each node, keyed by node; a node inherits every label seen at
  // the nodes linking to it.
  std::vector<std::unordered_set<std::string_view>> seen(t.node_count());
  for (NodeId v : oshr.postorder()) {
    std::unordered_set<std::string_view> inherited;
    for (NodeId c : oshr.oshr_children(v)) {
      inherited.insert(seen[c].begin(), seen[c].end());
      seen[c].clear();
    }
    std::unordered_set<std::string_view> mine;
    for (NodeId y : internal_descendants(t, v)) {
      const std::string_view label = s.substr(t.label_start(y) + t.depth(v), t.depth(y) - t.depth(v));
      mine.insert(label);
      if (!inherited.count(label)) out.insert({v, y});
    }
    seen[v] = std::move(mine);
  }
  return out;
}

std::vector<std::vector<std::int32_t>> naive_uncle_suffixes(const Oshr& oshr) {
  const SuffixTree& t = oshr.tree();
  std::vector<std::vector<std::int32_t>> out(t.node_count());
  std::vector<std::uint8_t> claimed(t.n(), 0);
  for (NodeId v : oshr.postorder()) {
    for (std::int32_t i : t.leaves_under(v)) {
      const std::int32_t p = i + t.depth(v);
      const NodeId lp = t.parent(t.leaf_for_suffix(i));
      if (claimed[p] || !oshr.is_grand(lp) || lp == v) continue;
      claimed[p] = 1;
      out[v].push_back(p);
    }
    std::sort(out[v].begin(), out[v].end());
  }
  return out;
}

std::vector<std::vector<NodeId>> naive_inbetween_refs(const Oshr& oshr) {
  const SuffixTree& t = oshr.tree();
  const NodeId root = t.root();
  std::vector<std::vector<NodeId>> out(t.node_count());
  for (NodeId b = t.first_internal(); b < root; ++b) {
    const NodeId a = t.parent(b);
    const NodeId c = a == root ? root : t.suffix_link(a);
    const NodeId d = t.suffix_link(b);
    if (d == root) continue;
    // Root path of d, from d upward, stopping at c.
    std::vector<NodeId> chain;
    for (NodeId x = d; x != root; x = t.parent(x)) chain.push_back(x);
    chain.push_back(root);
    auto it = std::find(chain.begin(), chain.end(), c);
    if (it == chain.end()) throw std::logic_error("suffix link of a parent is not an ancestor");
    for (auto x = chain.begin() + 1; x != it; ++x) out[*x].push_back(b);
  }
  return out;
}

}  // namespace kmm
