#include "kmm/search.hpp"

#include <algorithm>
#include <stdexcept>

#include "kmm/errors.hpp"

namespace kmm {

SuffixWalkTable SuffixWalkTable::build(const SuffixTree& t, std::string_view p, std::uint64_t* steps) {
  SuffixWalkTable table;
  table.root_ = t.root();
  const auto m = static_cast<std::int32_t>(p.size());
  table.entries_.resize(m);
  const std::string_view s = t.text().str();
  std::uint64_t count = 0;

  NodeId node = t.root();
  NodeId edge = kNoNode;
  std::int32_t off = 0;  // symbols matched along edge below node
  std::int32_t len = 0;  // total matched from i
  for (std::int32_t i = 0; i < m; ++i) {
    while (true) {
      if (off == 0) {
        if (i + len == m) break;
        edge = t.child(node, p[i + len]);
        ++count;
        if (edge == kNoNode) break;
      }
      const std::int32_t base = t.label_start(edge) + t.depth(node);
      const std::int32_t el = t.edge_length(edge);
      while (i + len < m && off < el && s[base + off] == p[i + len]) {
        ++off;
        ++len;
        ++count;
      }
      if (off == el) {
        node = edge;
        off = 0;
        continue;
      }
      break;
    }
    table.entries_[i] = {off > 0 ? edge : node, len, off > 0};
    if (len == 0) continue;
    // Move to suffix i + 1: follow the suffix link, then skip/count down.
    if (node != t.root()) node = t.suffix_link(node);
    --len;
    off = 0;
    std::int32_t g = len - t.depth(node);
    while (g > 0) {
      edge = t.child(node, p[i + 1 + t.depth(node)]);
      ++count;
      const std::int32_t el = t.edge_length(edge);
      if (g >= el) {
        node = edge;
        g -= el;
      } else {
        off = g;
        g = 0;
      }
    }
  }
  if (steps) *steps += count;
  return table;
}

NodeId SuffixWalkTable::sink(std::size_t i) const {
  if (i == entries_.size()) return root_;
  return fully_matched(i) ? entries_[i].end_node : kNoNode;
}

SuffixWalkTable precompute_suffix_walks(const SuffixTree& tree, std::string_view pattern) {
  return SuffixWalkTable::build(tree, pattern);
}

BacktrackResult backtrack_lookup(const SuffixTree& t, const OtIndex& paths, NodeId t_sigma, NodeId a,
                                 std::string_view letter) {
  BacktrackResult r;
  const OtRange range = paths.range(a);
  NodeId w = t_sigma;
  while (true) {
    if (t.is_internal(w)) {
      if (auto key = first_in_range(paths.postings(w), range, letter)) {
        r.node = w;
        r.key = *key;
        return r;
      }
    }
    if (w == t.root()) return r;
    w = t.parent(w);
    ++r.steps;
  }
}

struct Searcher::Context {
  std::string_view p;
  int k = 0;
  SuffixWalkTable table;
  std::vector<Match> out;
  QueryStats stats;
  // Current substituted suffix X = sigma + p[j+1..], with j the depth of the branching node.
  std::int32_t j = 0;
  char sigma = 0;

  std::int32_t x_len() const { return static_cast<std::int32_t>(p.size()) - j; }
  char x(std::int32_t i) const { return i == 0 ? sigma : p[j + i]; }
};

Searcher::Searcher(const SuffixTree& tree, Variant variant, int built_k, const OtIndex* suffix_index,
                   const OtIndex* path_index)
    : tree_(&tree), variant_(variant), built_k_(built_k), suffix_index_(suffix_index), path_index_(path_index) {
  const bool needs_suffix = variant != Variant::base_paths;
  const bool needs_paths = variant == Variant::base_paths || variant == Variant::base_uncle;
  if ((needs_suffix && !suffix_index) || (needs_paths && !path_index)) {
    throw std::invalid_argument("searcher is missing an index for variant " + std::string(variant_name(variant)));
  }
}

namespace {

// Walks X (given by accessor) from node; returns the node at or below its end, or kNoNode.
template <typename At>
NodeId locus_from(const SuffixTree& t, NodeId node, std::int32_t len, At&& at, std::uint64_t& steps) {
  const std::string_view s = t.text().str();
  std::int32_t i = 0;
  while (i < len) {
    const NodeId c = t.child(node, at(i));
    ++steps;
    if (c == kNoNode) return kNoNode;
    const std::int32_t base = t.label_start(c) + t.depth(node);
    const std::int32_t el = t.edge_length(c);
    for (std::int32_t off = 0; off < el && i < len; ++off, ++i) {
      if (s[base + off] != at(i)) return kNoNode;
    }
    steps += static_cast<std::uint64_t>(el);
    node = c;
  }
  return node;
}

void report_leaves(const SuffixTree& t, NodeId v, int used, std::vector<Match>& out) {
  for (std::int32_t i : t.leaves_under(v)) out.push_back({i, used});
}

}  // namespace

MatchResult Searcher::search(const Query& q, QueryStats* stats) const {
  if (q.pattern.empty()) throw std::invalid_argument("pattern must not be empty");
  if (q.k < 0) throw std::invalid_argument("mismatch budget must be non-negative");
  if (q.k > built_k_) {
    throw UnsupportedQueryError("query budget " + std::to_string(q.k) + " exceeds the index's built k " +
                                std::to_string(built_k_));
  }
  if (q.pattern.find(kTerminator) != std::string::npos) {
    throw std::invalid_argument("pattern must not contain the terminator symbol");
  }
  const SuffixTree& t = *tree_;
  const std::string_view s = t.text().str();
  Context ctx;
  ctx.p = q.pattern;
  ctx.k = q.k;
  ctx.table = SuffixWalkTable::build(t, ctx.p, &ctx.stats.steps);
  const auto m = static_cast<std::int32_t>(ctx.p.size());

  struct State {
    NodeId node;
    NodeId child;  // kNoNode when positioned exactly at node
    std::int32_t j;
    int used;
  };
  std::vector<State> stack{{t.root(), kNoNode, 0, 0}};
  while (!stack.empty()) {
    State st = stack.back();
    stack.pop_back();
    while (true) {
      ++ctx.stats.steps;
      if (st.j == m) {
        report_leaves(t, st.child != kNoNode ? st.child : st.node, st.used, ctx.out);
        break;
      }
      if (st.child == kNoNode) {
        const char want = ctx.p[st.j];
        if (st.used < ctx.k) {
          for (NodeId c : t.children(st.node)) {
            const char sym = t.edge_symbol(c);
            if (sym == want || sym == kTerminator) continue;
            if (st.used + 1 == ctx.k) {
              terminal_step(ctx, st.node, sym, st.used + 1);
            } else {
              stack.push_back({st.node, c, st.j + 1, st.used + 1});
            }
          }
        }
        const NodeId c = t.child(st.node, want);
        if (c == kNoNode) break;
        st.child = c;
        ++st.j;
        continue;
      }
      if (st.j == t.depth(st.child)) {
        if (t.is_leaf(st.child)) break;
        st.node = st.child;
        st.child = kNoNode;
        continue;
      }
      const char tc = s[t.label_start(st.child) + st.j];
      if (tc == kTerminator) break;
      if (tc != ctx.p[st.j]) {
        if (st.used == ctx.k) break;
        ++st.used;
      }
      ++st.j;
    }
  }

  std::sort(ctx.out.begin(), ctx.out.end());
  MatchResult r;
  r.matches.reserve(ctx.out.size());
  for (const Match& mt : ctx.out) {
    if (!r.matches.empty() && r.matches.back().position == mt.position) {
      throw ConsistencyError("position " + std::to_string(mt.position) + " reported twice");
    }
    r.matches.push_back(mt);
  }
  if (stats) *stats = ctx.stats;
  return r;
}

void Searcher::terminal_step(Context& ctx, NodeId a, char sigma, int used) const {
  ctx.j = tree_->depth(a);
  ctx.sigma = sigma;
  if (variant_ == Variant::base_paths) {
    base_path_step(ctx, a, sigma, used);
  } else {
    suffix_variant_step(ctx, a, sigma, used);
  }
}

void Searcher::suffix_variant_step(Context& ctx, NodeId a, char sigma, int used) const {
  const SuffixTree& t = *tree_;
  const OtIndex& idx = *suffix_index_;
  auto at = [&](std::int32_t i) { return ctx.x(i); };
  const NodeId target = locus_from(t, t.root(), ctx.x_len(), at, ctx.stats.steps);
  if (target == kNoNode) return;

  const PostingView posting = idx.postings(target);
  const OtRange range = idx.range(a);
  const bool by_letter = t.is_leaf(target) || t.depth(target) >= built_k_;
  const std::string_view letter = t.path_label(target).substr(0, std::min(built_k_, t.depth(target)));
  ++ctx.stats.lookups;

  if (variant_ == Variant::base_suffix_trivial) {
    auto keys = by_letter ? lookup_ot_range(posting, range, letter) : lookup_ot_range(posting, range);
    for (std::int32_t key : keys) {
      const CatalogEntry& e = idx.catalog()[key];
      ctx.out.push_back({e.guided_suffix + e.top_depth - ctx.j, used});
    }
    return;
  }
  auto hit = by_letter ? first_in_range(posting, range, letter) : first_in_range(posting, range);
  if (hit) {
    const NodeId loc = locus_from(t, a, ctx.x_len(), at, ctx.stats.steps);
    if (loc == kNoNode) throw ConsistencyError("indexed suffix not found below its node");
    report_leaves(t, loc, used, ctx.out);
    return;
  }
  if (variant_ == Variant::base_uncle) base_path_step(ctx, a, sigma, used);
}

void Searcher::base_path_step(Context& ctx, NodeId a, char sigma, int used) const {
  (void)sigma;
  const SuffixTree& t = *tree_;
  const OtIndex& idx = *path_index_;
  const std::string_view s = t.text().str();
  const std::int32_t len = ctx.x_len();
  const std::int32_t kb = built_k_;
  auto at = [&](std::int32_t i) { return ctx.x(i); };

  if (len <= kb - 1) {
    const NodeId loc = locus_from(t, a, len, at, ctx.stats.steps);
    if (loc != kNoNode) report_leaves(t, loc, used, ctx.out);
    return;
  }

  // Internal nodes within k-1 symbols below a are not indexed; walk to them directly.
  NodeId y = a;
  std::int32_t consumed = 0;
  while (true) {
    const NodeId c = t.child(y, ctx.x(consumed));
    ++ctx.stats.steps;
    if (c == kNoNode) return;
    if (t.is_leaf(c)) break;
    const std::int32_t el = t.edge_length(c);
    if (consumed + el > kb - 1) break;
    const std::int32_t base = t.label_start(c) + t.depth(y);
    for (std::int32_t off = 0; off < el; ++off) {
      if (s[base + off] != ctx.x(consumed + off)) return;
    }
    consumed += el;
    y = c;
  }

  const auto rest = static_cast<std::size_t>(ctx.j + kb);
  const NodeId sink = ctx.table.sink(rest);
  if (sink == kNoNode) return;
  std::string letter(static_cast<std::size_t>(kb), '\0');
  for (std::int32_t i = 0; i < kb; ++i) letter[i] = ctx.x(i);
  ++ctx.stats.lookups;
  const BacktrackResult hit = backtrack_lookup(t, idx, sink, a, letter);
  ctx.stats.backtrack_steps += static_cast<std::uint64_t>(hit.steps);
  ctx.stats.lookups += static_cast<std::uint64_t>(hit.steps);
  if (hit.found()) {
    const CatalogEntry& e = idx.catalog()[hit.key];
    const std::int32_t shift = e.top_depth - ctx.j;
    const std::int32_t target = e.bottom_depth - shift;
    NodeId ptr = a;
    while (t.depth(ptr) < target) {
      ptr = t.child(ptr, s[e.guided_suffix + shift + t.depth(ptr)]);
      ++ctx.stats.steps;
    }
    if (t.depth(ptr) != target) throw ConsistencyError("base-path catalog entry does not resolve to a node");
    y = ptr;
  }

  const std::int32_t done = t.depth(y) - ctx.j;
  if (done >= len) {
    report_leaves(t, y, used, ctx.out);
    return;
  }
  if (done == 0) {
    const NodeId loc = locus_from(t, a, len, at, ctx.stats.steps);
    if (loc != kNoNode) report_leaves(t, loc, used, ctx.out);
    return;
  }
  for (std::int32_t pos : match_leaf_and_edge(y, ctx.p, ctx.table, static_cast<std::size_t>(ctx.j + done))) {
    ctx.out.push_back({pos, used});
  }
}

std::vector<std::int32_t> Searcher::match_leaf_and_edge(NodeId y, std::string_view pattern,
                                                        const SuffixWalkTable& table, std::size_t z_begin) const {
  const SuffixTree& t = *tree_;
  std::vector<std::int32_t> out;
  if (z_begin >= pattern.size()) {
    for (std::int32_t i : t.leaves_under(y)) out.push_back(i);
    return out;
  }
  const NodeId c = t.child(y, pattern[z_begin]);
  if (c == kNoNode) return out;
  const NodeId sink = table.sink(z_begin);
  if (sink == kNoNode) return out;
  // label(y) + Z occurs through c iff the suffix starting where c's edge begins lies under Z's sink.
  const std::int32_t q = t.label_start(c) + t.depth(y);
  if (!t.contains_leaf(sink, t.leaf_key(t.leaf_for_suffix(q)))) return out;
  if (t.is_leaf(c)) {
    out.push_back(t.suffix_index(c));
    return out;
  }
  const auto z_len = static_cast<std::int32_t>(pattern.size() - z_begin);
  if (z_len < t.edge_length(c)) {
    for (std::int32_t i : t.leaves_under(c)) out.push_back(i);
  }
  return out;
}

}  // namespace kmm
