#include "kmm/ot_index.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kmm/cost_counters.hpp"
#include "kmm/errors.hpp"

namespace kmm {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::base_suffix_trivial: return "base_suffix_trivial";
    case Variant::base_suffix_tails: return "base_suffix_tails";
    case Variant::base_paths: return "base_paths";
    case Variant::base_uncle: return "base_uncle";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (variant_name(v) == name) return v;
  }
  return std::nullopt;
}

std::string_view PostingView::transition(std::size_t i) const {
  const auto pos = static_cast<std::size_t>(transitions_[i]);
  return text_.substr(pos, std::min<std::size_t>(static_cast<std::size_t>(k_), text_.size() - pos));
}

LetterGroup PostingView::group(std::size_t g) const {
  auto pos = positions_.subspan(group_starts_[g], group_starts_[g + 1] - group_starts_[g]);
  return {transition(pos.front()), pos};
}

std::span<const std::int32_t> PostingView::letter_positions(std::string_view letter) const {
  std::size_t lo = 0;
  std::size_t hi = group_count();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (transition(positions_[group_starts_[mid]]) < letter) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo == group_count()) return {};
  LetterGroup g = group(lo);
  return g.letter == letter ? g.positions : std::span<const std::int32_t>{};
}

namespace {

// Positions in [first, last) of pos whose keys fall in range; pos is ascending by key.
std::span<const std::int32_t> positions_in_range(std::span<const std::int32_t> pos,
                                                 std::span<const std::int32_t> keys, OtRange range) {
  if (range.empty() || pos.empty()) return {};
  auto lo = std::lower_bound(pos.begin(), pos.end(), range.left,
                             [&](std::int32_t p, std::int32_t v) { return keys[p] < v; });
  auto hi = std::upper_bound(lo, pos.end(), range.right,
                             [&](std::int32_t v, std::int32_t p) { return v < keys[p]; });
  return {lo, hi};
}

std::span<const std::int32_t> keys_in_range(std::span<const std::int32_t> keys, OtRange range) {
  if (range.empty()) return {};
  auto lo = std::lower_bound(keys.begin(), keys.end(), range.left);
  auto hi = std::upper_bound(lo, keys.end(), range.right);
  return {lo, hi};
}

}  // namespace

std::vector<std::int32_t> lookup_ot_range(const PostingView& posting, OtRange range, std::string_view letter) {
  std::vector<std::int32_t> out;
  for (std::int32_t p : positions_in_range(posting.letter_positions(letter), posting.entries(), range)) {
    out.push_back(posting.entries()[p]);
  }
  return out;
}

std::vector<std::int32_t> lookup_ot_range(const PostingView& posting, OtRange range) {
  auto keys = keys_in_range(posting.entries(), range);
  return {keys.begin(), keys.end()};
}

std::optional<std::int32_t> first_in_range(const PostingView& posting, OtRange range, std::string_view letter) {
  auto hits = positions_in_range(posting.letter_positions(letter), posting.entries(), range);
  if (hits.empty()) return std::nullopt;
  return posting.entries()[hits.front()];
}

std::optional<std::int32_t> first_in_range(const PostingView& posting, OtRange range) {
  auto keys = keys_in_range(posting.entries(), range);
  if (keys.empty()) return std::nullopt;
  return keys.front();
}

PostingView OtIndex::postings(NodeId v) const {
  const auto b = static_cast<std::size_t>(offsets_[v]);
  const auto len = static_cast<std::size_t>(offsets_[v + 1] - offsets_[v]);
  const auto gb = static_cast<std::size_t>(group_offsets_[v]);
  const auto glen = static_cast<std::size_t>(group_offsets_[v + 1] - group_offsets_[v]);
  return PostingView(std::span(keys_).subspan(b, len), std::span(transitions_).subspan(b, len),
                     std::span(positions_).subspan(b, len), std::span(group_starts_).subspan(gb, glen), text_,
                     k_);
}

bool OtIndex::operator==(const OtIndex& o) const {
  return k_ == o.k_ && ranges_ == o.ranges_ && offsets_ == o.offsets_ && keys_ == o.keys_ &&
         transitions_ == o.transitions_ && catalog_ == o.catalog_;
}

void OtIndex::build_groups() {
  const auto nodes = static_cast<std::int32_t>(offsets_.size()) - 1;
  positions_.assign(keys_.size(), 0);
  group_offsets_.assign(nodes + 1, 0);
  group_starts_.clear();
  auto trans = [&](std::int32_t global) {
    const auto pos = static_cast<std::size_t>(transitions_[global]);
    return text_.substr(pos, std::min<std::size_t>(static_cast<std::size_t>(k_), text_.size() - pos));
  };
  for (std::int32_t v = 0; v < nodes; ++v) {
    const std::int32_t b = offsets_[v];
    const std::int32_t e = offsets_[v + 1];
    group_offsets_[v] = static_cast<std::int32_t>(group_starts_.size());
    if (b == e) continue;
    std::int32_t* pos = positions_.data() + b;
    std::iota(pos, pos + (e - b), 0);
    std::stable_sort(pos, pos + (e - b), [&](std::int32_t x, std::int32_t y) { return trans(b + x) < trans(b + y); });
    group_starts_.push_back(0);
    for (std::int32_t i = 1; i < e - b; ++i) {
      if (trans(b + pos[i]) != trans(b + pos[i - 1])) group_starts_.push_back(i);
    }
    group_starts_.push_back(e - b);
  }
  group_offsets_[nodes] = static_cast<std::int32_t>(group_starts_.size());
}

OtIndex OtIndex::from_raw(std::string_view text, int k, std::vector<OtRange> ranges,
                          std::vector<std::int32_t> offsets, std::vector<std::int32_t> keys,
                          std::vector<std::int32_t> transitions, std::vector<CatalogEntry> catalog) {
  if (offsets.size() != ranges.size() + 1 || keys.size() != transitions.size() ||
      offsets.empty() || offsets.front() != 0 || static_cast<std::size_t>(offsets.back()) != keys.size()) {
    throw InputFormatError("index posting arrays are inconsistent");
  }
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
    if (offsets[i] > offsets[i + 1]) throw InputFormatError("index posting offsets are not monotone");
    for (std::int32_t j = offsets[i] + 1; j < offsets[i + 1]; ++j) {
      if (keys[j - 1] >= keys[j]) throw InputFormatError("index postings are not strictly increasing");
    }
  }
  for (std::int32_t t : transitions) {
    if (t < 0 || static_cast<std::size_t>(t) >= text.size()) throw InputFormatError("transition offset out of range");
  }
  for (std::int32_t key : keys) {
    if (key < 0 || static_cast<std::size_t>(key) >= catalog.size()) throw InputFormatError("posting key out of range");
  }
  OtIndex idx;
  idx.text_ = text;
  idx.k_ = k;
  idx.ranges_ = std::move(ranges);
  idx.offsets_ = std::move(offsets);
  idx.keys_ = std::move(keys);
  idx.transitions_ = std::move(transitions);
  idx.catalog_ = std::move(catalog);
  idx.build_groups();
  return idx;
}

OtIndexBuilder::OtIndexBuilder(const SuffixTree& tree, int k)
    : tree_(&tree), k_(k), ranges_(tree.node_count()) {}

std::int32_t OtIndexBuilder::issue_key(CatalogEntry entry) {
  catalog_.push_back(entry);
  return counter();
}

void OtIndexBuilder::post(NodeId node, std::int32_t key, std::int32_t transition_pos) {
  post_node_.push_back(node);
  post_key_.push_back(key);
  post_trans_.push_back(transition_pos);
}

OtIndex OtIndexBuilder::finish() {
  const std::int32_t nodes = tree_->node_count();
  std::vector<std::int32_t> offsets(nodes + 1, 0);
  for (NodeId v : post_node_) ++offsets[v + 1];
  for (std::int32_t i = 0; i < nodes; ++i) offsets[i + 1] += offsets[i];
  std::vector<std::int32_t> keys(post_key_.size());
  std::vector<std::int32_t> trans(post_key_.size());
  std::vector<std::int32_t> fill(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < post_node_.size(); ++i) {
    const std::int32_t at = fill[post_node_[i]]++;
    keys[at] = post_key_[i];
    trans[at] = post_trans_[i];
  }
  std::vector<std::int32_t> order;
  for (std::int32_t v = 0; v < nodes; ++v) {
    const std::int32_t b = offsets[v];
    const std::int32_t e = offsets[v + 1];
    if (std::is_sorted(keys.begin() + b, keys.begin() + e)) {
      for (std::int32_t j = b + 1; j < e; ++j) {
        if (keys[j - 1] == keys[j]) throw ConsistencyError("node " + std::to_string(v) + " posted a key twice");
      }
      continue;
    }
    order.resize(e - b);
    std::iota(order.begin(), order.end(), b);
    std::sort(order.begin(), order.end(), [&](std::int32_t x, std::int32_t y) { return keys[x] < keys[y]; });
    std::vector<std::int32_t> k2(e - b), t2(e - b);
    for (std::int32_t j = 0; j < e - b; ++j) {
      k2[j] = keys[order[j]];
      t2[j] = trans[order[j]];
    }
    for (std::int32_t j = 1; j < e - b; ++j) {
      if (k2[j - 1] == k2[j]) throw ConsistencyError("node " + std::to_string(v) + " posted a key twice");
    }
    std::copy(k2.begin(), k2.end(), keys.begin() + b);
    std::copy(t2.begin(), t2.end(), trans.begin() + b);
  }
  post_node_.clear();
  post_key_.clear();
  post_trans_.clear();
  return OtIndex::from_raw(tree_->text().str(), k_, std::move(ranges_), std::move(offsets), std::move(keys),
                           std::move(trans), std::move(catalog_));
}

namespace {

// Runs visit(v) for each internal node in OSHR postorder and records the key range issued
// during v's OSHR subtree.
template <typename Visit>
void oshr_key_stack(const Oshr& oshr, OtIndexBuilder& builder, Visit&& visit) {
  const SuffixTree& t = oshr.tree();
  struct Frame {
    NodeId node;
    std::size_t next;
    std::int32_t left;
  };
  std::vector<Frame> stack{{t.root(), 0, builder.counter() + 1}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    auto kids = oshr.oshr_children(f.node);
    if (f.next < kids.size()) {
      const NodeId c = kids[f.next++];
      stack.push_back({c, 0, builder.counter() + 1});
      continue;
    }
    visit(f.node);
    builder.set_range(f.node, {f.left, builder.counter()});
    stack.pop_back();
  }
}

CatalogEntry suffix_entry(const SuffixTree& t, NodeId v, std::int32_t p) {
  const std::int32_t si = p - t.depth(v);
  return {si, t.depth(v), t.n() - si};
}

}  // namespace

std::int32_t longest_match_below(const SuffixTree& t, NodeId node, std::int32_t pos, std::int32_t cap,
                                 std::uint64_t* steps) {
  const std::string_view s = t.text().str();
  std::int32_t l = 0;
  while (l < cap) {
    const NodeId ch = t.child(node, s[pos + l]);
    if (steps) ++*steps;
    if (ch == kNoNode) return l;
    const std::int32_t begin = t.label_start(ch) + t.depth(node);
    const std::int32_t end = t.label_start(ch) + t.depth(ch);
    for (std::int32_t q = begin; q < end && l < cap; ++q, ++l) {
      if (steps) ++*steps;
      if (s[q] != s[pos + l]) return l;
    }
    node = ch;
  }
  return l;
}

OtIndex index_base_suffixes_trivial(const Oshr& oshr, const NodeSuffixLists& base, int k,
                                    CostCounters* counters) {
  const SuffixTree& t = oshr.tree();
  OtIndexBuilder b(t, k);
  std::uint64_t steps = 0;
  oshr_key_stack(oshr, b, [&](NodeId v) {
    ++steps;
    for (std::int32_t p : base.at(v)) {
      const std::int32_t key = b.issue_key(suffix_entry(t, v, p));
      for (NodeId node = t.leaf_for_suffix(p); node != t.root(); node = t.parent(node)) {
        b.post(node, key, p);
        ++steps;
      }
    }
  });
  if (counters) counters->indexing += steps;
  return b.finish();
}

OtIndex index_base_suffix_tails(const Oshr& oshr, const NodeSuffixLists& base, int k, CostCounters* counters) {
  const SuffixTree& t = oshr.tree();
  OtIndexBuilder b(t, k);
  std::uint64_t steps = 0;
  oshr_key_stack(oshr, b, [&](NodeId v) {
    ++steps;
    const std::int32_t d = t.depth(v);
    for (std::int32_t p : base.at(v)) {
      const std::int32_t key = b.issue_key(suffix_entry(t, v, p));
      std::int32_t req = 1;
      if (oshr.is_oshr_internal(v)) {
        req = t.depth(t.parent(t.leaf_for_suffix(p - d))) - d;
        std::int32_t longest = 0;
        for (NodeId c : oshr.oshr_children(v)) {
          longest = std::max(longest, longest_match_below(t, c, p, req, &steps));
        }
        req = std::max(1, std::min(req, longest + 1));
      }
      for (NodeId node = t.leaf_for_suffix(p); node != t.root() && t.depth(node) >= req; node = t.parent(node)) {
        b.post(node, key, p);
        ++steps;
      }
    }
  });
  if (counters) counters->indexing += steps;
  return b.finish();
}

OtIndex index_base_uncle_suffixes(const Oshr& oshr, const NodeSuffixLists& base, const UncleSuffixes& uncle,
                                  int k, CostCounters* counters) {
  const SuffixTree& t = oshr.tree();
  OtIndexBuilder b(t, k);
  std::uint64_t steps = 0;
  oshr_key_stack(oshr, b, [&](NodeId v) {
    ++steps;
    const std::int32_t d = t.depth(v);
    for (std::int32_t p : uncle.per_node.at(v)) {
      const std::int32_t key = b.issue_key(suffix_entry(t, v, p));
      const std::int32_t req = t.depth(t.parent(t.leaf_for_suffix(p - d))) - d;
      for (NodeId node = t.leaf_for_suffix(p); t.depth(node) > req; node = t.parent(node)) {
        b.post(node, key, p);
        ++steps;
      }
    }
    for (std::int32_t p : base.at(v)) {
      if (uncle.singleton[p]) continue;
      const std::int32_t key = b.issue_key(suffix_entry(t, v, p));
      for (NodeId node = t.leaf_for_suffix(p); node != t.root(); node = t.parent(node)) {
        b.post(node, key, p);
        ++steps;
      }
    }
  });
  if (counters) counters->indexing += steps;
  return b.finish();
}

BasePathBuild index_base_paths(const Oshr& oshr, int k, CostCounters* counters) {
  if (k < 1) throw std::invalid_argument("base-path indexing needs k >= 1");
  const SuffixTree& t = oshr.tree();
  BasePathBuild out{{}, {}, 0, OtIndexBuilder(t, k)};
  out.staging.resize(static_cast<std::size_t>(t.height()) + 1);
  BottomCollector collector(oshr);
  std::vector<NodeId> bottoms;
  std::uint64_t find_steps = 0;
  std::uint64_t steps = 0;
  oshr_key_stack(oshr, out.builder, [&](NodeId v) {
    collector.bottoms(v, bottoms, &find_steps);
    const std::int32_t dv = t.depth(v);
    for (NodeId bot : bottoms) {
      ++steps;
      out.paths.push_back({v, bot});
      const std::int32_t g = t.suffix_index(t.leftmost_leaf_key(bot));
      const std::int32_t key = out.builder.issue_key({g, dv, t.depth(bot)});
      const std::int32_t residual = t.depth(bot) - dv - k;
      if (residual < 0) continue;
      const NodeId shifted = t.leaf_for_suffix(g + dv + k);
      out.staging[residual].push_back({t.leaf_key(shifted), key, g + dv});
      ++out.staged_count;
    }
  });
  if (counters) {
    counters->base_path_finding += find_steps;
    counters->indexing += steps;
  }
  return out;
}

OtIndex map_base_paths_to_root(const Oshr& oshr, BasePathBuild&& build, CostCounters* counters) {
  const SuffixTree& t = oshr.tree();
  std::uint64_t steps = 0;

  // Counting sort of every bucket by leaf key, descending, so each bucket pops in leaf order.
  std::vector<std::int32_t> count(t.n() + 1, 0);
  for (const auto& bucket : build.staging) {
    for (const StagedTuple& s : bucket) ++count[s.leaf_key + 1];
  }
  for (std::int32_t i = 0; i < t.n(); ++i) count[i + 1] += count[i];
  std::vector<std::pair<std::int32_t, StagedTuple>> by_leaf(build.staged_count);
  for (std::size_t r = 0; r < build.staging.size(); ++r) {
    for (const StagedTuple& s : build.staging[r]) by_leaf[count[s.leaf_key]++] = {static_cast<std::int32_t>(r), s};
    build.staging[r].clear();
  }
  for (auto it = by_leaf.rbegin(); it != by_leaf.rend(); ++it) {
    build.staging[it->first].push_back(it->second);
    ++steps;
  }

  for (NodeId w = t.first_internal(); w <= t.root(); ++w) {
    ++steps;
    const auto d = static_cast<std::size_t>(t.depth(w));
    if (d >= build.staging.size()) continue;
    auto& bucket = build.staging[d];
    while (!bucket.empty() && t.contains_leaf(w, bucket.back().leaf_key)) {
      build.builder.post(w, bucket.back().key, bucket.back().transition_pos);
      bucket.pop_back();
      ++steps;
    }
  }
  std::size_t left = 0;
  for (const auto& bucket : build.staging) left += bucket.size();
  if (left != 0) {
    throw ConsistencyError(std::to_string(left) + " staged base-path entries were not mapped to a node");
  }
  if (counters) counters->mapping += steps;
  return build.builder.finish();
}

}  // namespace kmm
