#include <gtest/gtest.h>

#include <algorithm>

#include "kmm/index.hpp"
#include "kmm/oracle.hpp"
#include "kmm/search.hpp"
#include "test_util.hpp"

namespace kmm {
namespace {

std::vector<std::int32_t> occurrences(std::string_view body, std::string_view x) {
  std::vector<std::int32_t> out;
  for (std::size_t i = 0; i + x.size() <= body.size(); ++i) {
    if (body.substr(i, x.size()) == x) out.push_back(static_cast<std::int32_t>(i));
  }
  return out;
}

TEST(SuffixWalks, AgreeWithDirectWalks) {
  std::mt19937 rng(61);
  for (const Text& text : testing::text_corpus(61, 60, 1, 300)) {
    auto tree = SuffixTree::build(text);
    for (int rep = 0; rep < 5; ++rep) {
      std::string p = rep % 2 ? testing::planted_pattern(rng, text, std::min<std::size_t>(text.size() - 1, 1 + rng() % 20), 1, "ACGT")
                              : testing::random_string(rng, 1 + rng() % 12, "ACGT");
      auto table = precompute_suffix_walks(tree, p);
      ASSERT_EQ(table.size(), p.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        auto direct = tree.walk(tree.root(), std::string_view(p).substr(i), WalkMode::exact);
        EXPECT_EQ(static_cast<std::size_t>(table[i].matched), direct.matched) << p << " " << i;
        EXPECT_EQ(table.fully_matched(i), direct.matched == p.size() - i);
        if (table.fully_matched(i)) {
          NodeId sink = table.sink(i);
          ASSERT_NE(sink, kNoNode);
          EXPECT_GE(static_cast<std::size_t>(tree.depth(sink)), p.size() - i);
          EXPECT_EQ(tree.path_label(sink).substr(0, p.size() - i), std::string_view(p).substr(i));
          if (sink != tree.root()) {
            EXPECT_LT(static_cast<std::size_t>(tree.depth(tree.parent(sink))), p.size() - i);
          }
        } else {
          EXPECT_EQ(table.sink(i), kNoNode);
        }
      }
      EXPECT_EQ(table.sink(p.size()), tree.root());
    }
  }
}

TEST(SuffixWalks, AbsentSymbol) {
  auto tree = SuffixTree::build(Text::from_sequence("ACGTACGT"));
  auto table = precompute_suffix_walks(tree, "AXC");
  EXPECT_EQ(table[1].matched, 0);
  EXPECT_EQ(table[1].end_node, tree.root());
  EXPECT_EQ(table[0].matched, 1);
  EXPECT_TRUE(table.fully_matched(2));
}

TEST(MatchLeafAndEdge, AgreesWithLabelComparison) {
  std::mt19937 rng(62);
  int checked = 0;
  for (const Text& text : testing::text_corpus(62, 60, 2, 200)) {
    auto index = Index::build(text, {Variant::base_paths, 2});
    const SuffixTree& t = index.tree();
    const std::string_view s = text.str();
    for (int rep = 0; rep < 40; ++rep) {
      const std::int32_t i = static_cast<std::int32_t>(rng() % (t.n() - 1));
      // Internal ancestor of leaf i.
      std::vector<NodeId> anc;
      for (NodeId v = t.parent(t.leaf_for_suffix(i)); v != kNoNode; v = t.parent(v)) anc.push_back(v);
      const NodeId y = anc[rng() % anc.size()];
      const std::size_t from = i + t.depth(y);
      if (from >= s.size() - 1) continue;
      std::string z(s.substr(from, 1 + rng() % 10));
      if (z.find('$') != std::string::npos) z.resize(z.find('$'));
      if (z.empty()) continue;
      if (rng() % 3 == 0) z.back() = "ACGT"[rng() % 4];
      const std::string full = std::string(t.path_label(y)) + z;
      bool deeper_internal = false;
      for (NodeId x = t.first_internal(); x < t.root(); ++x) {
        if (t.depth(x) > t.depth(y) && static_cast<std::size_t>(t.depth(x)) <= full.size() &&
            std::string_view(full).substr(0, t.depth(x)) == t.path_label(x)) {
          deeper_internal = true;
        }
      }
      if (deeper_internal) continue;
      const std::string prefix = testing::random_string(rng, rng() % 4, "ACGT");
      const std::string pattern = prefix + z;
      auto table = precompute_suffix_walks(t, pattern);
      auto got = index.searcher().match_leaf_and_edge(y, pattern, table, prefix.size());
      std::sort(got.begin(), got.end());
      EXPECT_EQ(got, occurrences(text.body(), full)) << text.str() << " y=" << t.path_label(y) << " z=" << z;
      ++checked;
    }
  }
  EXPECT_GT(checked, 300);
}

TEST(BacktrackLookup, StopsAtDeepestHit) {
  std::mt19937 rng(63);
  for (const Text& text : testing::text_corpus(63, 40, 2, 150)) {
    auto index = Index::build(text, {Variant::base_paths, 1});
    const SuffixTree& t = index.tree();
    const OtIndex& paths = *index.path_index();
    for (int rep = 0; rep < 60; ++rep) {
      const NodeId a = t.first_internal() + static_cast<NodeId>(rng() % t.internal_count());
      const NodeId ts = static_cast<NodeId>(rng() % t.node_count());
      const std::string letter(1, "ACGT"[rng() % 4]);
      auto r = backtrack_lookup(t, paths, ts, a, letter);
      int ancestors = 0;
      NodeId expect = kNoNode;
      for (NodeId w = ts; w != kNoNode; w = t.parent(w)) {
        if (expect == kNoNode && t.is_internal(w) && first_in_range(paths.postings(w), paths.range(a), letter)) {
          expect = w;
        }
        if (w != t.root()) ++ancestors;
      }
      EXPECT_EQ(r.node, expect);
      EXPECT_LE(r.steps, ancestors);
      if (t.is_internal(ts) && first_in_range(paths.postings(ts), paths.range(a), letter)) {
        EXPECT_EQ(r.steps, 0);
      }
      if (r.found()) {
        EXPECT_TRUE(paths.range(a).contains(r.key));
      }
    }
  }
}

TEST(Search, MonotoneInK) {
  std::mt19937 rng(64);
  for (const Text& text : testing::text_corpus(64, 30, 20, 300)) {
    for (Variant v : kAllVariants) {
      auto index = Index::build(text, {v, 3});
      for (int rep = 0; rep < 5; ++rep) {
        const std::string p = testing::planted_pattern(rng, text, 4 + rng() % 8, 1, "ACGT");
        MatchResult prev;
        for (int k = 0; k <= 3; ++k) {
          MatchResult cur = index.search({p, k});
          for (const Match& m : prev.matches) {
            EXPECT_TRUE(std::binary_search(cur.matches.begin(), cur.matches.end(), m)) << p << " k=" << k;
          }
          for (const Match& m : cur.matches) EXPECT_LE(m.mismatches, k);
          prev = cur;
        }
      }
    }
  }
}

TEST(Search, ZeroMismatchesIsExactMatching) {
  std::mt19937 rng(65);
  for (const Text& text : testing::text_corpus(65, 30, 10, 300)) {
    for (Variant v : kAllVariants) {
      auto index = Index::build(text, {v, 1});
      for (int rep = 0; rep < 5; ++rep) {
        const std::string p = testing::planted_pattern(rng, text, 1 + rng() % 8, 0, "ACGT");
        std::vector<std::int32_t> got;
        for (const Match& m : index.search({p, 0}).matches) {
          got.push_back(static_cast<std::int32_t>(m.position));
          EXPECT_EQ(m.mismatches, 0);
        }
        EXPECT_EQ(got, occurrences(text.body(), p));
      }
    }
  }
}

TEST(Search, StatsAreReported) {
  auto index = Index::build(Text::from_sequence("ACGTTGCAACGTAGCT"), {Variant::base_paths, 2});
  QueryStats stats;
  index.search({"ACGA", 2}, &stats);
  EXPECT_GT(stats.steps, 0u);
}

}  // namespace
}  // namespace kmm
