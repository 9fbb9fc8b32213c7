#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kmm/index.hpp"
#include "kmm/oracle.hpp"
#include "test_util.hpp"

using namespace kmm;

namespace {

struct Report {
  int failed = 0;
  void line(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("criterion %d: %s  %s (%s)\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
};

struct Corpus {
  std::vector<Text> texts;
  std::vector<std::vector<std::string>> patterns;
};

Corpus dna_corpus() {
  std::mt19937 rng(20240601);
  Corpus c;
  std::uniform_int_distribution<std::size_t> len(50, 2000);
  std::uniform_int_distribution<std::size_t> plen(5, 30);
  for (int i = 0; i < 200; ++i) {
    c.texts.push_back(testing::random_text(rng, len(rng)));
    std::vector<std::string> ps;
    for (int j = 0; j < 20; ++j) {
      const std::size_t m = plen(rng);
      ps.push_back(j % 2 == 0 ? testing::planted_pattern(rng, c.texts.back(), m, 1 + j % 3, "ACGT")
                              : testing::random_string(rng, m, "ACGT"));
    }
    c.patterns.push_back(std::move(ps));
  }
  return c;
}

// Smaller texts over assorted alphabets for the structural checks.
std::vector<Text> small_corpus(std::uint32_t seed, std::size_t max_n) {
  std::vector<Text> out = testing::text_corpus(seed, 200, 2, max_n);
  for (const char* s : {"banana", "mississippi", "AGCATAATTTAACTAAG", "aaaaaaaaaa", "abababababab", "x"}) {
    out.push_back(Text::from_sequence(s));
  }
  return out;
}

std::string fmt(const char* f, double a, double b = 0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

int main() {
  Report report;
  const Corpus corpus = dna_corpus();

  // 1, 8: search equals brute force for every variant; variants agree.
  {
    std::size_t queries = 0, bad = 0, disagree = 0;
    std::string first_bad;
    for (std::size_t t = 0; t < corpus.texts.size(); ++t) {
      const Text& text = corpus.texts[t];
      std::vector<Index> indexes;
      for (Variant v : kAllVariants) indexes.push_back(Index::build(text, {v, 2}));
      for (const std::string& p : corpus.patterns[t]) {
        for (int k = 0; k <= 2; ++k) {
          const MatchResult want = brute_force_hamming(text, p, k);
          std::vector<MatchResult> got;
          for (const Index& idx : indexes) {
            got.push_back(idx.search({p, k}));
            ++queries;
            if (got.back() != want) {
              ++bad;
              if (first_bad.empty()) {
                first_bad = ", first: text " + std::to_string(t) + " pattern " + p + " k " + std::to_string(k) +
                            " variant " + std::string(variant_name(idx.config().variant));
              }
            }
          }
          for (const MatchResult& r : got) disagree += r != got.front();
        }
      }
    }
    report.line(1, bad == 0, "search equals brute force",
                std::to_string(queries) + " queries over 200 texts, " + std::to_string(bad) + " discrepancies" + first_bad);
    report.line(8, disagree == 0, "variants agree",
                std::to_string(disagree) + " disagreements over " + std::to_string(queries / 4) + " queries");
  }

  std::vector<Text> all = corpus.texts;
  for (const Text& t : small_corpus(7, 500)) all.push_back(t);

  // 2, 3, 5
  {
    std::size_t bad2 = 0, bad3 = 0, bad5 = 0, dna = 0;
    double worst5 = 0;
    for (const Text& text : all) {
      const auto tree = SuffixTree::build(text);
      const Oshr oshr = Oshr::preprocess(tree);
      const NodeSuffixLists base = find_base_suffixes(oshr);
      bad2 += base.total() != text.size();
      const UncleSuffixes uncle = find_base_uncle_suffixes(oshr, base);
      for (const OtIndex& idx : {index_base_suffixes_trivial(oshr, base, 2), index_base_suffix_tails(oshr, base, 2),
                                 index_base_uncle_suffixes(oshr, base, uncle, 2)}) {
        bad3 += !(idx.range(tree.root()) == OtRange{0, static_cast<std::int32_t>(text.size()) - 1});
      }
      if (text.alphabet().size() == 4 && text.alphabet() == std::vector<char>{'A', 'C', 'G', 'T'}) {
        ++dna;
        const double ratio = static_cast<double>(find_base_paths(oshr).size()) / (4.0 * text.size());
        worst5 = std::max(worst5, ratio);
        bad5 += ratio > 1.0;
      }
    }
    report.line(2, bad2 == 0, "base suffixes total n",
                std::to_string(all.size()) + " texts, " + std::to_string(bad2) + " violations");
    report.line(3, bad3 == 0, "root OT range is (0, n-1)",
                std::to_string(3 * all.size()) + " indexes, " + std::to_string(bad3) + " violations");
    report.line(5, bad5 == 0, "base paths <= |sigma| n",
                std::to_string(dna) + " DNA texts, " + std::to_string(bad5) + " violations, max ratio " +
                    fmt("%.3f", worst5));
  }

  // 4: label identity, n <= 500.
  {
    std::size_t checked = 0, bad = 0;
    for (const Text& text : all) {
      if (text.size() > 500) continue;
      ++checked;
      const auto tree = SuffixTree::build(text);
      const Oshr oshr = Oshr::preprocess(tree);
      const std::string_view s = text.str();
      std::set<std::string> labels;
      for (const BasePath& bp : find_base_paths(oshr)) {
        labels.insert(std::string(s.substr(tree.label_start(bp.bottom) + tree.depth(bp.top),
                                           tree.depth(bp.bottom) - tree.depth(bp.top))));
      }
      // Distinct substrings occurring at least twice and right-branching, found by scanning.
      std::set<std::string> internal;
      const std::size_t n = s.size();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t len = 1; i + len <= n; ++len) {
          const std::string_view w = s.substr(i, len);
          std::set<char> next;
          std::size_t occ = 0;
          for (std::size_t j = 0; j + len <= n; ++j) {
            if (s.substr(j, len) == w) {
              ++occ;
              if (j + len < n) next.insert(s[j + len]);
            }
          }
          if (occ < 2) break;
          if (next.size() >= 2) internal.insert(std::string(w));
        }
      }
      bad += labels != internal || labels.size() != static_cast<std::size_t>(tree.internal_count() - 1);
    }
    report.line(4, bad == 0, "base-path labels equal internal-node labels",
                std::to_string(checked) + " texts with n <= 500, " + std::to_string(bad) + " violations");
  }

  // 6: fast vs naive, n <= 300.
  {
    std::size_t checked = 0, bad = 0;
    for (const Text& text : all) {
      if (text.size() > 300) continue;
      ++checked;
      const auto tree = SuffixTree::build(text);
      const Oshr oshr = Oshr::preprocess(tree);
      const NodeSuffixLists base = find_base_suffixes(oshr);
      const auto naive = naive_base_suffixes(oshr);
      bool ok = true;
      for (NodeId v = 0; v < tree.node_count(); ++v) {
        auto fast = base.at(v);
        std::vector<std::int32_t> sorted(fast.begin(), fast.end());
        std::sort(sorted.begin(), sorted.end());
        ok = ok && sorted == naive[v];
      }
      std::set<std::pair<NodeId, NodeId>> fast_paths;
      for (const BasePath& bp : find_base_paths(oshr)) fast_paths.insert({bp.top, bp.bottom});
      ok = ok && fast_paths == naive_base_paths(oshr);
      bad += !ok;
    }
    report.line(6, bad == 0, "fast discovery equals naive",
                std::to_string(checked) + " texts with n <= 300, " + std::to_string(bad) + " violations");
  }

  // 7: counter growth per doubling.
  {
    std::mt19937 rng(77);
    std::vector<double> base_cost, tail_cost;
    for (std::size_t n : {10000, 20000, 40000, 80000}) {
      double b = 0, t = 0;
      for (int rep = 0; rep < 3; ++rep) {
        const Index idx = Index::build(testing::random_text(rng, n), {Variant::base_suffix_tails, 2});
        b += static_cast<double>(idx.counters().base_suffix_finding);
        t += static_cast<double>(idx.counters().indexing);
      }
      base_cost.push_back(b);
      tail_cost.push_back(t);
    }
    double worst = 0;
    std::string detail = "ratios";
    for (std::size_t i = 1; i < base_cost.size(); ++i) {
      const double rb = base_cost[i] / base_cost[i - 1];
      const double rt = tail_cost[i] / tail_cost[i - 1];
      worst = std::max({worst, rb, rt});
      detail += fmt(" %.2f/%.2f", rb, rt);
    }
    report.line(7, worst <= 2.5, "counters grow linearly", detail + " (base suffixes/tails indexing)");
  }

  // 9: save and load.
  {
    std::mt19937 rng(99);
    const Text text = testing::random_text(rng, 3000);
    std::size_t bad = 0, queries = 0;
    const auto path = std::filesystem::temp_directory_path() / "kmm_acceptance.idx";
    for (Variant v : kAllVariants) {
      const Index idx = Index::build(text, {v, 2});
      idx.save(path.string());
      const Index loaded = Index::load(path.string());
      std::ostringstream a, b;
      idx.save(a);
      loaded.save(b);
      bad += a.str() != b.str();
      for (int q = 0; q < 100; ++q) {
        const std::size_t m = 5 + rng() % 26;
        const std::string p = q % 2 ? testing::random_string(rng, m, "ACGT") : testing::planted_pattern(rng, text, m, 2, "ACGT");
        const int k = static_cast<int>(rng() % 3);
        ++queries;
        bad += idx.search({p, k}) != loaded.search({p, k});
      }
    }
    std::filesystem::remove(path);
    report.line(9, bad == 0, "index round trip",
                std::to_string(queries) + " queries over 4 variants, " + std::to_string(bad) + " differences");
  }

  return report.failed == 0 ? 0 : 1;
}
