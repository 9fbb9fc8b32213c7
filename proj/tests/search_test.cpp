#include "kmm/search.hpp"

#include <gtest/gtest.h>

#include "kmm/errors.hpp"
#include "kmm/index.hpp"
#include "kmm/oracle.hpp"
#include "test_util.hpp"

namespace kmm {
namespace {

MatchResult matches(std::initializer_list<std::pair<std::int64_t, int>> list) {
  MatchResult r;
  for (auto [p, d] : list) r.matches.push_back({p, d});
  return r;
}

Index build(std::string_view s, Variant v, int k) {
  return Index::build(Text::from_sequence(std::string(s)), {v, k});
}

TEST(Search, BananaExamples) {
  for (Variant v : kAllVariants) {
    SCOPED_TRACE(std::string(variant_name(v)));
    auto idx = build("banana", v, 2);
    EXPECT_EQ(idx.search({"ana", 0}), matches({{1, 0}, {3, 0}}));
    EXPECT_EQ(idx.search({"ana", 1}), matches({{1, 0}, {3, 0}}));
    EXPECT_EQ(idx.search({"aaa", 1}), matches({{1, 1}, {3, 1}}));
  }
}

TEST(Search, SampleText) {
  for (std::string_view s : {"AGCCTAATTTAACTAAG", "AGCATAATTTAACTAAG"}) {
    const Text text = Text::from_sequence(std::string(s));
    for (Variant v : kAllVariants) {
      auto idx = Index::build(text, {v, 1});
      EXPECT_EQ(idx.search({"AAT", 1}), brute_force_hamming(text, "AAT", 1)) << variant_name(v);
    }
  }
}

TEST(Search, RejectsBadQueries) {
  auto idx = build("banana", Variant::base_suffix_tails, 1);
  EXPECT_THROW(idx.search({"ana", 2}), UnsupportedQueryError);
  EXPECT_THROW(idx.search({"", 0}), std::invalid_argument);
  EXPECT_THROW(idx.search({"an$", 0}), std::invalid_argument);
  EXPECT_THROW(idx.search({"an", -1}), std::invalid_argument);
}

TEST(Search, PatternLongerThanText) {
  for (Variant v : kAllVariants) {
    auto idx = build("acgt", v, 2);
    EXPECT_EQ(idx.search({"acgtacgt", 2}).occ(), 0u);
    EXPECT_EQ(idx.search({"acgt", 0}), matches({{0, 0}}));
  }
}

TEST(Search, AbsentSymbol) {
  for (Variant v : kAllVariants) {
    auto idx = build("acgtacgt", v, 1);
    EXPECT_EQ(idx.search({"x", 0}).occ(), 0u);
    EXPECT_EQ(idx.search({"x", 1}).occ(), 8u);
    EXPECT_EQ(idx.search({"xx", 1}).occ(), 0u);
  }
}

struct Case {
  Variant variant;
  int built_k;
};

class SearchOracle : public ::testing::TestWithParam<Case> {};

TEST_P(SearchOracle, EqualsBruteForce) {
  const auto [variant, built_k] = GetParam();
  std::mt19937 rng(100 + static_cast<unsigned>(variant) * 10 + static_cast<unsigned>(built_k));
  int checked = 0;
  for (const Text& text : testing::text_corpus(rng(), 60, 2, 160)) {
    auto idx = Index::build(text, {variant, built_k});
    const std::string alphabet = text.alphabet().size() > 1 ? std::string(text.alphabet().begin(), text.alphabet().end())
                                                            : std::string("AC");
    for (int q = 0; q < 12; ++q) {
      const std::size_t m = 1 + rng() % 12;
      std::string p = (q % 2 == 0 && m < text.size())
                          ? testing::planted_pattern(rng, text, m, built_k, alphabet)
                          : testing::random_string(rng, m, alphabet);
      for (int k = 0; k <= built_k; ++k) {
        ASSERT_EQ(idx.search({p, k}), brute_force_hamming(text, p, k))
            << "text=" << text.str() << " pattern=" << p << " k=" << k;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0);
}

INSTANTIATE_TEST_SUITE_P(AllVariants, SearchOracle,
                         ::testing::Values(Case{Variant::base_suffix_trivial, 1}, Case{Variant::base_suffix_trivial, 3},
                                           Case{Variant::base_suffix_tails, 1}, Case{Variant::base_suffix_tails, 3},
                                           Case{Variant::base_paths, 1}, Case{Variant::base_paths, 2},
                                           Case{Variant::base_paths, 3}, Case{Variant::base_uncle, 1},
                                           Case{Variant::base_uncle, 3}, Case{Variant::base_suffix_tails, 0}),
                         [](const auto& info) {
                           return std::string(variant_name(info.param.variant)) + "_k" +
                                  std::to_string(info.param.built_k);
                         });

}  // namespace
}  // namespace kmm
