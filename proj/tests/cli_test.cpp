#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "kmm/ingest.hpp"
#include "kmm/oracle.hpp"
#include "kmm/ot_index.hpp"
#include "test_util.hpp"

namespace kmm {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(KMM_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("kmm_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

const std::string kSample = std::string(KMM_DATA_DIR) + "/sample.fa";

TEST_F(Cli, StatsJson) {
  for (const std::string variant : {"base_suffix_trivial", "base_suffix_tails", "base_paths", "base_uncle"}) {
    auto r = run("stats --input " + kSample + " --format fasta --output json -k 1 --variant " + variant);
    ASSERT_EQ(r.code, 0) << variant;
    json j = json::parse(r.out);
    for (const char* key : {"variant", "k", "n", "alphabet_size", "nodes", "tree_height", "base_suffix_total",
                            "base_path_count", "ot_key_count", "ot_indexes", "counters", "times_ms"}) {
      EXPECT_TRUE(j.contains(key)) << key;
    }
    for (const char* key : {"preprocessing", "base_suffix_finding", "uncle_finding", "base_path_finding", "indexing",
                            "mapping"}) {
      EXPECT_TRUE(j["counters"][key].is_number_unsigned()) << key;
    }
    EXPECT_EQ(j["variant"], variant);
    EXPECT_EQ(j["base_suffix_total"], j["n"]);
    EXPECT_EQ(j["nodes"]["total"].get<int>(), j["nodes"]["internal"].get<int>() + j["n"].get<int>());
    if (variant == "base_paths") {
      EXPECT_EQ(j["ot_key_count"], j["base_path_count"]);
      EXPECT_LE(j["ot_key_count"].get<int>(), j["alphabet_size"].get<int>() * j["n"].get<int>());
    } else {
      EXPECT_EQ(j["ot_key_count"], j["n"]);
      EXPECT_EQ(j["ot_indexes"]["suffix_index"]["root_range"], json::array({0, j["n"].get<int>() - 1}));
    }
  }
}

TEST_F(Cli, QueryMatchesBruteForce) {
  const Text text = ingest(kSample, InputFormat::fasta);
  for (const std::string pattern : {"GATCG", "ACGTA", "TTTTTTT", "AGCATAATTTAAC"}) {
    auto r = run("query --input " + kSample + " --format fasta --output json -k 2 --pattern " + pattern);
    ASSERT_EQ(r.code, 0);
    json j = json::parse(r.out);
    const MatchResult want = brute_force_hamming(text, pattern, 2);
    ASSERT_EQ(j["occ"].get<std::size_t>(), want.occ()) << pattern;
    for (std::size_t i = 0; i < want.occ(); ++i) {
      EXPECT_EQ(j["matches"][i]["position"], want.matches[i].position);
      EXPECT_EQ(j["matches"][i]["mismatches"], want.matches[i].mismatches);
    }
  }
}

TEST_F(Cli, VerifyRandomText) {
  std::mt19937 rng(81);
  const std::string input = write("random.txt", testing::random_string(rng, 2048, "ACGT"));
  for (const std::string variant : {"base_suffix_tails", "base_paths", "base_uncle"}) {
    auto r = run("verify --input " + input + " --output json --trials 1000 -k 2 --variant " + variant);
    EXPECT_EQ(r.code, 0) << r.out;
    json j = json::parse(r.out);
    EXPECT_TRUE(j["ok"].get<bool>());
    EXPECT_EQ(j["queries"], 3000);
    EXPECT_TRUE(j["structural_checks"].get<bool>());
  }
}

TEST_F(Cli, VerifyIsDeterministic) {
  auto a = run("verify --input " + kSample + " --format fasta --seed 5 --trials 30 --output json");
  auto b = run("verify --input " + kSample + " --format fasta --seed 5 --trials 30 --output json");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, SaveAndLoad) {
  const std::string idx = path("sample.idx");
  ASSERT_EQ(run("build --input " + kSample + " --format fasta --variant base_uncle -k 2 --save-index " + idx).code, 0);
  ASSERT_TRUE(fs::exists(idx));
  for (const std::string pattern : {"GATCG", "CCATG"}) {
    auto fresh = run("query --input " + kSample + " --format fasta --variant base_uncle -k 2 --output json --pattern " +
                     pattern);
    auto loaded = run("query --load-index " + idx + " --output json --pattern " + pattern);
    ASSERT_EQ(loaded.code, 0);
    EXPECT_EQ(json::parse(fresh.out)["matches"], json::parse(loaded.out)["matches"]);
  }
  EXPECT_EQ(run("query --load-index " + idx + " -k 3 --pattern GATCG").code, 2);
  EXPECT_EQ(run("stats --load-index " + write("bad.idx", "garbage")).code, 2);
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run("stats --input " + write("two.fa", ">a\nAC\n>b\nGT\n") + " --format fasta").code, 2);
  EXPECT_EQ(run("stats --input " + write("empty.txt", "") ).code, 2);
  EXPECT_EQ(run("stats --input " + path("missing.txt")).code, 2);
  EXPECT_EQ(run("stats").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("stats --input " + kSample + " --variant nope").code, 2);
  EXPECT_EQ(run("stats --input " + kSample + " -k -1").code, 2);
  EXPECT_EQ(run("query --input " + kSample + " --format fasta").code, 2);
  EXPECT_EQ(run("verify --input " + kSample + " --format fasta --trials 0").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, RawInput) {
  auto r = run("stats --input " + write("banana.txt", "banana\n") + " --output json -k 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["n"], 7);
}

TEST_F(Cli, Bench) {
  auto r = run("bench --input " + kSample + " --format fasta --trials 20 --output json");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["queries"], 20);
  EXPECT_GT(j["query_steps"].get<std::uint64_t>(), 0u);
  EXPECT_GT(j["counters"]["indexing"].get<std::uint64_t>(), 0u);
}

}  // namespace
}  // namespace kmm
