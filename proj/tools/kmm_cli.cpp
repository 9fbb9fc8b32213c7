#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <iostream>
#include <random>
#include <string>

#include "kmm/errors.hpp"
#include "kmm/index.hpp"
#include "kmm/ingest.hpp"
#include "kmm/oracle.hpp"

using nlohmann::ordered_json;

namespace {

enum class Command { build, query, verify, stats, bench };

struct CliConfig {
  Command command = Command::build;
  std::string input;
  std::string format = "raw";
  std::string variant = "base_suffix_tails";
  int k = 2;
  bool k_given = false;
  std::string pattern;
  int trials = 100;
  std::uint32_t seed = 1;
  std::string output = "text";
  std::string save_index;
  std::string load_index;
};

// Verification failure.
struct Discrepancy {
  std::string pattern;
  int k = 0;
  std::vector<kmm::Match> missing;
  std::vector<kmm::Match> extra;
};

constexpr std::size_t kOracleLimit = 5000;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

kmm::Index open_index(const CliConfig& cfg) {
  if (!cfg.load_index.empty()) {
    kmm::Index idx = kmm::Index::load(cfg.load_index);
    if (!cfg.input.empty()) std::cerr << "note: --input ignored, text comes from " << cfg.load_index << "\n";
    return idx;
  }
  if (cfg.input.empty()) throw kmm::InputFormatError("--input or --load-index is required");
  const auto fmt = kmm::parse_input_format(cfg.format);
  if (!fmt) throw kmm::InputFormatError("unknown format " + cfg.format);
  const auto variant = kmm::parse_variant(cfg.variant);
  if (!variant) throw kmm::InputFormatError("unknown variant " + cfg.variant);
  kmm::Text text = kmm::ingest(cfg.input, *fmt);
  kmm::Index idx = kmm::Index::build(text, {*variant, cfg.k});
  return idx;
}

ordered_json counters_json(const kmm::CostCounters& c) {
  return {{"preprocessing", c.preprocessing},         {"base_suffix_finding", c.base_suffix_finding},
          {"uncle_finding", c.uncle_finding},         {"base_path_finding", c.base_path_finding},
          {"indexing", c.indexing},                   {"mapping", c.mapping}};
}

ordered_json times_json(const kmm::PhaseTimes& t) {
  return {{"tree", t.tree_ms},           {"preprocessing", t.preprocessing_ms}, {"base_suffix", t.base_suffix_ms},
          {"uncle", t.uncle_ms},         {"indexing", t.indexing_ms},           {"mapping", t.mapping_ms}};
}

ordered_json matches_json(const kmm::MatchResult& r) {
  ordered_json arr = ordered_json::array();
  for (const auto& m : r.matches) arr.push_back({{"position", m.position}, {"mismatches", m.mismatches}});
  return arr;
}

std::size_t key_count(const kmm::Index& idx) {
  if (idx.suffix_index()) return idx.suffix_index()->key_count();
  return idx.path_index() ? idx.path_index()->key_count() : 0;
}

ordered_json stats_json(const kmm::Index& idx) {
  const kmm::SuffixTree& t = idx.tree();
  ordered_json j;
  j["variant"] = std::string(kmm::variant_name(idx.config().variant));
  j["k"] = idx.config().k;
  j["n"] = t.n();
  j["alphabet_size"] = idx.text().alphabet().size();
  j["nodes"] = {{"total", t.node_count()}, {"internal", t.internal_count()}, {"leaves", t.n()}};
  j["tree_height"] = t.height();
  j["base_suffix_total"] = idx.base_suffixes().total();
  j["base_path_count"] = idx.base_path_count();
  j["ot_key_count"] = key_count(idx);
  ordered_json parts = ordered_json::object();
  auto part = [&](const char* name, const kmm::OtIndex* o) {
    if (!o) return;
    parts[name] = {{"keys", o->key_count()},
                   {"postings", o->posting_count()},
                   {"root_range", {o->range(t.root()).left, o->range(t.root()).right}}};
  };
  part("suffix_index", idx.suffix_index());
  part("path_index", idx.path_index());
  j["ot_indexes"] = parts;
  j["counters"] = counters_json(idx.counters());
  j["times_ms"] = times_json(idx.times());
  return j;
}

void print_stats_text(const ordered_json& j) {
  std::cout << "variant            " << j["variant"].get<std::string>() << " (k=" << j["k"] << ")\n"
            << "n                  " << j["n"] << "\n"
            << "nodes              " << j["nodes"]["total"] << " (" << j["nodes"]["internal"] << " internal)\n"
            << "tree height        " << j["tree_height"] << "\n"
            << "base suffixes      " << j["base_suffix_total"] << "\n"
            << "base paths         " << j["base_path_count"] << "\n"
            << "OT keys            " << j["ot_key_count"] << "\n";
  for (const auto& [name, p] : j["ot_indexes"].items()) {
    std::cout << name << ": " << p["keys"] << " keys, " << p["postings"] << " postings, root range ("
              << p["root_range"][0] << ", " << p["root_range"][1] << ")\n";
  }
  std::cout << "counters:\n";
  for (const auto& [name, v] : j["counters"].items()) std::cout << "  " << name << " " << v << "\n";
  std::cout << "times (ms):\n";
  for (const auto& [name, v] : j["times_ms"].items()) std::cout << "  " << name << " " << v.get<double>() << "\n";
}

std::string sample_pattern(std::mt19937& rng, const kmm::Text& text, int k, bool planted, std::size_t* site) {
  const std::string_view body = text.body();
  const auto& alphabet = text.alphabet();
  const std::size_t max_m = std::min<std::size_t>(30, body.size());
  const std::size_t min_m = std::min<std::size_t>(5, max_m);
  const std::size_t m = std::uniform_int_distribution<std::size_t>(min_m, max_m)(rng);
  std::uniform_int_distribution<std::size_t> sym(0, alphabet.size() - 1);
  if (!planted) {
    std::string p(m, ' ');
    for (auto& c : p) c = alphabet[sym(rng)];
    return p;
  }
  *site = std::uniform_int_distribution<std::size_t>(0, body.size() - m)(rng);
  std::string p(body.substr(*site, m));
  std::uniform_int_distribution<std::size_t> where(0, m - 1);
  for (int i = 0; i < k; ++i) p[where(rng)] = alphabet[sym(rng)];
  return p;
}

std::optional<Discrepancy> compare(const kmm::Index& idx, const std::string& p, int k) {
  const kmm::MatchResult got = idx.search({p, k});
  const kmm::MatchResult want = kmm::brute_force_hamming(idx.text(), p, k);
  if (got == want) return std::nullopt;
  Discrepancy d{p, k, {}, {}};
  std::set_difference(want.matches.begin(), want.matches.end(), got.matches.begin(), got.matches.end(),
                      std::back_inserter(d.missing));
  std::set_difference(got.matches.begin(), got.matches.end(), want.matches.begin(), want.matches.end(),
                      std::back_inserter(d.extra));
  return d;
}

// Structural checks against the naive oracles. Returns failure messages.
std::vector<std::string> structural_checks(const kmm::Index& idx) {
  std::vector<std::string> fails;
  const kmm::SuffixTree& t = idx.tree();
  if (idx.base_suffixes().total() != static_cast<std::size_t>(t.n())) fails.push_back("base suffix total != n");
  const auto naive = kmm::naive_base_suffixes(idx.oshr());
  for (kmm::NodeId v = t.first_internal(); v <= t.root(); ++v) {
    auto fast = idx.base_suffixes().at(v);
    std::vector<std::int32_t> sorted(fast.begin(), fast.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted != naive[v]) {
      fails.push_back("base suffixes differ from naive at node " + std::to_string(v));
      break;
    }
  }
  const auto fast_paths = kmm::find_base_paths(idx.oshr());
  std::set<std::pair<kmm::NodeId, kmm::NodeId>> fast_set;
  for (const auto& bp : fast_paths) fast_set.insert({bp.top, bp.bottom});
  if (fast_set != kmm::naive_base_paths(idx.oshr())) fails.push_back("base paths differ from naive");
  for (const kmm::OtIndex* o : {idx.suffix_index()}) {
    if (o && !(o->range(t.root()) == kmm::OtRange{0, t.n() - 1})) fails.push_back("root OT range is not (0, n-1)");
  }
  return fails;
}

int cmd_build(const CliConfig& cfg, const kmm::Index& idx) {
  if (cfg.output == "json") {
    ordered_json j = stats_json(idx);
    if (!cfg.save_index.empty()) j["saved_to"] = cfg.save_index;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "built " << kmm::variant_name(idx.config().variant) << " index, k=" << idx.config().k
              << ", n=" << idx.tree().n() << "\n";
    if (!cfg.save_index.empty()) std::cout << "saved to " << cfg.save_index << "\n";
  }
  return 0;
}

int cmd_query(const CliConfig& cfg, const kmm::Index& idx) {
  if (cfg.pattern.empty()) throw kmm::InputFormatError("query needs --pattern");
  const int k = cfg.k_given ? cfg.k : idx.config().k;
  kmm::QueryStats qs;
  const auto t0 = Clock::now();
  const kmm::MatchResult r = idx.search({cfg.pattern, k}, &qs);
  const double elapsed = ms_since(t0);
  if (cfg.output == "json") {
    ordered_json j;
    j["pattern"] = cfg.pattern;
    j["k"] = k;
    j["occ"] = r.occ();
    j["matches"] = matches_json(r);
    j["steps"] = qs.steps;
    j["time_ms"] = elapsed;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& m : r.matches) std::cout << m.position << "\t" << m.mismatches << "\n";
    std::cerr << r.occ() << " matches\n";
  }
  return 0;
}

int cmd_verify(const CliConfig& cfg, const kmm::Index& idx) {
  if (cfg.trials < 1) throw kmm::InputFormatError("--trials must be at least 1");
  std::mt19937 rng(cfg.seed);
  std::vector<std::string> fails;
  std::optional<Discrepancy> first;
  std::size_t queries = 0;
  for (int k = 0; k <= idx.config().k; ++k) {
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const bool planted = trial % 2 == 0;
      std::size_t site = 0;
      const std::string p = sample_pattern(rng, idx.text(), k, planted, &site);
      ++queries;
      auto d = compare(idx, p, k);
      if (planted) {
        const auto r = idx.search({p, k});
        const bool at_site = std::any_of(r.matches.begin(), r.matches.end(),
                                         [&](const kmm::Match& m) { return m.position == static_cast<std::int64_t>(site); });
        if (!at_site) fails.push_back("planted pattern " + p + " not found at " + std::to_string(site));
      }
      if (d) {
        fails.push_back("mismatch for pattern " + p + " k=" + std::to_string(k));
        if (!first) first = d;
      }
    }
  }
  const bool structural = idx.tree().n() <= static_cast<std::int32_t>(kOracleLimit);
  if (structural) {
    for (auto& f : structural_checks(idx)) fails.push_back(std::move(f));
  }
  const bool ok = fails.empty();
  if (cfg.output == "json") {
    ordered_json j;
    j["ok"] = ok;
    j["queries"] = queries;
    j["seed"] = cfg.seed;
    j["structural_checks"] = structural;
    j["failures"] = fails;
    if (first) {
      ordered_json rep;
      rep["pattern"] = first->pattern;
      rep["k"] = first->k;
      rep["missing"] = matches_json({first->missing});
      rep["extra"] = matches_json({first->extra});
      j["reproducer"] = rep;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << queries << " queries, seed " << cfg.seed
              << (structural ? ", structural checks run" : ", structural checks skipped (n too large)") << "\n";
    for (const auto& f : fails) std::cout << "FAIL " << f << "\n";
    if (first) {
      std::cout << "reproduce: kmm query --pattern " << first->pattern << " -k " << first->k << "\n";
      for (const auto& m : first->missing) std::cout << "  missing " << m.position << " (" << m.mismatches << ")\n";
      for (const auto& m : first->extra) std::cout << "  extra " << m.position << " (" << m.mismatches << ")\n";
    }
    std::cout << (ok ? "OK" : "FAILED") << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_stats(const CliConfig& cfg, const kmm::Index& idx) {
  const ordered_json j = stats_json(idx);
  if (cfg.output == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    print_stats_text(j);
  }
  return 0;
}

int cmd_bench(const CliConfig& cfg, const kmm::Index& idx, double build_ms) {
  if (cfg.trials < 1) throw kmm::InputFormatError("--trials must be at least 1");
  std::mt19937 rng(cfg.seed);
  const int k = cfg.k_given ? cfg.k : idx.config().k;
  kmm::QueryStats total;
  std::size_t occ = 0;
  double query_ms = 0;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::size_t site = 0;
    const std::string p = sample_pattern(rng, idx.text(), k, trial % 2 == 0, &site);
    kmm::QueryStats qs;
    const auto t0 = Clock::now();
    occ += idx.search({p, k}, &qs).occ();
    query_ms += ms_since(t0);
    total.steps += qs.steps;
    total.lookups += qs.lookups;
    total.backtrack_steps += qs.backtrack_steps;
  }
  ordered_json j;
  j["variant"] = std::string(kmm::variant_name(idx.config().variant));
  j["n"] = idx.tree().n();
  j["k"] = k;
  j["build_ms"] = build_ms;
  j["counters"] = counters_json(idx.counters());
  j["times_ms"] = times_json(idx.times());
  j["queries"] = cfg.trials;
  j["total_occ"] = occ;
  j["query_ms_total"] = query_ms;
  j["query_ms_mean"] = query_ms / cfg.trials;
  j["query_steps"] = total.steps;
  j["query_lookups"] = total.lookups;
  j["query_backtrack_steps"] = total.backtrack_steps;
  if (cfg.output == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << j["variant"].get<std::string>() << " n=" << j["n"] << " k=" << k << "\n"
              << "build " << build_ms << " ms\n"
              << cfg.trials << " queries in " << query_ms << " ms (" << query_ms / cfg.trials << " ms each), "
              << occ << " matches, " << total.steps << " steps\n";
    for (const auto& [name, v] : j["counters"].items()) std::cout << "  " << name << " " << v << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-mismatch search over suffix-link OT indexes"};
  app.require_subcommand(1);
  CliConfig cfg;
  app.add_option("--input", cfg.input, "Input file");
  app.add_option("--format", cfg.format, "Input format")->check(CLI::IsMember({"raw", "fasta"}));
  app.add_option("--variant", cfg.variant, "Index variant")
      ->check(CLI::IsMember({"base_suffix_trivial", "base_suffix_tails", "base_paths", "base_uncle"}));
  app.add_option("-k", cfg.k, "Mismatches (build and query)")->check(CLI::NonNegativeNumber);
  app.add_option("--pattern", cfg.pattern, "Query pattern");
  app.add_option("--trials", cfg.trials, "Random patterns per k (verify) or total (bench)");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--output", cfg.output, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--save-index", cfg.save_index, "Write the index to this file");
  app.add_option("--load-index", cfg.load_index, "Read the index from this file");

  const std::pair<const char*, Command> commands[] = {{"build", Command::build},
                                                       {"query", Command::query},
                                                       {"verify", Command::verify},
                                                       {"stats", Command::stats},
                                                       {"bench", Command::bench}};
  const char* help[] = {"Build an index", "Search for a pattern", "Compare against brute force",
                        "Print index statistics", "Time random queries"};
  int i = 0;
  for (auto [name, cmd] : commands) {
    app.add_subcommand(name, help[i++])->fallthrough()->callback([&cfg, cmd = cmd] { cfg.command = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.k_given = app.count("-k") > 0;

  try {
    const auto t0 = Clock::now();
    kmm::Index idx = open_index(cfg);
    const double build_ms = ms_since(t0);
    if (!cfg.save_index.empty()) idx.save(cfg.save_index);
    switch (cfg.command) {
      case Command::build: return cmd_build(cfg, idx);
      case Command::query: return cmd_query(cfg, idx);
      case Command::verify: return cmd_verify(cfg, idx);
      case Command::stats: return cmd_stats(cfg, idx);
      case Command::bench: return cmd_bench(cfg, idx, build_ms);
    }
  } catch (const kmm::InputFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const kmm::UnsupportedQueryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
