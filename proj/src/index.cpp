#include "kmm/index.hpp"

#include <chrono>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "kmm/errors.hpp"

namespace kmm {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

constexpr char kMagic[8] = {'K', 'M', 'M', 'I', 'N', 'D', 'E', 'X'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void i32s(const std::vector<std::int32_t>& v) {
    u64(v.size());
    for (std::int32_t x : v) i32(x);
  }
  void bytes(std::string_view s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint8_t u8() {
    const int c = in_.get();
    if (c == std::char_traits<char>::eof()) throw InputFormatError("index file is truncated");
    return static_cast<std::uint8_t>(c);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::uint64_t count(std::uint64_t limit) {
    const std::uint64_t c = u64();
    if (c > limit) throw InputFormatError("index file declares an implausible array length");
    return c;
  }
  std::vector<std::int32_t> i32s(std::uint64_t limit) {
    std::vector<std::int32_t> v(count(limit));
    for (auto& x : v) x = i32();
    return v;
  }
  std::string bytes(std::uint64_t limit) {
    std::string s(count(limit), '\0');
    in_.read(s.data(), static_cast<std::streamsize>(s.size()));
    if (static_cast<std::size_t>(in_.gcount()) != s.size()) throw InputFormatError("index file is truncated");
    return s;
  }

 private:
  std::istream& in_;
};

void write_ot(Writer& w, const OtIndex& idx) {
  w.i32(idx.k());
  w.u64(idx.raw_ranges().size());
  for (const OtRange& r : idx.raw_ranges()) {
    w.i32(r.left);
    w.i32(r.right);
  }
  w.i32s(idx.raw_offsets());
  w.i32s(idx.raw_keys());
  w.i32s(idx.raw_transitions());
  w.u64(idx.catalog().size());
  for (const CatalogEntry& e : idx.catalog()) {
    w.i32(e.guided_suffix);
    w.i32(e.top_depth);
    w.i32(e.bottom_depth);
  }
}

std::unique_ptr<OtIndex> read_ot(Reader& r, const SuffixTree& tree) {
  const std::int32_t k = r.i32();
  const auto nodes = static_cast<std::uint64_t>(tree.node_count());
  const std::uint64_t n = static_cast<std::uint64_t>(tree.n());
  const std::uint64_t posting_limit = n * n + 64;
  if (r.count(nodes) != nodes) throw InputFormatError("index node count does not match the text");
  std::vector<OtRange> ranges(nodes);
  for (auto& x : ranges) {
    x.left = r.i32();
    x.right = r.i32();
  }
  auto offsets = r.i32s(nodes + 1);
  auto keys = r.i32s(posting_limit);
  auto trans = r.i32s(posting_limit);
  std::vector<CatalogEntry> catalog(r.count(posting_limit));
  for (auto& e : catalog) {
    e.guided_suffix = r.i32();
    e.top_depth = r.i32();
    e.bottom_depth = r.i32();
  }
  return std::make_unique<OtIndex>(OtIndex::from_raw(tree.text().str(), k, std::move(ranges), std::move(offsets),
                                                     std::move(keys), std::move(trans), std::move(catalog)));
}

}  // namespace

void Index::prepare(const Text& text) {
  auto t0 = Clock::now();
  tree_ = std::make_unique<SuffixTree>(SuffixTree::build(text));
  times_.tree_ms = ms_since(t0);
  t0 = Clock::now();
  oshr_ = std::make_unique<Oshr>(Oshr::preprocess(*tree_, &counters_));
  times_.preprocessing_ms = ms_since(t0);
  t0 = Clock::now();
  base_ = find_base_suffixes(*oshr_, &counters_);
  times_.base_suffix_ms = ms_since(t0);
  if (config_.variant == Variant::base_uncle) {
    t0 = Clock::now();
    uncle_ = find_base_uncle_suffixes(*oshr_, base_, &counters_);
    times_.uncle_ms = ms_since(t0);
  }
}

void Index::make_searcher() {
  searcher_ = std::make_unique<Searcher>(*tree_, config_.variant, config_.k, suffix_index_.get(), path_index_.get());
}

Index Index::build(const Text& text, IndexConfig config) {
  if (config.k < 0) throw std::invalid_argument("k must be non-negative");
  if ((config.variant == Variant::base_paths || config.variant == Variant::base_uncle) && config.k < 1) {
    throw std::invalid_argument(std::string(variant_name(config.variant)) + " needs k >= 1");
  }
  Index idx;
  idx.config_ = config;
  idx.prepare(text);
  auto t0 = Clock::now();
  switch (config.variant) {
    case Variant::base_suffix_trivial:
      idx.suffix_index_ = std::make_unique<OtIndex>(
          index_base_suffixes_trivial(*idx.oshr_, idx.base_, config.k, &idx.counters_));
      break;
    case Variant::base_suffix_tails:
      idx.suffix_index_ =
          std::make_unique<OtIndex>(index_base_suffix_tails(*idx.oshr_, idx.base_, config.k, &idx.counters_));
      break;
    case Variant::base_uncle:
      idx.suffix_index_ = std::make_unique<OtIndex>(
          index_base_uncle_suffixes(*idx.oshr_, idx.base_, *idx.uncle_, config.k, &idx.counters_));
      [[fallthrough]];
    case Variant::base_paths: {
      auto staged = index_base_paths(*idx.oshr_, config.k, &idx.counters_);
      idx.times_.indexing_ms = ms_since(t0);
      t0 = Clock::now();
      idx.path_index_ =
          std::make_unique<OtIndex>(map_base_paths_to_root(*idx.oshr_, std::move(staged), &idx.counters_));
      idx.times_.mapping_ms = ms_since(t0);
      idx.make_searcher();
      return idx;
    }
  }
  idx.times_.indexing_ms = ms_since(t0);
  idx.make_searcher();
  return idx;
}

std::size_t Index::base_path_count() const {
  if (path_index_) return path_index_->key_count();
  return find_base_paths(*oshr_).size();
}

void Index::save(std::ostream& out) const {
  Writer w(out);
  out.write(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.u8(static_cast<std::uint8_t>(config_.variant));
  w.i32(config_.k);
  w.bytes(text().str());
  w.u8(static_cast<std::uint8_t>((suffix_index_ ? 1 : 0) | (path_index_ ? 2 : 0)));
  if (suffix_index_) write_ot(w, *suffix_index_);
  if (path_index_) write_ot(w, *path_index_);
  if (!out) throw std::runtime_error("failed to write index");
}

void Index::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save(out);
}

Index Index::load(std::istream& in) {
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (in.gcount() != sizeof magic || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw InputFormatError("not an index file");
  }
  Reader r(in);
  const std::uint32_t version = r.u32();
  if (version != kVersion) throw InputFormatError("unsupported index version " + std::to_string(version));
  const std::uint8_t variant = r.u8();
  if (variant > static_cast<std::uint8_t>(Variant::base_uncle)) throw InputFormatError("unknown index variant");
  Index idx;
  idx.config_.variant = static_cast<Variant>(variant);
  idx.config_.k = r.i32();
  if (idx.config_.k < 0) throw InputFormatError("negative k in index file");
  idx.prepare(Text::from_terminated(r.bytes(std::uint64_t{1} << 40)));
  const std::uint8_t parts = r.u8();
  if (parts & 1) idx.suffix_index_ = read_ot(r, *idx.tree_);
  if (parts & 2) idx.path_index_ = read_ot(r, *idx.tree_);
  if (in.peek() != std::char_traits<char>::eof()) throw InputFormatError("trailing bytes after index");
  idx.make_searcher();
  return idx;
}

Index Index::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputFormatError("cannot open " + path);
  return load(in);
}

}  // namespace kmm
