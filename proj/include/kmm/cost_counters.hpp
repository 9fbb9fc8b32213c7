#pragma once

#include <cstdint>

namespace kmm {

// Operation counts per build phase. Each phase adds one unit per elementary step
// (node visit, parent hop, list append).
struct CostCounters {
  std::uint64_t preprocessing = 0;
  std::uint64_t base_suffix_finding = 0;
  std::uint64_t uncle_finding = 0;
  std::uint64_t base_path_finding = 0;
  std::uint64_t indexing = 0;
  std::uint64_t mapping = 0;
  std::uint64_t query_steps = 0;

  void reset() { *this = CostCounters{}; }
};

}  // namespace kmm
