#pragma once

#include <cstdint>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "kmm/cost_counters.hpp"
#include "kmm/oshr.hpp"
#include "kmm/search.hpp"
#include "kmm/suffix_tree.hpp"
#include "kmm/text.hpp"

namespace kmm {

std::int32_t hamming(std::string_view a, std::string_view b);

// Every window of the text body within k mismatches of pattern.
MatchResult brute_force_hamming(const Text& text, std::string_view pattern, int k);

// Per node (indexed by NodeId, empty for leaves): sorted encoded values p = suffix + depth that
// occur below v but below none of the nodes linking to v.
std::vector<std::vector<std::int32_t>> naive_base_suffixes(const Oshr& oshr);

// (top, bottom) pairs whose label (the path from top down to bottom) first appears at top
// when the OSHR tree is replayed in postorder.
std::set<std::pair<NodeId, NodeId>> naive_base_paths(const Oshr& oshr);

// Per node: sorted encoded values claimed as uncle suffixes when replaying OSHR postorder and
// claiming each value at the first node whose leaf parent is grand and differs from the node.
std::vector<std::vector<std::int32_t>> naive_uncle_suffixes(const Oshr& oshr);

// Inbetween references by walking parent chains for every internal pair.
std::vector<std::vector<NodeId>> naive_inbetween_refs(const Oshr& oshr);

}  // namespace kmm
