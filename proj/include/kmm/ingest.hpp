#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "kmm/text.hpp"

namespace kmm {

enum class InputFormat { raw, fasta };

std::optional<InputFormat> parse_input_format(std::string_view name);

// Single-record FASTA: sequence uppercased, other IUPAC codes mapped to N.
Text parse_fasta(std::string_view content);
// Raw bytes with one trailing line break removed.
Text parse_raw(std::string content);

Text ingest(const std::string& path, InputFormat format);

}  // namespace kmm
