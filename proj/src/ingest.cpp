#include "kmm/ingest.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "kmm/errors.hpp"

namespace kmm {

std::optional<InputFormat> parse_input_format(std::string_view name) {
  if (name == "raw") return InputFormat::raw;
  if (name == "fasta") return InputFormat::fasta;
  return std::nullopt;
}

Text parse_fasta(std::string_view content) {
  std::string seq;
  std::size_t records = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == ';') continue;
    if (line.front() == '>') {
      ++records;
      continue;
    }
    if (records == 0) throw InputFormatError("FASTA sequence data before the first '>' header (line " +
                                             std::to_string(line_no) + ")");
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      switch (u) {
        case 'A': case 'C': case 'G': case 'T': case 'N':
          seq.push_back(u);
          break;
        case 'U': case 'R': case 'Y': case 'S': case 'W': case 'K': case 'M':
        case 'B': case 'D': case 'H': case 'V': case '-': case '.':
          seq.push_back('N');
          break;
        default:
          throw InputFormatError(std::string("invalid FASTA symbol '") + c + "' on line " + std::to_string(line_no));
      }
    }
  }
  if (records == 0) throw InputFormatError("no FASTA header found");
  if (records > 1) {
    throw InputFormatError("FASTA input has " + std::to_string(records) + " records; expected exactly 1");
  }
  if (seq.empty()) throw InputFormatError("FASTA record has an empty sequence");
  return Text::from_sequence(std::move(seq));
}

Text parse_raw(std::string content) {
  if (!content.empty() && content.back() == '\n') content.pop_back();
  if (!content.empty() && content.back() == '\r') content.pop_back();
  if (content.empty()) throw InputFormatError("input is empty");
  if (content.find(kTerminator) != std::string::npos) {
    throw InputFormatError("raw input contains the reserved terminator byte '$'");
  }
  return Text::from_sequence(std::move(content));
}

Text ingest(const std::string& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputFormatError("cannot open input file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  return format == InputFormat::fasta ? parse_fasta(content) : parse_raw(std::move(content));
}

}  // namespace kmm
