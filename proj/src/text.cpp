#include "kmm/text.hpp"

#include <algorithm>
#include <array>

#include "kmm/errors.hpp"

namespace kmm {

Text::Text(std::string s) : chars_(std::move(s)) {
  std::array<bool, 256> seen{};
  for (std::size_t i = 0; i + 1 < chars_.size(); ++i) {
    seen[static_cast<unsigned char>(chars_[i])] = true;
  }
  for (int c = 0; c < 256; ++c) {
    if (seen[c]) alphabet_.push_back(static_cast<char>(c));
  }
  std::sort(alphabet_.begin(), alphabet_.end(), symbol_less);
}

Text Text::from_sequence(std::string seq) {
  if (seq.empty() || (seq.size() == 1 && seq[0] == kTerminator)) {
    throw InputFormatError("empty sequence");
  }
  if (seq.back() != kTerminator) seq.push_back(kTerminator);
  return from_terminated(std::move(seq));
}

Text Text::from_terminated(std::string s) {
  if (s.size() < 2) throw InputFormatError("text needs at least one symbol before the terminator");
  if (s.back() != kTerminator) throw InputFormatError("text does not end with the terminator");
  auto pos = s.find(kTerminator);
  if (pos != s.size() - 1) {
    throw InputFormatError("terminator found at position " + std::to_string(pos) +
                           " before the end of the text");
  }
  return Text(std::move(s));
}

}  // namespace kmm
