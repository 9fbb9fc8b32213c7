#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kmm {

inline constexpr char kTerminator = '$';

// Rank used for every left-to-right enumeration: terminator first, then bytes ascending.
inline int symbol_rank(char c) {
  return c == kTerminator ? 0 : static_cast<int>(static_cast<unsigned char>(c)) + 1;
}

inline bool symbol_less(char a, char b) { return symbol_rank(a) < symbol_rank(b); }

class Text {
 public:
  Text() = default;

  // Appends the terminator when absent. Throws InputFormatError on a misplaced terminator
  // or an empty sequence.
  static Text from_sequence(std::string seq);

  // Requires the terminator to be present exactly once, at the end.
  static Text from_terminated(std::string s);

  std::string_view str() const { return chars_; }
  std::string_view body() const { return std::string_view(chars_).substr(0, chars_.size() - 1); }
  std::size_t size() const { return chars_.size(); }
  char operator[](std::size_t i) const { return chars_[i]; }
  const char* data() const { return chars_.data(); }

  // Distinct non-terminator symbols in rank order.
  const std::vector<char>& alphabet() const { return alphabet_; }

 private:
  explicit Text(std::string s);

  std::string chars_;
  std::vector<char> alphabet_;
};

}  // namespace kmm
