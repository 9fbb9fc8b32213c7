#pragma once

#include <stdexcept>
#include <string>

namespace kmm {

// Malformed text or input file.
class InputFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Query that the built index cannot answer (budget above the built k).
class UnsupportedQueryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Internal invariant broken during construction.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kmm
