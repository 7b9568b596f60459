#pragma once

#include <stdexcept>
#include <string>

namespace keymaze {

// Bad input data: out-of-range parameters, malformed files, broken joins.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// A generator self-check failed; indicates a bug, not bad input.
class internal_error : public std::logic_error {
 public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

// Remote endpoint failures that abort a batch (e.g. rejected credentials).
class endpoint_error : public std::runtime_error {
 public:
  explicit endpoint_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace keymaze
