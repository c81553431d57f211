#pragma once

#include <stdexcept>
#include <string>

namespace eowilson {

// Invalid lattice/tiling/domain configuration, rejected before allocation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Field/geometry mismatch or malformed serialized data.
class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class CommunicationError : public std::runtime_error {
 public:
  CommunicationError(int direction, const std::string& what)
      : std::runtime_error(what), direction_(direction) {}
  int direction() const noexcept { return direction_; }

 private:
  int direction_;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace eowilson
