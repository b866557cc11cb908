#pragma once

#include <stdexcept>
#include <string>

namespace hetnet {

/// Invalid input parameter (negative density, alpha <= 2, probability outside [0,1], ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A nearest-point query was issued against an empty point set.
class NoCandidateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The configuration is valid but a requested ratio has a zero denominator.
class DegenerateConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hetnet
