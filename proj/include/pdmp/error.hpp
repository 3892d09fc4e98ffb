// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pdmp {

/// Input outside the domain of a vector field, flow or formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation requested in a parameter regime where the object does not exist
/// (e.g. an invariant density outside the super-threshold regime).
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument combination (bad counts, empty inputs, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdmp
