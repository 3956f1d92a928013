// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace qcap {

// Bad user input: out-of-range sizes, malformed spec strings, wrong vector
// lengths. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that is well-posed in exact arithmetic but undefined for the
// given data, e.g. a fully degenerate Fisher ensemble. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant was breached (non-normalised state, Jacobi failed to
// converge, ...). Exit code 4.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qcap
