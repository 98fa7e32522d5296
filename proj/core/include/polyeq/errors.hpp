// Copyright 2026 The polyeq Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef POLYEQ_ERRORS_HPP_
#define POLYEQ_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace polyeq {

// Base class for every error thrown by the library. The CLI maps these to
// exit code 1; none of them is used for non-convergence, which is reported
// through result flags instead.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An evaluation point lies outside the declared type or action domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Structurally invalid parameters or configuration (bad counts, bad bounds,
// inconsistent sizes, unknown tags).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// The requested operation is not defined for the given inputs, e.g. a
// quadrature bound for a monte-carlo sample.
class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(what) {}
};

// A non-finite value surfaced during numerical work; the message names the
// evaluation point so the offending utility can be reproduced.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// A brute-force computation would exceed its evaluation budget; the message
// names the offending sizes.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(what) {}
};

}  // namespace polyeq

#endif  // POLYEQ_ERRORS_HPP_
