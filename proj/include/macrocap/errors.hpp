// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace macrocap {

// Base class for every failure the library reports.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension mismatches and orientation problems.
struct shape_error : error {
  using error::error;
};

// Inputs outside an operation's mathematical domain (branch cuts, signs,
// zero leading coefficients).
struct domain_error : error {
  using error::error;
};

// Cost guards: the request is well-formed but too large to run exactly.
struct size_error : error {
  using error::error;
};

// A pivot failed on a matrix claimed positive-definite.
struct definiteness_error : error {
  using error::error;
};

// A closed form hit a vanishing denominator that jitter could not clear.
struct degeneracy_error : error {
  using error::error;
};

// Valid input, but a regime the engines do not cover (e.g. N > n_R).
struct unsupported_error : error {
  using error::error;
};

// Run-configuration problems (CLI / JSON config).
struct config_error : error {
  using error::error;
};

}  // namespace macrocap
