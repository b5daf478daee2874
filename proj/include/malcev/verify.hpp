#pragma once

// Seeded verification suites bundled by the command-line tool, plus the random
// path and form samplers they use.

#include "malcev/transport.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace malcev::verify {

struct Options {
  std::uint64_t seed = 1;
  int truncation = 0;    // 0: suite default
  std::size_t cap = 0;   // 0: suite default
  double tol = 1e-10;    // ODE tolerance
  std::size_t cases = 0; // 0: suite default
};

struct Case {
  std::string name;
  bool pass = true;
  bool numeric = false;  // judged against a tolerance rather than exactly
  double measure = 0;    // error or defect count
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Case> cases;
  bool ok() const;
  /// Every failing case is a tolerance failure.
  bool only_numeric_failures() const;
};

std::vector<std::string> suite_names();
/// Throws std::invalid_argument for an unknown suite.
SuiteResult run_suite(const std::string& name, const Options& opt);

/// Relative error used for the Chen identities: |a - b| / max(|a|, |b|, 1).
double relative_error(Complex a, Complex b);

/// Two quadratic segments in C^2 starting at `start`, steps bounded by 0.4 per coordinate.
PiecewisePath random_path(std::mt19937_64& rng, const Point& start);
/// dlog of an affine functional vanishing far from the unit box near (1, 2), or a polynomial form.
ScalarOneForm random_form(std::mt19937_64& rng);

}  // namespace malcev::verify
