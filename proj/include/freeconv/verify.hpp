#pragma once
// Named numerical checks grouped into suites, shared by the CLI verify command.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "freeconv/measure.hpp"
#include "freeconv/rmt.hpp"

namespace freeconv::verify {

struct Check {
  std::string name;
  /// The identity or property being tested, in words.
  std::string reference;
  double value = 0.0;
  /// Upper bound, or [lo, hi] when `range` is set.
  double tolerance = 0.0;
  bool range = false;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
};

Check at_most(std::string name, std::string reference, double value, double tolerance);
Check at_least(std::string name, std::string reference, double value, double bound);
Check within(std::string name, std::string reference, double value, double lo, double hi);

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const std::vector<Check>& checks);
bool all_pass(const std::vector<Check>& checks);

inline const std::vector<std::string> kSuites{"hilbert", "kernel", "pde", "variational", "rmt", "all"};

/// Three Hilbert transform identities at relative tolerance `tol`.
std::vector<Check> hilbert_suite(const GridMeasure& mu, double tol = 1e-5);
/// Gram positivity on two point clouds, the A0/A1/A2 limits and the
/// quadruple integral against the finite-difference derivative of Phi.
std::vector<Check> kernel_suite(const GridMeasure& mu);
/// Burgers residual and the density flow residual with its refinement ratio.
std::vector<Check> pde_suite(const GridMeasure& mu, double k = 1.5);
/// Euler-Lagrange refinement, interlacing and density/Hilbert consistency.
std::vector<Check> variational_suite(const GridMeasure& mu, std::size_t ns = 32);
/// Minor process and GUE variance.
std::vector<Check> rmt_suite(const GridMeasure& mu, const rmt::RunConfig& cfg);

}  // namespace freeconv::verify
