#pragma once
// Subordination solver shared by free powers and the semicircular flow.
//
// Free power k:         omega = z/k + (1 - 1/k) F_mu(omega),  G_k(z) = G_mu(omega)
// Semicircular flow t:  omega = z - t G_mu(omega),            G_t(z) = G_mu(omega)
//
// with F = 1/G. In both cases Im omega >= Im z.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "freeconv/measure.hpp"

namespace freeconv::subordination {

using cplx = std::complex<double>;

/// Smallest Im z used for densities; the last three rungs feed Richardson.
inline constexpr double kLadder[] = {1e-1, 1e-2, 1e-3, 4e-4, 2e-4, 1e-4};

struct Interval {
  double lo;
  double hi;
};

class Solver {
 public:
  static Solver power(const GridMeasure& mu, double k);
  static Solver flow(const GridMeasure& mu, double t);

  /// Fixed point at z from the starting point omega0 (Newton, then damped
  /// iteration). Empty if both fail.
  std::optional<cplx> solve(cplx z, cplx omega0) const;
  /// Fixed point at z reached by continuation from large Im z.
  cplx omega(cplx z) const;
  /// Cauchy transform of the target law at z in the upper half-plane.
  cplx cauchy(cplx z) const;

  /// Density of the target law at ascending points xs: eps-ladder with
  /// quadratic Richardson extrapolation. Throws SolverDiverged.
  std::vector<double> density(std::span<const double> xs) const;

  /// Interval that must contain the support of the target law.
  Interval support_bound() const;
  /// {f > threshold * max f} inside support_bound(), endpoints bisected.
  Interval detect_support(double threshold) const;

 private:
  Solver(const GridMeasure& mu, bool flow, double param);
  cplx guess(cplx z) const;
  cplx residual(cplx z, cplx omega, cplx* derivative) const;
  cplx map(cplx z, cplx omega) const;
  std::optional<cplx> newton(cplx z, cplx omega) const;
  std::optional<cplx> damped(cplx z, cplx omega) const;
  std::optional<cplx> descend(double x, cplx omega, double eps_from, double eps_to, int depth) const;

  const GridMeasure* mu_;
  bool flow_;
  double param_;
  double kappa1_;
  double kappa2_;
};

}  // namespace freeconv::subordination
