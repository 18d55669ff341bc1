#pragma once
// The kernel K(z, w) = (D + G(z) G(w))^2 / (G(z) G(w)), D = (G(z) - G(w)) / (z - w),
// its positivity on point clouds and the integrated identity against the
// derivative of the normalized Fisher information at k = 1.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "freeconv/measure.hpp"

namespace freeconv {

using cplx = std::complex<double>;

inline constexpr double kDiagonalGap = 1e-8;
inline constexpr double kKernelEpsLadder[] = {0.05, 0.02, 0.01, 0.005};

struct KernelEvaluation {
  std::vector<cplx> points;
  /// gram(j, k) = K(z_j, conj(z_k)).
  Eigen::MatrixXcd gram;
};

/// K from G values; `dgz` is used when |z - w| < kDiagonalGap.
cplx kernel_from_values(cplx z, cplx w, cplx gz, cplx gw, cplx dgz);
/// Throws OnSupport for real z or w inside [lo, hi].
cplx kernel_K(const GridMeasure& mu, cplx z, cplx w);

/// Throws DegeneratePoints for repeated points, OnSupport as above.
KernelEvaluation kernel_gram(const GridMeasure& mu, std::span<const cplx> points);
double gram_min_eigenvalue(const GridMeasure& mu, std::span<const cplx> points);

struct QuadrupleTerms {
  double a0;
  double a1;
  double a2;
  /// a2 + 2 a1 + a0.
  double total() const { return a2 + 2.0 * a1 + a0; }
};

/// Tensor trapezoid of sum_{alpha, beta} int int f(x) f(y) K(x + i alpha eps, y + i beta eps),
/// split into its three pieces, on a grid with spacing min(h, eps/2).
QuadrupleTerms a_decomposition(const GridMeasure& mu, double eps);
double quadruple_integral(const GridMeasure& mu, double eps);

struct Extrapolation {
  std::vector<double> eps;
  std::vector<QuadrupleTerms> terms;
  /// Linear Richardson from the two smallest eps, for the total and each piece.
  double limit;
  QuadrupleTerms terms_limit;
};

/// quadruple_integral over kKernelEpsLadder, extrapolated to eps = 0.
Extrapolation extrapolate_quadruple(const GridMeasure& mu);

/// Limits predicted for a1 and a2.
double a1_limit(const GridMeasure& mu);
double a2_limit(const GridMeasure& mu);

}  // namespace freeconv
