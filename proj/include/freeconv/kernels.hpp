#pragma once
// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp` with the same
// signature; the two must agree to rounding (see tests/test_kernels.cpp).

#include <complex>
#include <span>
#include <vector>

namespace freeconv::kernels {

using cplx = std::complex<double>;

/// G(z) and G'(z) of a density.
struct CauchyPair {
  cplx g;
  cplx dg;
};

/// Sum of w_j / (z - x_j) and its z-derivative (trapezoid rule when
/// `wf` holds trapezoid weights times density).
CauchyPair cauchy_trapezoid(std::span<const double> x, std::span<const double> wf, cplx z);

/// Exact Cauchy transform of the piecewise-linear interpolant of `f` on the
/// uniform grid lo + j*h. For real z the boundary value from above is taken.
/// Hat functions within 16 cells of z are integrated in closed form, the
/// rest by their moment series (truncation error below 1e-13 relative).
CauchyPair cauchy_linear(double lo, double h, std::span<const double> f, cplx z);
/// Same transform from the global closed form (complex log at every node).
/// Reference for tests.
CauchyPair cauchy_linear_direct(double lo, double h, std::span<const double> f, cplx z);

/// Coefficients c_j of the second difference of the piecewise-linear
/// interpolant: c_0 = s_0, c_j = s_j - s_{j-1}, c_{n-1} = -s_{n-2}.
std::vector<double> slope_jumps(double h, std::span<const double> f);

// (1/pi) * sum over j with (i - j) odd of 2 f_j / (i - j): the alternating
// midpoint rule for the principal value Hilbert sum, grid spacing cancelled.
namespace serial {
std::vector<double> hilbert_midpoint(std::span<const double> f);
std::vector<CauchyPair> cauchy_trapezoid_many(std::span<const double> x, std::span<const double> wf,
                                              std::span<const cplx> z);
std::vector<double> log_potential(double lo, double h, std::span<const double> f,
                                  std::span<const double> at);
std::vector<double> cauchy_convolve(double lo, double h, std::span<const double> f, double eps,
                                    std::span<const double> at);
}  // namespace serial

namespace omp {
std::vector<double> hilbert_midpoint(std::span<const double> f);
std::vector<CauchyPair> cauchy_trapezoid_many(std::span<const double> x, std::span<const double> wf,
                                              std::span<const cplx> z);
std::vector<double> log_potential(double lo, double h, std::span<const double> f,
                                  std::span<const double> at);
std::vector<double> cauchy_convolve(double lo, double h, std::span<const double> f, double eps,
                                    std::span<const double> at);
}  // namespace omp

/// Real parts of the three pieces of the kernel-weighted double sum
///   sum_{a,b = +-} sum_{i,j} q_i q_j K(x_i + i a eps, x_j + i b eps)
/// split as K = D^2/(G_z G_w) + 2 D + G_z G_w with D the difference quotient.
struct QuadrupleParts {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
};

namespace serial {
QuadrupleParts quadruple_sum(std::span<const double> x, std::span<const double> q,
                             std::span<const cplx> g_upper, std::span<const cplx> dg_upper, double eps);
}
namespace omp {
QuadrupleParts quadruple_sum(std::span<const double> x, std::span<const double> q,
                             std::span<const cplx> g_upper, std::span<const cplx> dg_upper, double eps);
}

}  // namespace freeconv::kernels
