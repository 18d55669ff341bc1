#pragma once
// Cauchy transforms, boundary values and free cumulants.

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "freeconv/kernels.hpp"
#include "freeconv/measure.hpp"

namespace freeconv {

using cplx = std::complex<double>;

inline constexpr std::size_t kMinHilbertPoints = 64;
inline constexpr std::size_t kDefaultCumulantOrder = 16;

/// Density and its Hilbert transform on the grid of a measure.
struct BoundaryField {
  std::vector<double> grid;
  std::vector<double> f;
  std::vector<double> hf;
};

/// G(z) and G'(z) of the piecewise-linear density, exact up to rounding, so
/// that G is continuous in z as the solvers require. Real z takes the
/// boundary value from above. No support check.
kernels::CauchyPair cauchy_pair(const GridMeasure& mu, cplx z);

/// G_mu(z) = int f(x)/(z - x) dx. Throws TooCloseToSupport for real z
/// within one grid spacing of [lo, hi] where the density is not negligible.
cplx cauchy_transform(const GridMeasure& mu, cplx z);

/// Hf = p.v. (1/pi) int f(x)/(y - x) dx at the nodes. Throws GridTooSmall.
BoundaryField hilbert(const GridMeasure& mu);
/// Same rule applied to arbitrary (signed) samples on lo + j*h.
std::vector<double> hilbert_values(double lo, double hi, std::span<const double> values);

/// G(x_j + i eps) at every node. Throws NonPositiveEps.
std::vector<cplx> plemelj_boundary(const GridMeasure& mu, double eps);

/// kappa_1..kappa_N from m_1..m_N. Throws TooFewMoments.
CumulantSeries moments_to_cumulants(std::span<const double> m);
/// m_1..m_N from kappa_1..kappa_N.
std::vector<double> cumulants_to_moments(const CumulantSeries& k);
/// Moments up to `order`, then cumulants.
CumulantSeries free_cumulants(const GridMeasure& mu, std::size_t order = kDefaultCumulantOrder);

/// sum_{n>=0} kappa_{n+1} s^n. Throws SeriesNotConverged when the last
/// retained term exceeds 1e-12 of the partial sum.
cplx r_transform(const CumulantSeries& k, cplx s);

/// Relative residuals of int f Hf = 0, int f (Hf)^2 = (1/3) int f^3 and
/// H(f Hf) = ((Hf)^2 - f^2)/2, the last on the inner `interior` fraction of
/// the grid. The first is scaled by int f |Hf|, the third by its sup norm.
struct HilbertIdentities {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};
HilbertIdentities hilbert_identities(const GridMeasure& mu, double interior = 0.9);

void write_boundary_csv(const BoundaryField& field, std::ostream& out);
void write_boundary_csv(const BoundaryField& field, const std::filesystem::path& path);

}  // namespace freeconv
