#pragma once
// Fractional free convolution powers and the semicircular flow.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "freeconv/measure.hpp"

namespace freeconv {

inline constexpr double kSupportThreshold = 1e-6;

struct PowerOptions {
  /// Output nodes; 0 keeps the input count.
  std::size_t n_out = 0;
  /// Fixed output window instead of the detected support.
  std::optional<std::pair<double, double>> window;
  /// Support is {f > threshold * max f}.
  double support_threshold = kSupportThreshold;
};

/// mu^{boxplus k} for real k >= 1. Throws KLessThanOne, SolverDiverged.
GridMeasure free_power(const GridMeasure& mu, double k, const PowerOptions& opts = {});
/// Density of mu^{boxplus k} at ascending points.
std::vector<double> free_power_density_at(const GridMeasure& mu, double k, std::span<const double> xs);
/// G of mu^{boxplus k} at z off the real axis.
std::complex<double> free_power_cauchy(const GridMeasure& mu, double k, std::complex<double> z);

/// Moments of mu^{boxplus k} from kappa_n -> k kappa_n. Order 2..16.
std::vector<double> free_power_moments(const GridMeasure& mu, double k, std::size_t order);

/// k^{-1/2} dilation of mu^{boxplus k}. A window in opts refers to the
/// normalized variable.
GridMeasure normalized_free_power(const GridMeasure& mu, double k, const PowerOptions& opts = {});

/// mu boxplus (semicircle of variance t).
GridMeasure semicircular_flow(const GridMeasure& mu, double t, const PowerOptions& opts = {});

/// sup |(k d/dk + z d/dz) G - G'/G| over z = x + i eps, x in the inner 80%
/// of the support of mu^{boxplus k}.
double burgers_residual(const GridMeasure& mu, double k, double dk, double eps);

}  // namespace freeconv
