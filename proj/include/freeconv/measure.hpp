#pragma once
// Absolutely continuous probability measures sampled on a uniform grid.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace freeconv {

inline constexpr std::size_t kMinGridPoints = 16;
inline constexpr std::size_t kDefaultGridPoints = 2001;
inline constexpr double kMassTolerance = 1e-9;

/// Density samples of a probability measure on lo + j*h, j = 0..n-1.
/// Immutable; the trapezoid mass is 1 by construction.
class GridMeasure {
 public:
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t n() const noexcept { return density_.size(); }
  double h() const noexcept { return (hi_ - lo_) / static_cast<double>(n() - 1); }
  double node(std::size_t j) const noexcept { return lo_ + h() * static_cast<double>(j); }

  std::span<const double> density() const noexcept { return density_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  /// Trapezoid weight times density at each node.
  std::span<const double> weighted() const noexcept { return weighted_; }

  double max_density() const noexcept;

 private:
  friend GridMeasure make_grid_measure(double lo, double hi, std::vector<double> samples);
  GridMeasure(double lo, double hi, std::vector<double> density);

  double lo_;
  double hi_;
  std::vector<double> density_;
  std::vector<double> nodes_;
  std::vector<double> weighted_;
};

/// Truncated free cumulants kappa_1..kappa_m.
struct CumulantSeries {
  std::vector<double> kappa;
  std::size_t order() const noexcept { return kappa.size(); }
  /// kappa_n with the usual 1-based index.
  double operator[](std::size_t n) const { return kappa.at(n - 1); }
};

/// Validates and rescales samples to unit trapezoid mass.
/// Throws NegativeDensity, ZeroMass, GridTooSmall, BadArgument.
GridMeasure make_grid_measure(double lo, double hi, std::vector<double> samples);

double trapezoid(std::span<const double> values, double h);

// Constructors for the standard test laws.
GridMeasure semicircle(double mean, double variance, std::size_t n = kDefaultGridPoints);
GridMeasure uniform(double lo, double hi, std::size_t n = kDefaultGridPoints);
/// C-infinity bump exp(-1/(1-x^2)) on [-1, 1].
GridMeasure bump(std::size_t n = 4001);

/// Width beyond the last atom at which a Cauchy(eps) tail carries `tail_mass`.
double cauchy_window(double eps, double tail_mass);

/// 1/2 (delta_{-1} + delta_1) convolved with the Cauchy law of width eps,
/// truncated where the discarded tail mass is at most `tail_mass`.
GridMeasure bernoulli_smoothed(double eps, double tail_mass = 2e-3);
/// uniform[-1,1] convolved with the Cauchy law of width eps, truncated likewise.
GridMeasure uniform_smoothed(double eps, double tail_mass = 2e-3);

GridMeasure dilate(const GridMeasure& mu, double lambda);
GridMeasure translate(const GridMeasure& mu, double shift);

/// Trapezoid estimates of int x^j dmu, j = 1..m.
std::vector<double> moments(const GridMeasure& mu, std::size_t m);
double mean(const GridMeasure& mu);
double variance(const GridMeasure& mu);

/// CDF at the nodes (cumulative trapezoid, first entry 0).
std::vector<double> cdf_nodes(const GridMeasure& mu);
/// CDF of the piecewise-linear density (exact between nodes; 0 / 1 outside).
double cdf(const GridMeasure& mu, double x);
/// Smallest x with cdf(x) = q, for 0 < q < 1. Throws QuantileOutOfRange.
double quantile(const GridMeasure& mu, double q);

/// Classical convolution with the Cauchy kernel, on a grid extended until
/// the discarded tail mass is at most `tail_mass`, then renormalized.
GridMeasure cauchy_smooth(const GridMeasure& mu, double eps, double tail_mass = 2e-3);

/// Resample on a new uniform grid by monotone cubic interpolation of the CDF
/// followed by differentiation. Mass is preserved when [lo, hi] covers mu.
GridMeasure regrid(const GridMeasure& mu, double lo, double hi, std::size_t n);

/// sup_x |F_mu(x) - F(x)| over the nodes of mu and a few points beyond.
double cdf_distance(const GridMeasure& mu, const std::function<double(double)>& reference_cdf);
double cdf_distance(const GridMeasure& mu, const GridMeasure& nu);

/// Closed-form CDF of the semicircle law.
double semicircle_cdf(double x, double mean, double variance);

nlohmann::json to_json(const GridMeasure& mu);
GridMeasure measure_from_json(const nlohmann::json& j);
GridMeasure read_measure_json(const std::filesystem::path& path);
void write_measure_json(const GridMeasure& mu, const std::filesystem::path& path);

/// Header line, then rows x,f on a uniform grid; extra columns are ignored.
/// Throws InvalidInput for non-uniform or unparsable rows.
GridMeasure read_measure_csv(const std::filesystem::path& path);
void write_measure_csv(const GridMeasure& mu, const std::filesystem::path& path);
/// By extension: .csv, otherwise JSON.
GridMeasure read_measure(const std::filesystem::path& path);

}  // namespace freeconv
