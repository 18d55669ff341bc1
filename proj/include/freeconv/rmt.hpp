#pragma once
// Monte Carlo checks of the minor process: k times the spectrum of an
// ceil(N/k) minor of a unitarily invariant matrix with spectrum ~ mu
// approaches mu^{boxplus k}. Also the GUE variance normalization.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "freeconv/measure.hpp"

namespace freeconv::rmt {

inline constexpr std::size_t kMinDim = 64;
inline constexpr std::size_t kMomentOrder = 6;

struct SpectralSample {
  std::size_t dim = 0;
  /// Ascending.
  std::vector<double> eigenvalues;
};

struct RunConfig {
  std::size_t n_dim = 1024;
  double k = 2.0;
  std::size_t trials = 16;
  std::uint64_t seed = 0;
};

/// Throws BadArgument unless n_dim >= kMinDim, trials >= 1 and k >= 1.
void validate(const RunConfig& cfg);

/// Independent stream for one trial of a run.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Haar unitary from the QR factorization of a complex Ginibre matrix with
/// the phases of diag(R) moved into Q. Only the first `cols` columns.
Eigen::MatrixXcd haar_columns(std::size_t n, std::size_t cols, std::mt19937_64& rng);

/// lambda_i = quantile(mu, (i - 1/2)/N).
std::vector<double> quantile_spectrum(const GridMeasure& mu, std::size_t n_dim);

/// U diag(lambda) U* with lambda the quantile spectrum and U Haar.
Eigen::MatrixXcd sample_invariant_hermitian(const GridMeasure& mu, std::size_t n_dim, std::mt19937_64& rng);
Eigen::MatrixXcd sample_invariant_hermitian(const GridMeasure& mu, std::size_t n_dim, std::uint64_t seed);

/// Eigenvalues of the top-left m_dim block. Throws BadMinorDim.
SpectralSample minor_spectrum(const Eigen::MatrixXcd& a, std::size_t m_dim);

/// Count of violations of lambda_j(big) <= lambda_j(small) <= lambda_{j+d}(big),
/// d = big.dim - small.dim, beyond tol.
std::size_t interlacing_violations(const SpectralSample& big, const SpectralSample& small, double tol);

/// sup |F_emp - F| for sorted samples.
double ks_distance(std::span<const double> sorted, const std::function<double(double)>& cdf);

struct MinorReport {
  RunConfig config;
  std::size_t minor_dim = 0;
  std::vector<double> empirical_moments;
  std::vector<double> expected_moments;
  std::vector<double> deviations;
  double ks_distance = 0.0;
  std::size_t interlacing_violations = 0;
  /// Pooled k * minor eigenvalues, ascending.
  std::vector<double> pooled;
  double runtime_seconds = 0.0;
};

/// Pooled moments of k * (ceil(N/k) minor) against the cumulant-route moments
/// of mu^{boxplus k}, and KS distance against the computed density of mu^{boxplus k}.
/// Interlacing is checked against the full quantile spectrum.
MinorReport minor_process_check(const GridMeasure& mu, const RunConfig& cfg);

struct PatternPoint {
  double s;
  double y;
  double empirical;
  double predicted;
};

/// Mean over trials of eigenvalue ceil(yN) of the ceil(sN) minor against
/// s quantile(mu^{boxplus 1/s}, y/s).
std::vector<PatternPoint> gt_pattern_check(const GridMeasure& mu, const RunConfig& cfg,
                                           std::span<const double> s_list, std::span<const double> y_list);

struct GueReport {
  std::size_t n_vars = 0;
  std::size_t n_dim = 0;
  double t = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double expected = 0.0;
};

/// Mean of sum_j tr_N(Z_j^2) for independent GUE Z_j with E|Z_ab|^2 = t/N.
GueReport gue_variance_check(std::size_t n_vars, std::size_t n_dim, double t, std::size_t trials,
                             std::uint64_t seed);

nlohmann::json to_json(const MinorReport& r);
nlohmann::json to_json(const GueReport& r);

}  // namespace freeconv::rmt
