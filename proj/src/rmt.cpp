#include "freeconv/rmt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "freeconv/convolution.hpp"
#include "freeconv/error.hpp"

namespace freeconv::rmt {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t minor_size(std::size_t n, double frac) {
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n) - 1e-9)), 1, n);
}

}  // namespace

void validate(const RunConfig& cfg) {
  require(cfg.n_dim >= kMinDim, ErrorKind::BadArgument, "matrix dimension must be >= 64");
  require(cfg.trials >= 1, ErrorKind::BadArgument, "need at least one trial");
  require(cfg.k >= 1.0, ErrorKind::KLessThanOne, "k must be >= 1");
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state = a ^ (trial * 0xd1b54a32d192ed03ULL);
  std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state), splitmix64(state)};
  return std::mt19937_64(seq);
}

Eigen::MatrixXcd haar_columns(std::size_t n, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const auto rows = static_cast<Eigen::Index>(n);
  const auto c = static_cast<Eigen::Index>(cols);
  Eigen::MatrixXcd z(rows, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      z(i, j) = {re, normal(rng)};
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, c);
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < c; ++j) {
    const std::complex<double> d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

std::vector<double> quantile_spectrum(const GridMeasure& mu, std::size_t n_dim) {
  std::vector<double> out(n_dim);
  for (std::size_t i = 0; i < n_dim; ++i) {
    out[i] = quantile(mu, (static_cast<double>(i) + 0.5) / static_cast<double>(n_dim));
  }
  return out;
}

Eigen::MatrixXcd sample_invariant_hermitian(const GridMeasure& mu, std::size_t n_dim, std::mt19937_64& rng) {
  require(n_dim >= kMinDim, ErrorKind::BadArgument, "matrix dimension must be >= 64");
  const auto lambda = quantile_spectrum(mu, n_dim);
  const Eigen::MatrixXcd u = haar_columns(n_dim, n_dim, rng);
  const Eigen::Map<const Eigen::VectorXd> d(lambda.data(), static_cast<Eigen::Index>(n_dim));
  Eigen::MatrixXcd a = u * d.cast<std::complex<double>>().asDiagonal() * u.adjoint();
  return 0.5 * (a + a.adjoint());
}

Eigen::MatrixXcd sample_invariant_hermitian(const GridMeasure& mu, std::size_t n_dim, std::uint64_t seed) {
  auto rng = trial_rng(seed, 0);
  return sample_invariant_hermitian(mu, n_dim, rng);
}

SpectralSample minor_spectrum(const Eigen::MatrixXcd& a, std::size_t m_dim) {
  require(m_dim >= 1 && m_dim <= static_cast<std::size_t>(a.rows()), ErrorKind::BadMinorDim,
          "minor dimension " + std::to_string(m_dim) + " outside 1.." + std::to_string(a.rows()));
  const auto m = static_cast<Eigen::Index>(m_dim);
  return {m_dim, sorted_eigenvalues(a.topLeftCorner(m, m))};
}

std::size_t interlacing_violations(const SpectralSample& big, const SpectralSample& small, double tol) {
  require(small.dim <= big.dim, ErrorKind::BadMinorDim, "minor larger than the matrix");
  const std::size_t d = big.dim - small.dim;
  std::size_t bad = 0;
  for (std::size_t j = 0; j < small.dim; ++j) {
    if (small.eigenvalues[j] < big.eigenvalues[j] - tol) ++bad;
    if (small.eigenvalues[j] > big.eigenvalues[j + d] + tol) ++bad;
  }
  return bad;
}

double ks_distance(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  const auto n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    worst = std::max({worst, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return worst;
}

MinorReport minor_process_check(const GridMeasure& mu, const RunConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  MinorReport rep;
  rep.config = cfg;
  const std::size_t n = cfg.n_dim;
  const std::size_t m = minor_size(n, 1.0 / cfg.k);
  rep.minor_dim = m;
  const auto lambda = quantile_spectrum(mu, n);
  const SpectralSample full{n, lambda};
  const double scale = std::max(std::abs(lambda.front()), std::abs(lambda.back()));
  const Eigen::Map<const Eigen::VectorXd> d(lambda.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXcd dc = d.cast<std::complex<double>>();

  // The m-minor of U D U* equals W* D W with W the first m columns of the Haar U*.
  std::vector<std::vector<double>> per_trial(cfg.trials);
  std::vector<std::size_t> bad(cfg.trials, 0);
  const auto trials = static_cast<std::ptrdiff_t>(cfg.trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(t));
    const Eigen::MatrixXcd w = haar_columns(n, m, rng);
    Eigen::MatrixXcd minor = w.adjoint() * dc.asDiagonal() * w;
    minor = 0.5 * (minor + minor.adjoint()).eval();
    SpectralSample s{m, sorted_eigenvalues(minor)};
    bad[static_cast<std::size_t>(t)] = interlacing_violations(full, s, 1e-10 * scale);
    for (double& x : s.eigenvalues) x *= cfg.k;
    per_trial[static_cast<std::size_t>(t)] = std::move(s.eigenvalues);
  }
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    rep.interlacing_violations += bad[t];
    rep.pooled.insert(rep.pooled.end(), per_trial[t].begin(), per_trial[t].end());
  }
  std::sort(rep.pooled.begin(), rep.pooled.end());

  rep.empirical_moments.assign(kMomentOrder, 0.0);
  for (double x : rep.pooled) {
    double p = 1.0;
    for (std::size_t j = 0; j < kMomentOrder; ++j) rep.empirical_moments[j] += (p *= x);
  }
  for (double& v : rep.empirical_moments) v /= static_cast<double>(rep.pooled.size());
  rep.expected_moments = free_power_moments(mu, cfg.k, kMomentOrder);
  for (std::size_t j = 0; j < kMomentOrder; ++j) {
    rep.deviations.push_back(std::abs(rep.empirical_moments[j] - rep.expected_moments[j]));
  }
  const auto target = cfg.k == 1.0 ? mu : free_power(mu, cfg.k);
  rep.ks_distance = ks_distance(rep.pooled, [&](double x) { return cdf(target, x); });
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<PatternPoint> gt_pattern_check(const GridMeasure& mu, const RunConfig& cfg,
                                           std::span<const double> s_list, std::span<const double> y_list) {
  validate(cfg);
  require(s_list.size() == y_list.size(), ErrorKind::BadArgument, "s and y lists differ in length");
  const std::size_t n = cfg.n_dim;
  std::vector<PatternPoint> out;
  for (std::size_t p = 0; p < s_list.size(); ++p) {
    const double s = s_list[p], y = y_list[p];
    require(s > 0.0 && s <= 1.0 && y > 0.0 && y < s, ErrorKind::BadArgument, "(s, y) outside the pyramid");
    const auto nu = s == 1.0 ? mu : free_power(mu, 1.0 / s);
    out.push_back({s, y, 0.0, s * quantile(nu, y / s)});
  }
  std::vector<std::vector<double>> per_trial(cfg.trials, std::vector<double>(out.size()));
  const auto trials = static_cast<std::ptrdiff_t>(cfg.trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(t));
    const auto a = sample_invariant_hermitian(mu, n, rng);
    for (std::size_t p = 0; p < out.size(); ++p) {
      const std::size_t m = minor_size(n, out[p].s);
      const std::size_t idx = minor_size(n, out[p].y);
      const auto sp = minor_spectrum(a, m);
      per_trial[static_cast<std::size_t>(t)][p] = sp.eigenvalues[std::min(idx, m) - 1];
    }
  }
  for (std::size_t p = 0; p < out.size(); ++p) {
    double sum = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) sum += per_trial[t][p];
    out[p].empirical = sum / static_cast<double>(cfg.trials);
  }
  return out;
}

GueReport gue_variance_check(std::size_t n_vars, std::size_t n_dim, double t, std::size_t trials,
                             std::uint64_t seed) {
  require(t > 0.0, ErrorKind::BadArgument, "variance parameter t must be > 0");
  require(n_vars >= 1 && n_dim >= 1 && trials >= 1, ErrorKind::BadArgument, "empty GUE run");
  GueReport rep{n_vars, n_dim, t, trials, seed, 0.0, t * static_cast<double>(n_vars)};
  const double var = t / static_cast<double>(n_dim);
  std::vector<double> per_trial(trials, 0.0);
  const auto count = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t tr = 0; tr < count; ++tr) {
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(tr));
    std::normal_distribution<double> diag(0.0, std::sqrt(var));
    std::normal_distribution<double> off(0.0, std::sqrt(0.5 * var));
    double total = 0.0;
    for (std::size_t v = 0; v < n_vars; ++v) {
      // tr_N(Z^2) = (1/N) sum_{a,b} |Z_ab|^2 for Hermitian Z.
      double sq = 0.0;
      for (std::size_t a = 0; a < n_dim; ++a) {
        const double x = diag(rng);
        sq += x * x;
        for (std::size_t b = a + 1; b < n_dim; ++b) {
          const double re = off(rng), im = off(rng);
          sq += 2.0 * (re * re + im * im);
        }
      }
      total += sq / static_cast<double>(n_dim);
    }
    per_trial[static_cast<std::size_t>(tr)] = total;
  }
  for (double v : per_trial) rep.estimate += v;
  rep.estimate /= static_cast<double>(trials);
  return rep;
}

nlohmann::json to_json(const MinorReport& r) {
  return {{"config", {{"n_dim", r.config.n_dim}, {"k", r.config.k}, {"trials", r.config.trials}, {"seed", r.config.seed}}},
          {"minor_dim", r.minor_dim},
          {"empirical_moments", r.empirical_moments},
          {"expected_moments", r.expected_moments},
          {"per_order_deviations", r.deviations},
          {"ks_distance", r.ks_distance},
          {"interlacing_violations", r.interlacing_violations},
          {"runtime_seconds", r.runtime_seconds}};
}

nlohmann::json to_json(const GueReport& r) {
  return {{"config", {{"n_vars", r.n_vars}, {"n_dim", r.n_dim}, {"t", r.t}, {"trials", r.trials}, {"seed", r.seed}}},
          {"estimate", r.estimate},
          {"expected", r.expected},
          {"relative_error", std::abs(r.estimate - r.expected) / r.expected}};
}

}  // namespace freeconv::rmt
