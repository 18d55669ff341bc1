#include "freeconv/subordination.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iterator>
#include <numbers>

#include "freeconv/error.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv::subordination {

namespace {

constexpr int kNewtonIterations = 60;
constexpr int kDampedIterations = 2000;
constexpr int kMaxSubsteps = 12;
constexpr std::size_t kCoarseScan = 401;
constexpr int kBisections = 40;

double richardson(double f_4e, double f_2e, double f_e) { return (8.0 * f_e - 6.0 * f_2e + f_4e) / 3.0; }

}  // namespace

Solver::Solver(const GridMeasure& mu, bool flow, double param) : mu_(&mu), flow_(flow), param_(param) {
  const auto m = moments(mu, 2);
  kappa1_ = m[0];
  kappa2_ = m[1] - m[0] * m[0];
}

Solver Solver::power(const GridMeasure& mu, double k) {
  require(k >= 1.0, ErrorKind::KLessThanOne, "free power needs k >= 1, got " + std::to_string(k));
  return Solver(mu, false, k);
}

Solver Solver::flow(const GridMeasure& mu, double t) {
  require(t >= 0.0, ErrorKind::BadArgument, "flow time must be >= 0");
  return Solver(mu, true, t);
}

cplx Solver::guess(cplx z) const {
  if (flow_) return z - param_ / (z - kappa1_);
  return z - (param_ - 1.0) * kappa1_;
}

cplx Solver::residual(cplx z, cplx omega, cplx* derivative) const {
  const auto p = cauchy_pair(*mu_, omega);
  if (flow_) {
    if (derivative) *derivative = 1.0 + param_ * p.dg;
    return omega - z + param_ * p.g;
  }
  const double c = 1.0 - 1.0 / param_;
  if (derivative) *derivative = 1.0 + c * p.dg / (p.g * p.g);
  return omega - z / param_ - c / p.g;
}

cplx Solver::map(cplx z, cplx omega) const {
  const cplx g = cauchy_pair(*mu_, omega).g;
  if (flow_) return z - param_ * g;
  return z / param_ + (1.0 - 1.0 / param_) / g;
}

std::optional<cplx> Solver::newton(cplx z, cplx omega) const {
  const double floor_im = 0.5 * z.imag();
  cplx dh;
  cplx h = residual(z, omega, &dh);
  for (int it = 0; it < kNewtonIterations; ++it) {
    const double scale = 1.0 + std::abs(omega);
    if (std::abs(h) <= 1e-13 * scale) return omega;
    const cplx step = -h / dh;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return std::nullopt;
    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt, lambda *= 0.5) {
      const cplx trial = omega + lambda * step;
      if (!(trial.imag() > floor_im)) continue;
      cplx dtrial;
      const cplx htrial = residual(z, trial, &dtrial);
      if (std::abs(htrial) < std::abs(h)) {
        omega = trial;
        h = htrial;
        dh = dtrial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Stalled at rounding level counts as converged.
      if (std::abs(h) <= 1e-10 * scale) return omega;
      return std::nullopt;
    }
  }
  if (std::abs(h) <= 1e-10 * (1.0 + std::abs(omega))) return omega;
  return std::nullopt;
}

std::optional<cplx> Solver::damped(cplx z, cplx omega) const {
  const double floor_im = 0.5 * z.imag();
  double alpha = 0.5;
  double r = std::abs(residual(z, omega, nullptr));
  for (int it = 0; it < kDampedIterations && alpha > 1e-8; ++it) {
    if (r <= 1e-13 * (1.0 + std::abs(omega))) return omega;
    const cplx trial = (1.0 - alpha) * omega + alpha * map(z, omega);
    if (!(trial.imag() > floor_im)) {
      alpha *= 0.5;
      continue;
    }
    const double rt = std::abs(residual(z, trial, nullptr));
    if (rt > r) {
      alpha *= 0.5;
      continue;
    }
    omega = trial;
    r = rt;
  }
  if (r <= 1e-10 * (1.0 + std::abs(omega))) return omega;
  return std::nullopt;
}

std::optional<cplx> Solver::solve(cplx z, cplx omega0) const {
  if (auto w = newton(z, omega0)) return w;
  if (auto w = damped(z, omega0)) return newton(z, *w).value_or(*w);
  return std::nullopt;
}

std::optional<cplx> Solver::descend(double x, cplx omega, double eps_from, double eps_to, int depth) const {
  if (auto w = solve(cplx(x, eps_to), omega)) return w;
  if (depth >= kMaxSubsteps) return std::nullopt;
  const double mid = std::sqrt(eps_from * eps_to);
  auto w = descend(x, omega, eps_from, mid, depth + 1);
  if (!w) return std::nullopt;
  return descend(x, *w, mid, eps_to, depth + 1);
}

Interval Solver::support_bound() const {
  if (flow_) {
    const double r = 2.0 * std::sqrt(param_);
    return {mu_->lo() - r, mu_->hi() + r};
  }
  return {param_ * mu_->lo(), param_ * mu_->hi()};
}

cplx Solver::omega(cplx z) const {
  require(z.imag() > 0.0, ErrorKind::BadArgument, "subordination needs Im z > 0");
  const auto b = support_bound();
  const double top = std::max(z.imag(), 10.0 * (1.0 + b.hi - b.lo));
  auto w = solve(cplx(z.real(), top), guess(cplx(z.real(), top)));
  double y = top;
  while (w && y > z.imag()) {
    const double next = std::max(0.5 * y, z.imag());
    w = descend(z.real(), *w, y, next, 0);
    y = next;
  }
  if (!w) fail(ErrorKind::SolverDiverged, "no subordination fixed point at z = " + std::to_string(z.real()) +
                                              " + " + std::to_string(z.imag()) + "i");
  return *w;
}

cplx Solver::cauchy(cplx z) const {
  if (z.imag() < 0.0) return std::conj(cauchy(std::conj(z)));
  return cauchy_pair(*mu_, omega(z)).g;
}

std::vector<double> Solver::density(std::span<const double> xs) const {
  const std::size_t n = xs.size();
  std::vector<cplx> start(n);
  const double eps0 = kLadder[0];
  for (std::size_t i = 0; i < n; ++i) {
    const cplx z(xs[i], eps0);
    std::optional<cplx> w;
    if (i > 0) w = solve(z, start[i - 1]);
    start[i] = w ? *w : omega(z);
  }

  std::vector<double> out(n, 0.0);
  std::atomic<bool> failed{false};
  std::atomic<std::ptrdiff_t> failed_at{-1};
  constexpr std::size_t rungs = std::size(kLadder);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    if (failed.load(std::memory_order_relaxed)) continue;
    const auto i = static_cast<std::size_t>(ii);
    std::optional<cplx> w = start[i];
    double f[3] = {0.0, 0.0, 0.0};
    for (std::size_t r = 1; r < rungs && w; ++r) {
      w = descend(xs[i], *w, kLadder[r - 1], kLadder[r], 0);
      if (w && r + 3 >= rungs) f[r + 3 - rungs] = -cauchy_pair(*mu_, *w).g.imag() / std::numbers::pi;
    }
    if (!w) {
      failed = true;
      failed_at = ii;
      continue;
    }
    out[i] = std::max(0.0, richardson(f[0], f[1], f[2]));
  }
  if (failed) {
    fail(ErrorKind::SolverDiverged,
         "eps-ladder failed at x = " + std::to_string(xs[static_cast<std::size_t>(failed_at.load())]));
  }
  return out;
}

Interval Solver::detect_support(double threshold) const {
  const auto b = support_bound();
  std::vector<double> xs(kCoarseScan);
  const double step = (b.hi - b.lo) / static_cast<double>(kCoarseScan - 1);
  for (std::size_t i = 0; i < kCoarseScan; ++i) xs[i] = b.lo + step * static_cast<double>(i);
  const auto f = density(xs);
  const double fmax = *std::max_element(f.begin(), f.end());
  require(fmax > 0.0, ErrorKind::SolverDiverged, "recovered density vanishes");
  const double level = threshold * fmax;
  std::size_t first = 0;
  while (f[first] <= level) ++first;
  std::size_t last = kCoarseScan - 1;
  while (f[last] <= level) --last;

  auto above = [&](double x) { return density(std::span<const double>(&x, 1))[0] > level; };
  auto bisect = [&](double out, double in) {
    for (int it = 0; it < kBisections && std::abs(in - out) > 1e-12 * (1.0 + std::abs(in)); ++it) {
      const double mid = 0.5 * (out + in);
      (above(mid) ? in : out) = mid;
    }
    return 0.5 * (out + in);
  };
  const double lo = first == 0 ? b.lo : bisect(xs[first - 1], xs[first]);
  const double hi = last + 1 == kCoarseScan ? b.hi : bisect(xs[last + 1], xs[last]);
  return {lo, hi};
}

}  // namespace freeconv::subordination
