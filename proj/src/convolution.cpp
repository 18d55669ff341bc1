#include "freeconv/convolution.hpp"

#include <cmath>

#include "freeconv/error.hpp"
#include "freeconv/subordination.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> xs(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) xs[j] = lo + h * static_cast<double>(j);
  xs[n - 1] = hi;
  return xs;
}

// At a jump the eps-regularized density converges to the mean of the
// one-sided limits, i.e. half the jump when the outside is empty. Replace
// such an end value by the linear extrapolation from inside.
void restore_edge_jump(std::vector<double>& f, std::size_t end, std::size_t in1, std::size_t in2) {
  const double inside = 2.0 * f[in1] - f[in2];
  if (inside > 0.0 && std::abs(2.0 * f[end] - inside) <= 0.1 * inside) f[end] = inside;
}

GridMeasure solve_on_window(const subordination::Solver& solver, const GridMeasure& mu,
                            const PowerOptions& opts) {
  double lo, hi;
  if (opts.window) {
    std::tie(lo, hi) = *opts.window;
  } else {
    const auto s = solver.detect_support(opts.support_threshold);
    lo = s.lo;
    hi = s.hi;
  }
  const std::size_t n = opts.n_out ? opts.n_out : mu.n();
  require(n >= kMinGridPoints, ErrorKind::GridTooSmall, "output grid too small");
  auto f = solver.density(linspace(lo, hi, n));
  restore_edge_jump(f, 0, 1, 2);
  restore_edge_jump(f, n - 1, n - 2, n - 3);
  return make_grid_measure(lo, hi, std::move(f));
}

}  // namespace

GridMeasure free_power(const GridMeasure& mu, double k, const PowerOptions& opts) {
  return solve_on_window(subordination::Solver::power(mu, k), mu, opts);
}

std::vector<double> free_power_density_at(const GridMeasure& mu, double k, std::span<const double> xs) {
  return subordination::Solver::power(mu, k).density(xs);
}

std::complex<double> free_power_cauchy(const GridMeasure& mu, double k, std::complex<double> z) {
  return subordination::Solver::power(mu, k).cauchy(z);
}

std::vector<double> free_power_moments(const GridMeasure& mu, double k, std::size_t order) {
  require(k >= 1.0, ErrorKind::KLessThanOne, "free power needs k >= 1");
  require(order >= 2, ErrorKind::TooFewMoments, "need order >= 2");
  require(order <= kDefaultCumulantOrder, ErrorKind::BadArgument, "order must be <= 16");
  auto kappa = free_cumulants(mu, order);
  for (double& c : kappa.kappa) c *= k;
  return cumulants_to_moments(kappa);
}

GridMeasure normalized_free_power(const GridMeasure& mu, double k, const PowerOptions& opts) {
  const double s = std::sqrt(k);
  PowerOptions scaled = opts;
  if (opts.window) scaled.window = std::make_pair(opts.window->first * s, opts.window->second * s);
  return dilate(free_power(mu, k, scaled), 1.0 / s);
}

GridMeasure semicircular_flow(const GridMeasure& mu, double t, const PowerOptions& opts) {
  require(t >= 0.0, ErrorKind::BadArgument, "flow time must be >= 0");
  if (t == 0.0 && !opts.window && opts.n_out == 0) return mu;
  if (t == 0.0) {
    const auto w = opts.window.value_or(std::make_pair(mu.lo(), mu.hi()));
    return regrid(mu, w.first, w.second, opts.n_out ? opts.n_out : mu.n());
  }
  return solve_on_window(subordination::Solver::flow(mu, t), mu, opts);
}

double burgers_residual(const GridMeasure& mu, double k, double dk, double eps) {
  require(dk > 0.0, ErrorKind::BadArgument, "dk must be > 0");
  require(eps > 0.0, ErrorKind::NonPositiveEps, "eps must be > 0");
  require(k - dk >= 1.0, ErrorKind::KLessThanOne, "need k - dk >= 1");
  const auto mid = subordination::Solver::power(mu, k);
  const auto below = subordination::Solver::power(mu, k - dk);
  const auto above = subordination::Solver::power(mu, k + dk);
  const auto support = mid.detect_support(kSupportThreshold);
  const double pad = 0.1 * (support.hi - support.lo);
  const auto xs = linspace(support.lo + pad, support.hi - pad, 41);
  const double dz = 1e-2 * eps;
  double worst = 0.0;
  for (double x : xs) {
    const std::complex<double> z(x, eps);
    const auto g = mid.cauchy(z);
    const auto gz = (mid.cauchy(z + dz) - mid.cauchy(z - dz)) / (2.0 * dz);
    const auto gk = (above.cauchy(z) - below.cauchy(z)) / (2.0 * dk);
    worst = std::max(worst, std::abs(k * gk + z * gz - gz / g));
  }
  return worst;
}

}  // namespace freeconv
