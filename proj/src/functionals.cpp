#include "freeconv/functionals.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "freeconv/convolution.hpp"
#include "freeconv/error.hpp"
#include "freeconv/kernels.hpp"
#include "freeconv/subordination.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> centered_derivative(std::span<const double> v, double h) {
  const std::size_t n = v.size();
  std::vector<double> d(n);
  d[0] = (v[1] - v[0]) / h;
  d[n - 1] = (v[n - 1] - v[n - 2]) / h;
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
  return d;
}

double cube_integral(const GridMeasure& mu) {
  std::vector<double> f3(mu.n());
  const auto f = mu.density();
  for (std::size_t j = 0; j < mu.n(); ++j) f3[j] = f[j] * f[j] * f[j];
  return trapezoid(f3, mu.h());
}

struct Simpson {
  const std::function<double(double)>& g;
  double tol;

  double panel(double a, double b, double fa, double fm, double fb, double whole, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = g(lm);
    const double frm = g(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return panel(a, m, fa, flm, fm, left, depth - 1) + panel(m, b, fm, frm, fb, right, depth - 1);
  }
};

}  // namespace

double fisher_information(const GridMeasure& mu) { return 4.0 * kPi * kPi / 3.0 * cube_integral(mu); }

double fisher_via_score(const GridMeasure& mu, double interior) {
  require(interior > 0.0 && interior <= 1.0, ErrorKind::BadArgument, "interior fraction must be in (0,1]");
  const auto b = hilbert(mu);
  const double mid = 0.5 * (mu.lo() + mu.hi());
  const double half = 0.5 * interior * (mu.hi() - mu.lo()) * (1.0 + 1e-12);
  std::vector<double> v(mu.n(), 0.0);
  for (std::size_t j = 0; j < mu.n(); ++j) {
    if (std::abs(b.grid[j] - mid) <= half) v[j] = b.f[j] * b.hf[j] * b.hf[j];
  }
  return 4.0 * kPi * kPi * trapezoid(v, mu.h());
}

std::vector<double> score(const GridMeasure& mu) {
  auto j = hilbert(mu).hf;
  for (double& v : j) v *= 2.0 * kPi;
  return j;
}

double free_entropy(const GridMeasure& mu) {
  const auto u = kernels::omp::log_potential(mu.lo(), mu.h(), mu.density(), mu.nodes());
  const auto f = mu.density();
  std::vector<double> fu(mu.n());
  for (std::size_t j = 0; j < mu.n(); ++j) fu[j] = f[j] * u[j];
  return trapezoid(fu, mu.h()) + 0.75 + 0.5 * std::log(2.0 * kPi);
}

double entropy_via_flow(const GridMeasure& mu, double t_max, int steps) {
  require(t_max >= 50.0, ErrorKind::BadArgument, "t_max must be >= 50");
  require(steps >= 1, ErrorKind::BadArgument, "need at least one panel");
  // In u = log(1 + t) the integrand (1/(1+t) - Phi) dt becomes 1 - (1+t) Phi.
  const std::function<double(double)> g = [&](double u) {
    const double t = std::expm1(u);
    const double phi = t == 0.0 ? fisher_information(mu) : fisher_information(semicircular_flow(mu, t));
    return 1.0 - (1.0 + t) * phi;
  };
  const double umax = std::log1p(t_max);
  const Simpson simpson{g, 1e-5 / steps};
  double sum = 0.0;
  const double w = umax / steps;
  double fa = g(0.0);
  for (int i = 0; i < steps; ++i) {
    const double a = w * i;
    const double b = w * (i + 1);
    const double fm = g(0.5 * (a + b));
    const double fb = g(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    sum += simpson.panel(a, b, fa, fm, fb, whole, 4);
    fa = fb;
  }
  const double k2 = variance(mu);
  const double tail = std::log((k2 + t_max) / (1.0 + t_max));
  return 0.5 * (sum + tail) + 0.5 * std::log(2.0 * kPi * std::numbers::e);
}

ScanTable monotonicity_scan(const GridMeasure& mu, std::span<const double> k_grid) {
  require(!k_grid.empty() && k_grid.front() == 1.0, ErrorKind::BadArgument, "k grid must start at 1");
  for (std::size_t i = 1; i < k_grid.size(); ++i) {
    require(k_grid[i] > k_grid[i - 1], ErrorKind::BadArgument, "k grid must be strictly ascending");
  }
  ScanTable table;
  for (double k : k_grid) {
    // Phi and chi of the dilation follow from those of the power itself.
    const auto p = free_power(mu, k);
    table.rows.push_back({k, k * fisher_information(p), free_entropy(p) - 0.5 * std::log(k)});
  }
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    table.phi_increase = std::max(table.phi_increase, table.rows[i].phi - table.rows[i - 1].phi);
    table.chi_decrease = std::max(table.chi_decrease, table.rows[i - 1].chi - table.rows[i].chi);
  }
  return table;
}

void write_scan_csv(const ScanTable& table, std::ostream& out) {
  out << "k,phi,chi\n" << std::setprecision(17);
  for (const auto& r : table.rows) out << r.k << ',' << r.phi << ',' << r.chi << '\n';
}

void write_scan_csv(const ScanTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::InvalidInput, "cannot write " + path.string());
  write_scan_csv(table, out);
}

double dphi_dk_formula(const GridMeasure& mu) {
  const auto b = hilbert(mu);
  const double h = mu.h();
  const auto df = centered_derivative(b.f, h);
  const auto dhf = centered_derivative(b.hf, h);
  std::vector<double> v(mu.n(), 0.0);
  for (std::size_t j = 0; j < mu.n(); ++j) {
    const double r2 = b.hf[j] * b.hf[j] + b.f[j] * b.f[j];
    if (r2 > 0.0) v[j] = (b.hf[j] * df[j] - b.f[j] * dhf[j]) * b.f[j] * b.f[j] / r2;
  }
  return 8.0 * kPi * kPi / 3.0 * cube_integral(mu) + 4.0 * kPi * trapezoid(v, h);
}

DerivativePair dphi_dk_at_one(const GridMeasure& mu, bool fixed_window) {
  // k < 1 is outside the domain, so the difference is one-sided (second
  // order), then Richardson over two steps.
  constexpr double kStep = 0.02;
  PowerOptions opts;
  if (fixed_window) {
    const auto bound = subordination::Solver::power(mu, 1.0 + 4.0 * kStep).support_bound();
    opts.window = std::make_pair(bound.lo, bound.hi);
  }
  auto phi = [&](double k) { return k * fisher_information(free_power(mu, k, opts)); };
  const double p0 = phi(1.0);
  const double p1 = phi(1.0 + kStep);
  const double p2 = phi(1.0 + 2.0 * kStep);
  const double p4 = phi(1.0 + 4.0 * kStep);
  const double fine = (-3.0 * p0 + 4.0 * p1 - p2) / (2.0 * kStep);
  const double coarse = (-3.0 * p0 + 4.0 * p2 - p4) / (4.0 * kStep);
  return {(4.0 * fine - coarse) / 3.0, dphi_dk_formula(mu)};
}

}  // namespace freeconv
