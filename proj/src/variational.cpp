#include "freeconv/variational.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "freeconv/convolution.hpp"
#include "freeconv/error.hpp"
#include "freeconv/subordination.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFlowInterior = 1e-2;

// Linear interpolation of node values on [lo, hi]; zero outside.
double interp(double lo, double h, std::span<const double> v, double x) {
  const double t = (x - lo) / h;
  if (t < 0.0 || t > static_cast<double>(v.size() - 1)) return 0.0;
  const auto j = std::min(static_cast<std::size_t>(t), v.size() - 2);
  const double a = t - static_cast<double>(j);
  return (1.0 - a) * v[j] + a * v[j + 1];
}

std::vector<double> centered(std::span<const double> v, double h) {
  const std::size_t n = v.size();
  std::vector<double> d(n);
  d[0] = (v[1] - v[0]) / h;
  d[n - 1] = (v[n - 1] - v[n - 2]) / h;
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
  return d;
}

// Second-order difference along a strided line, one-sided at the ends.
double diff(const std::vector<double>& v, std::size_t base, std::size_t stride, std::size_t idx, std::size_t len,
            double h) {
  auto at = [&](std::size_t m) { return v[base + m * stride]; };
  if (idx == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (idx + 1 == len) return (3.0 * at(len - 1) - 4.0 * at(len - 2) + at(len - 3)) / (2.0 * h);
  return (at(idx + 1) - at(idx - 1)) / (2.0 * h);
}

// d/ds at fixed y and d/dy at fixed s of a field stored in (s, u).
void chain(const LambdaField& field, const std::vector<double>& v, std::vector<double>& ds_out,
           std::vector<double>& dy_out) {
  const std::size_t ns = field.ns(), ny = field.ny();
  ds_out.assign(ns * ny, 0.0);
  dy_out.assign(ns * ny, 0.0);
  for (std::size_t i = 0; i < ns; ++i) {
    const double s = field.s_grid[i];
    for (std::size_t j = 0; j < ny; ++j) {
      const double vs = diff(v, j, ny, i, ns, field.ds);
      const double vu = diff(v, i * ny, 1, j, ny, field.du);
      ds_out[i * ny + j] = vs - field.u_grid[j] / s * vu;
      dy_out[i * ny + j] = vu / s;
    }
  }
}

bool interior(const LambdaField& field, std::size_t i, std::size_t j) {
  const double s = field.s_grid[i], u = field.u_grid[j];
  return s >= kBoundaryLayer && s <= 1.0 - kBoundaryLayer && u >= kBoundaryLayer && u <= 1.0 - kBoundaryLayer;
}

void check_connected(const GridMeasure& nu) {
  const auto f = nu.density();
  const double top = nu.max_density();
  std::size_t first = 0, last = f.size() - 1;
  while (first < last && f[first] <= 1e-6 * top) ++first;
  while (last > first && f[last] <= 1e-6 * top) --last;
  for (std::size_t j = first; j <= last; ++j) {
    require(f[j] > 1e-9 * top, ErrorKind::DisconnectedSupport,
            "density vanishes inside the support near x = " + std::to_string(nu.node(j)));
  }
}

GridMeasure slice(const GridMeasure& mu, double s) { return s == 1.0 ? mu : free_power(mu, 1.0 / s); }

}  // namespace

double flow_residual(const GridMeasure& mu, double k, double dk, std::size_t n_out) {
  require(dk > 0.0, ErrorKind::BadArgument, "dk must be > 0");
  require(k - dk >= 1.0, ErrorKind::KLessThanOne, "need k - dk >= 1");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double inner_lo = 0.0, inner_hi = 0.0;
  for (double kk : {k - dk, k, k + dk}) {
    const auto sup = subordination::Solver::power(mu, kk).detect_support(kSupportThreshold);
    lo = std::min(lo, sup.lo / std::sqrt(kk));
    hi = std::max(hi, sup.hi / std::sqrt(kk));
    if (kk == k) {
      const double layer = kBoundaryLayer * (sup.hi - sup.lo) / std::sqrt(k);
      inner_lo = sup.lo / std::sqrt(k) + layer;
      inner_hi = sup.hi / std::sqrt(k) - layer;
    }
  }
  const double pad = 0.02 * (hi - lo);
  PowerOptions opts;
  opts.n_out = n_out ? n_out : mu.n();
  opts.window = std::make_pair(lo - pad, hi + pad);
  const auto below = normalized_free_power(mu, k - dk, opts);
  const auto mid = normalized_free_power(mu, k, opts);
  const auto above = normalized_free_power(mu, k + dk, opts);

  const auto b = hilbert(mid);
  const double h = mid.h();
  const auto df = centered(b.f, h);
  const auto dhf = centered(b.hf, h);
  const auto fm = below.density(), fp = above.density();
  const double cut = kFlowInterior * mid.max_density();
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < mid.n(); ++j) {
    const double x = b.grid[j];
    if (b.f[j] < cut || x < inner_lo || x > inner_hi) continue;
    const double lhs = k * (fp[j] - fm[j]) / (2.0 * dk) + 0.5 * x * df[j];
    const double r2 = b.hf[j] * b.hf[j] + b.f[j] * b.f[j];
    const double rhs = (b.hf[j] * df[j] - b.f[j] * dhf[j]) / (kPi * r2) + 0.5 * b.f[j];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

LambdaField lambda_field(const GridMeasure& mu, std::size_t ns, std::size_t ny) {
  require(ns >= 16 && ny >= 16, ErrorKind::BadArgument, "lambda field needs ns, ny >= 16");
  LambdaField field;
  field.ds = 1.0 / static_cast<double>(ns);
  field.du = 1.0 / static_cast<double>(ny);
  for (std::size_t i = 1; i <= ns; ++i) field.s_grid.push_back(static_cast<double>(i) * field.ds);
  for (std::size_t j = 0; j < ny; ++j) field.u_grid.push_back((static_cast<double>(j) + 0.5) * field.du);
  field.lambda.resize(ns * ny);
  for (std::size_t i = 0; i < ns; ++i) {
    const double s = field.s_grid[i];
    auto nu = slice(mu, s);
    check_connected(nu);
    for (std::size_t j = 0; j < ny; ++j) field.lambda[i * ny + j] = s * quantile(nu, field.u_grid[j]);
    field.slices.push_back(std::move(nu));
  }
  return field;
}

LambdaGradient lambda_gradient(const LambdaField& field) {
  LambdaGradient g;
  chain(field, field.lambda, g.ls, g.ly);
  return g;
}

double lagrangian_density(double lambda_s, double lambda_y) {
  require(lambda_y > 0.0, ErrorKind::NonPositiveLambdaY, "lambda_y must be > 0");
  const double r = lambda_s / lambda_y;
  require(r != std::round(r), ErrorKind::ConeBoundary, "lambda_s / lambda_y is on the cone boundary");
  return std::log(lambda_y) + std::log(std::abs(std::sin(kPi * r)));
}

double lagrangian_ds(double lambda_s, double lambda_y) {
  require(lambda_y > 0.0, ErrorKind::NonPositiveLambdaY, "lambda_y must be > 0");
  const double r = lambda_s / lambda_y;
  require(r != std::round(r), ErrorKind::ConeBoundary, "lambda_s / lambda_y is on the cone boundary");
  return kPi / lambda_y * std::cos(kPi * r) / std::sin(kPi * r);
}

double lagrangian_dy(double lambda_s, double lambda_y) {
  return 1.0 / lambda_y - lambda_s / lambda_y * lagrangian_ds(lambda_s, lambda_y);
}

std::vector<double> euler_lagrange_residual(const LambdaField& field) {
  const auto g = lambda_gradient(field);
  const std::size_t m = field.lambda.size();
  std::vector<double> p(m), q(m);
  for (std::size_t t = 0; t < m; ++t) {
    p[t] = lagrangian_ds(g.ls[t], g.ly[t]);
    q[t] = lagrangian_dy(g.ls[t], g.ly[t]);
  }
  std::vector<double> ps, py, qs, qy;
  chain(field, p, ps, py);
  chain(field, q, qs, qy);
  std::vector<double> out(m, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < field.ns(); ++i) {
    for (std::size_t j = 0; j < field.ny(); ++j) {
      if (interior(field, i, j)) out[i * field.ny() + j] = ps[i * field.ny() + j] + qy[i * field.ny() + j];
    }
  }
  return out;
}

double max_interior(const std::vector<double>& residual) {
  double worst = 0.0;
  for (double r : residual) {
    if (!std::isnan(r)) worst = std::max(worst, std::abs(r));
  }
  return worst;
}

InterlacingReport interlacing_check(const LambdaField& field, const LambdaGradient& grad) {
  InterlacingReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.worst_reflected_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < field.ns(); ++i) {
    for (std::size_t j = 0; j < field.ny(); ++j) {
      if (!interior(field, i, j)) continue;
      const std::size_t t = i * field.ny() + j;
      const double ls = grad.ls[t], ly = grad.ly[t];
      ++rep.interior_nodes;
      const double margin = std::min(ls, ly - ls);
      if (margin < -kInterlacingTol) ++rep.violations;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_s = field.s_grid[i];
        rep.worst_y = field.y(i, j);
      }
      const double reflected = std::min(-ls, ly + ls);
      if (reflected < -kInterlacingTol) ++rep.reflected_violations;
      rep.worst_reflected_margin = std::min(rep.worst_reflected_margin, reflected);
    }
  }
  return rep;
}

InterlacingReport interlacing_check(const LambdaField& field) {
  return interlacing_check(field, lambda_gradient(field));
}

GtConsistency gt_consistency(const LambdaField& field, const GridMeasure& mu) {
  const auto g = lambda_gradient(field);
  GtConsistency out;
  for (std::size_t i = 0; i < field.ns(); ++i) {
    const double s = field.s_grid[i];
    bool any = false;
    for (std::size_t j = 0; j < field.ny(); ++j) any = any || interior(field, i, j);
    if (!any) continue;
    const GridMeasure nu = i < field.slices.size() ? field.slices[i] : slice(mu, s);
    const auto b = hilbert(nu);
    for (std::size_t j = 0; j < field.ny(); ++j) {
      if (!interior(field, i, j)) continue;
      const std::size_t t = i * field.ny() + j;
      const double x = field.lambda[t] / s;
      const double f = interp(nu.lo(), nu.h(), b.f, x);
      const double hf = interp(nu.lo(), nu.h(), b.hf, x);
      const double r = kPi * g.ls[t] / g.ly[t];
      out.r1 = std::max(out.r1, std::abs(f * g.ly[t] - 1.0));
      out.r2 = std::max(out.r2, std::abs(hf * g.ly[t] - std::cos(r) / std::sin(r)));
    }
  }
  return out;
}

void write_lambda_csv(const LambdaField& field, const std::filesystem::path& path) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::InvalidInput, "cannot write " + path.string());
  os.precision(12);
  os << "s,y,lambda\n";
  for (std::size_t i = 0; i < field.ns(); ++i) {
    for (std::size_t j = 0; j < field.ny(); ++j) os << field.s_grid[i] << ',' << field.y(i, j) << ',' << field.at(i, j) << '\n';
  }
}

void write_residual_csv(const LambdaField& field, const std::vector<double>& residual,
                        const std::filesystem::path& path) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::InvalidInput, "cannot write " + path.string());
  os.precision(12);
  os << "s,y,residual\n";
  for (std::size_t i = 0; i < field.ns(); ++i) {
    for (std::size_t j = 0; j < field.ny(); ++j) {
      const double r = residual[i * field.ny() + j];
      if (!std::isnan(r)) os << field.s_grid[i] << ',' << field.y(i, j) << ',' << r << '\n';
    }
  }
}

}  // namespace freeconv
