#include "freeconv/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "freeconv/error.hpp"

namespace freeconv {

namespace {

constexpr double kPi = std::numbers::pi;

// [s^r] of (1 + m_1 s + m_2 s^2 + ...)^j, in extended precision: the
// recursion cancels heavily once moments grow.
long double power_coefficient(std::span<const long double> m, std::size_t j, std::size_t r) {
  std::vector<long double> base(r + 1, 0.0L), acc(r + 1, 0.0L), next(r + 1);
  base[0] = 1.0L;
  for (std::size_t i = 1; i <= r && i <= m.size(); ++i) base[i] = m[i - 1];
  acc[0] = 1.0L;
  for (std::size_t p = 0; p < j; ++p) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t a = 0; a <= r; ++a) {
      if (acc[a] == 0.0L) continue;
      for (std::size_t b = 0; a + b <= r; ++b) next[a + b] += acc[a] * base[b];
    }
    acc.swap(next);
  }
  return acc[r];
}

// Trapezoid plus the leading correction for p sqrt(t) behaviour at either
// end, -zeta(-1/2) p h^{3/2}, with p fitted as in hilbert_values.
double trapezoid_sqrt_ends(std::span<const double> v, double h) {
  const std::size_t n = v.size();
  constexpr double kZetaMinusHalf = -0.207886224977354566;
  const double fit = std::sqrt(h) * (std::numbers::sqrt2 - 2.0);
  const double pa = ((v[2] - v[0]) - 2.0 * (v[1] - v[0])) / fit;
  const double pb = ((v[n - 3] - v[n - 1]) - 2.0 * (v[n - 2] - v[n - 1])) / fit;
  return trapezoid(v, h) - kZetaMinusHalf * (pa + pb) * h * std::sqrt(h);
}

}  // namespace

kernels::CauchyPair cauchy_pair(const GridMeasure& mu, cplx z) {
  if (z.imag() < 0.0) {
    const auto p = kernels::cauchy_linear(mu.lo(), mu.h(), mu.density(), std::conj(z));
    return {std::conj(p.g), std::conj(p.dg)};
  }
  return kernels::cauchy_linear(mu.lo(), mu.h(), mu.density(), z);
}

cplx cauchy_transform(const GridMeasure& mu, cplx z) {
  if (z.imag() == 0.0) {
    const double x = z.real();
    const double h = mu.h();
    require(x < mu.lo() - h || x > mu.hi() + h, ErrorKind::TooCloseToSupport,
            "real z = " + std::to_string(x) + " is within one grid spacing of the support");
  }
  return cauchy_pair(mu, z).g;
}

std::vector<double> hilbert_values(double lo, double hi, std::span<const double> values) {
  const std::size_t n = values.size();
  require(n >= kMinHilbertPoints, ErrorKind::GridTooSmall,
          "Hilbert transform needs at least 64 nodes, got " + std::to_string(n));
  const double h = (hi - lo) / static_cast<double>(n - 1);
  const double fa = values.front();
  const double fb = values.back();
  const double slope = (fb - fa) / (hi - lo);
  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j) r[j] = values[j] - (fa + slope * h * static_cast<double>(j));
  // Square-root endpoint terms p sqrt(t) fitted from r = p sqrt(t) + q t at
  // the first two interior nodes, removed through sqrt((x-a)(b-x))(alpha + beta y)
  // whose transform is alpha y + beta (y^2 - R^2/2), y = x - mid, R = L/2.
  const double len = hi - lo;
  const double fit = std::sqrt(h) * (std::numbers::sqrt2 - 2.0);
  const double pa = (r[2] - 2.0 * r[1]) / fit;
  const double pb = (r[n - 3] - 2.0 * r[n - 2]) / fit;
  const double alpha = (pa + pb) / (2.0 * std::sqrt(len));
  const double beta = (pb - pa) / (len * std::sqrt(len));
  const double mid = 0.5 * (lo + hi);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double x = lo + h * static_cast<double>(j);
    r[j] -= std::sqrt((x - lo) * (hi - x)) * (alpha + beta * (x - mid));
  }
  auto out = kernels::omp::hilbert_midpoint(r);
  const double end_log = std::log(0.5 * h) - 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = lo + h * static_cast<double>(j);
    const double ell = fa + slope * (y - lo);
    const double la = j == 0 ? end_log : std::log(y - lo);
    const double lb = j + 1 == n ? end_log : std::log(hi - y);
    out[j] += (ell * (la - lb) - slope * len) / kPi;
    const double c = y - mid;
    out[j] += alpha * c + beta * (c * c - 0.125 * len * len);
  }
  return out;
}

BoundaryField hilbert(const GridMeasure& mu) {
  BoundaryField field;
  field.grid.assign(mu.nodes().begin(), mu.nodes().end());
  field.f.assign(mu.density().begin(), mu.density().end());
  field.hf = hilbert_values(mu.lo(), mu.hi(), field.f);
  return field;
}

std::vector<cplx> plemelj_boundary(const GridMeasure& mu, double eps) {
  require(eps > 0.0, ErrorKind::NonPositiveEps, "Plemelj offset must be > 0");
  std::vector<cplx> out(mu.n());
  const auto n = static_cast<std::ptrdiff_t>(mu.n());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    out[k] = cauchy_pair(mu, cplx(mu.node(k), eps)).g;
  }
  return out;
}

CumulantSeries moments_to_cumulants(std::span<const double> m) {
  require(m.size() >= 2, ErrorKind::TooFewMoments, "need at least two moments");
  const std::vector<long double> ml(m.begin(), m.end());
  std::vector<long double> k(m.size());
  for (std::size_t n = 1; n <= m.size(); ++n) {
    long double rest = 0.0L;
    for (std::size_t j = 1; j < n; ++j) rest += k[j - 1] * power_coefficient(ml, j, n - j);
    k[n - 1] = ml[n - 1] - rest;
  }
  return CumulantSeries{std::vector<double>(k.begin(), k.end())};
}

std::vector<double> cumulants_to_moments(const CumulantSeries& k) {
  std::vector<long double> m;
  m.reserve(k.order());
  for (std::size_t n = 1; n <= k.order(); ++n) {
    long double acc = k[n];
    for (std::size_t j = 1; j < n; ++j) acc += k[j] * power_coefficient(m, j, n - j);
    m.push_back(acc);
  }
  return {m.begin(), m.end()};
}

CumulantSeries free_cumulants(const GridMeasure& mu, std::size_t order) {
  return moments_to_cumulants(moments(mu, order));
}

cplx r_transform(const CumulantSeries& k, cplx s) {
  require(k.order() >= 1, ErrorKind::TooFewMoments, "empty cumulant series");
  cplx sum(0.0, 0.0), power(1.0, 0.0), last(0.0, 0.0);
  for (std::size_t n = 0; n < k.order(); ++n) {
    last = k.kappa[n] * power;
    sum += last;
    power *= s;
  }
  require(std::abs(last) <= 1e-12 * std::abs(sum), ErrorKind::SeriesNotConverged,
          "R-series tail " + std::to_string(std::abs(last)) + " too large at |s| = " +
              std::to_string(std::abs(s)));
  return sum;
}

HilbertIdentities hilbert_identities(const GridMeasure& mu, double interior) {
  require(interior > 0.0 && interior <= 1.0, ErrorKind::BadArgument, "interior fraction must be in (0, 1]");
  const auto b = hilbert(mu);
  const double h = mu.h();
  const std::size_t n = mu.n();
  std::vector<double> fh(n), fh_abs(n), fhh(n), f3(n);
  for (std::size_t j = 0; j < n; ++j) {
    fh[j] = b.f[j] * b.hf[j];
    fh_abs[j] = std::abs(fh[j]);
    fhh[j] = fh[j] * b.hf[j];
    f3[j] = b.f[j] * b.f[j] * b.f[j];
  }
  HilbertIdentities out;
  out.first = std::abs(trapezoid_sqrt_ends(fh, h)) / trapezoid(fh_abs, h);
  const double third_f3 = trapezoid_sqrt_ends(f3, h) / 3.0;
  out.second = std::abs(trapezoid_sqrt_ends(fhh, h) - third_f3) / third_f3;
  const auto hfh = hilbert_values(mu.lo(), mu.hi(), fh);
  const double mid = 0.5 * (mu.lo() + mu.hi());
  const double half = 0.5 * interior * (mu.hi() - mu.lo());
  double worst = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(b.grid[j] - mid) > half) continue;
    const double rhs = 0.5 * (b.hf[j] * b.hf[j] - b.f[j] * b.f[j]);
    worst = std::max(worst, std::abs(hfh[j] - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  out.third = worst / scale;
  return out;
}

void write_boundary_csv(const BoundaryField& field, std::ostream& out) {
  out << "x,f,hf\n" << std::setprecision(17);
  for (std::size_t j = 0; j < field.grid.size(); ++j) {
    out << field.grid[j] << ',' << field.f[j] << ',' << field.hf[j] << '\n';
  }
}

void write_boundary_csv(const BoundaryField& field, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::InvalidInput, "cannot write " + path.string());
  write_boundary_csv(field, out);
}

}  // namespace freeconv
