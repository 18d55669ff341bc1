#include "freeconv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace freeconv::kernels {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kNearCells = 16;

// Principal log with the boundary value from above on the negative axis.
inline cplx log_above(cplx d) {
  if (d.imag() == 0.0) d = cplx(d.real(), 0.0);
  return std::log(d);
}

inline double xlogx_abs(double u) { return u == 0.0 ? 0.0 : u * std::log(std::abs(u)); }

inline double potential_at(double lo, double h, std::span<const double> f,
                           std::span<const double> c, double t) {
  const std::size_t n = f.size();
  auto p = [](double u) { return xlogx_abs(u) - u; };
  auto q = [](double u) { return 0.5 * u * xlogx_abs(u) - 0.75 * u * u; };
  double acc = f[n - 1] * p(lo + h * static_cast<double>(n - 1) - t) - f[0] * p(lo - t);
  for (std::size_t j = 0; j < n; ++j) {
    if (c[j] != 0.0) acc += c[j] * q(lo + h * static_cast<double>(j) - t);
  }
  return acc;
}

inline double convolve_at(double lo, double h, std::span<const double> f, std::span<const double> c,
                          double eps, double t) {
  const std::size_t n = f.size();
  auto p = [eps](double u) { return std::atan(u / eps) / kPi; };
  auto q = [eps](double u) { return (u * std::atan(u / eps) - 0.5 * eps * std::log(u * u + eps * eps)) / kPi; };
  double acc = f[n - 1] * p(lo + h * static_cast<double>(n - 1) - t) - f[0] * p(lo - t);
  for (std::size_t j = 0; j < n; ++j) {
    if (c[j] != 0.0) acc += c[j] * q(lo + h * static_cast<double>(j) - t);
  }
  return acc;
}

inline double hilbert_at(std::span<const double> f, std::size_t i) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  const auto ii = static_cast<std::ptrdiff_t>(i);
  double acc = 0.0;
  for (std::ptrdiff_t j = (ii % 2 == 0) ? 1 : 0; j < n; j += 2) {
    acc += f[static_cast<std::size_t>(j)] / static_cast<double>(ii - j);
  }
  return 2.0 * acc / kPi;
}

struct RowSums {
  cplx s2{0.0, 0.0};
  cplx s1{0.0, 0.0};
  cplx s0{0.0, 0.0};
};

// Row i of the quadruple sum, with alpha = +1 fixed; the alpha = -1 half is
// the complex conjugate.
inline RowSums quadruple_row(std::span<const double> x, std::span<const double> q,
                             std::span<const cplx> g, std::span<const cplx> dg, double eps,
                             std::size_t i) {
  RowSums r;
  const cplx z(x[i], eps);
  const cplx gz = g[i];
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (q[j] == 0.0) continue;
    for (int beta = -1; beta <= 1; beta += 2) {
      const cplx w(x[j], beta * eps);
      const cplx gw = beta > 0 ? g[j] : std::conj(g[j]);
      cplx d;
      if (i == j && beta > 0) {
        d = dg[i];
      } else {
        d = (gz - gw) / (z - w);
      }
      const cplx prod = gz * gw;
      r.s2 += q[j] * (d * d / prod);
      r.s1 += q[j] * d;
      r.s0 += q[j] * prod;
    }
  }
  r.s2 *= q[i];
  r.s1 *= q[i];
  r.s0 *= q[i];
  return r;
}

}  // namespace

CauchyPair cauchy_trapezoid(std::span<const double> x, std::span<const double> wf, cplx z) {
  const double zr = z.real();
  const double zi = z.imag();
  double gr = 0.0, gi = 0.0, dr = 0.0, di = 0.0;
  const std::size_t n = x.size();
#pragma omp simd reduction(+ : gr, gi, dr, di)
  for (std::size_t j = 0; j < n; ++j) {
    const double a = zr - x[j];
    const double den = a * a + zi * zi;
    const double ir = a / den;
    const double ii = -zi / den;
    gr += wf[j] * ir;
    gi += wf[j] * ii;
    dr -= wf[j] * (ir * ir - ii * ii);
    di -= wf[j] * (2.0 * ir * ii);
  }
  return {cplx(gr, gi), cplx(dr, di)};
}

std::vector<double> slope_jumps(double h, std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> c(n, 0.0);
  if (n < 2) return c;
  double prev = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double s = (f[j + 1] - f[j]) / h;
    c[j] = s - prev;
    prev = s;
  }
  c[n - 1] = -prev;
  return c;
}

CauchyPair cauchy_linear_direct(double lo, double h, std::span<const double> f, cplx z) {
  const auto c = slope_jumps(h, f);
  const std::size_t n = f.size();
  if (z.imag() == 0.0) z = cplx(z.real(), 0.0);
  cplx g(0.0, 0.0), dg(0.0, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx d = z - (lo + h * static_cast<double>(j));
    if (c[j] != 0.0 && d != cplx(0.0, 0.0)) {
      const cplx ld = log_above(d);
      g += c[j] * d * (ld - 1.0);
      dg += c[j] * ld;
    }
  }
  const cplx d0 = z - lo;
  const cplx dn = z - (lo + h * static_cast<double>(n - 1));
  if (f[n - 1] != 0.0) {
    g -= f[n - 1] * log_above(dn);
    dg -= f[n - 1] / dn;
  }
  if (f[0] != 0.0) {
    g += f[0] * log_above(d0);
    dg += f[0] / d0;
  }
  return {g, dg};
}

namespace {

// Interior hats j0 <= j < j1, all with |z - x_j| >= kNearCells * h:
//   hat = r (1 + r^2/6 + r^4/15 + r^6/28 + r^8/45),
//   hat' = -(r^2/h) (1 + r^2/2 + r^4/3 + r^6/4 + r^8/5),  r = h / (z - x_j).
// With Terms = 3 the r^6 and r^8 terms are dropped, which is below rounding
// beyond 4 * kNearCells cells.
template <int Terms>
void far_hats_range(double lo, double h, const double* fp, double zr, double zi, std::ptrdiff_t j0,
                    std::ptrdiff_t j1, double acc[4]) {
  if (j0 >= j1) return;
  double gr = 0.0, gi = 0.0, dr = 0.0, di = 0.0;
  const double* fs = fp + j0;
  const double a0 = zr - (lo + h * static_cast<double>(j0));
  const int count = static_cast<int>(j1 - j0);
#pragma omp simd reduction(+ : gr, gi, dr, di)
  for (int i = 0; i < count; ++i) {
    const double a = a0 - h * i;
    const double inv = h / (a * a + zi * zi);
    const double rr = a * inv;
    const double ri = -zi * inv;
    const double qr = rr * rr - ri * ri;
    const double qi = 2.0 * rr * ri;
    double sr, si, tr, ti;
    if constexpr (Terms == 3) {
      sr = 1.0 / 15.0 * qr + 1.0 / 6.0;
      si = 1.0 / 15.0 * qi;
      tr = 1.0 / 3.0 * qr + 0.5;
      ti = 1.0 / 3.0 * qi;
    } else {
      sr = 1.0 / 45.0 * qr + 1.0 / 28.0;
      si = 1.0 / 45.0 * qi;
      tr = 0.2 * qr + 0.25;
      ti = 0.2 * qi;
      double xr = sr * qr - si * qi + 1.0 / 15.0;
      double xi = sr * qi + si * qr;
      sr = xr * qr - xi * qi + 1.0 / 6.0;
      si = xr * qi + xi * qr;
      xr = tr * qr - ti * qi + 1.0 / 3.0;
      xi = tr * qi + ti * qr;
      tr = xr * qr - xi * qi + 0.5;
      ti = xr * qi + xi * qr;
    }
    const double s_r = 1.0 + sr * qr - si * qi;
    const double s_i = sr * qi + si * qr;
    const double t_r = 1.0 + tr * qr - ti * qi;
    const double t_i = tr * qi + ti * qr;
    const double fj = fs[i];
    gr += fj * (rr * s_r - ri * s_i);
    gi += fj * (rr * s_i + ri * s_r);
    dr -= fj * (qr * t_r - qi * t_i);
    di -= fj * (qr * t_i + qi * t_r);
  }
  acc[0] += gr;
  acc[1] += gi;
  acc[2] += dr;
  acc[3] += di;
}

void far_hats(double lo, double h, std::span<const double> f, cplx z, std::ptrdiff_t j0,
              std::ptrdiff_t j1, cplx& g, cplx& dg) {
  if (j0 >= j1) return;
  const double zr = z.real();
  const double zi = z.imag();
  const double wide = 4.0 * kNearCells * h;
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  // Nodes closer than `wide` to z form one index window [k0, k1).
  std::ptrdiff_t k0 = j0, k1 = j0;
  if (std::abs(zi) < wide) {
    const double a = std::sqrt(wide * wide - zi * zi) / h;
    const double t = (zr - lo) / h;
    k0 = std::clamp(static_cast<std::ptrdiff_t>(std::floor(t - a)), j0, j1);
    k1 = std::clamp(static_cast<std::ptrdiff_t>(std::ceil(t + a)) + 1, k0, j1);
  }
  far_hats_range<3>(lo, h, f.data(), zr, zi, j0, k0, acc);
  far_hats_range<5>(lo, h, f.data(), zr, zi, k0, k1, acc);
  far_hats_range<3>(lo, h, f.data(), zr, zi, k1, j1, acc);
  g += cplx(acc[0], acc[1]);
  dg += cplx(acc[2], acc[3]) / h;
}

}  // namespace

CauchyPair cauchy_linear(double lo, double h, std::span<const double> f, cplx z) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  if (z.imag() == 0.0) z = cplx(z.real(), 0.0);
  const double radius = kNearCells * h;

  // Hats whose node lies within `radius` of z, in closed form.
  std::ptrdiff_t jlo = 0, jhi = -1;
  if (std::abs(z.imag()) < radius) {
    const double a = std::sqrt(radius * radius - z.imag() * z.imag());
    const double t = (z.real() - lo) / h;
    jlo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil(t - a / h)));
    jhi = std::min<std::ptrdiff_t>(n - 1, static_cast<std::ptrdiff_t>(std::floor(t + a / h)));
  }

  cplx g(0.0, 0.0), dg(0.0, 0.0);
  if (jlo <= jhi) {
    const std::ptrdiff_t ilo = std::max<std::ptrdiff_t>(0, jlo - 1);
    const std::ptrdiff_t ihi = std::min<std::ptrdiff_t>(n - 1, jhi + 1);
    cplx m_buf[2 * kNearCells + 4];
    cplx l_buf[2 * kNearCells + 4];
    for (std::ptrdiff_t i = ilo; i <= ihi; ++i) {
      const cplx d = z - (lo + h * static_cast<double>(i));
      const bool zero = d == cplx(0.0, 0.0);
      // At a node only the finite part of the log is kept; the divergent part
      // has coefficient equal to the slope jump there.
      l_buf[i - ilo] = zero ? cplx(0.0, 0.0) : log_above(d);
      m_buf[i - ilo] = zero ? cplx(0.0, 0.0) : d * (l_buf[i - ilo] - 1.0);
    }
    auto m = [&](std::ptrdiff_t i) { return m_buf[i - ilo]; };
    auto l = [&](std::ptrdiff_t i) { return l_buf[i - ilo]; };
    for (std::ptrdiff_t j = jlo; j <= jhi; ++j) {
      const double fj = f[static_cast<std::size_t>(j)];
      if (fj == 0.0) continue;
      cplx hat, dhat;
      if (j == 0) {
        hat = (m(1) - m(0)) / h + l(0);
        dhat = (l(1) - l(0)) / h + 1.0 / (z - lo);
      } else if (j == n - 1) {
        hat = (m(j - 1) - m(j)) / h - l(j);
        dhat = (l(j - 1) - l(j)) / h - 1.0 / (z - (lo + h * static_cast<double>(j)));
      } else {
        hat = (m(j - 1) - 2.0 * m(j) + m(j + 1)) / h;
        dhat = (l(j - 1) - 2.0 * l(j) + l(j + 1)) / h;
      }
      g += fj * hat;
      dg += fj * dhat;
    }
  }

  // Remaining hats by their moment expansion in r = h / (z - x_j), |r| <= 1/kNearCells.
  far_hats(lo, h, f, z, 1, std::min(jlo, n - 1), g, dg);
  far_hats(lo, h, f, z, std::max<std::ptrdiff_t>(jhi + 1, 1), n - 1, g, dg);

  // Half hats at the two ends when they are far.
  auto end_hat = [&](std::ptrdiff_t j, double side) {
    const double fj = f[static_cast<std::size_t>(j)];
    if (fj == 0.0 || (j >= jlo && j <= jhi)) return;
    const cplx r = h / (z - (lo + h * static_cast<double>(j)));
    cplx s(0.0, 0.0), t(0.0, 0.0);
    for (int m = 12; m >= 0; --m) {
      const double b = std::pow(side, m) / ((m + 1.0) * (m + 2.0));
      s = s * r + b;
      t = t * r + b * (m + 1.0);
    }
    g += fj * r * s;
    dg -= fj * r * r * t / h;
  };
  end_hat(0, 1.0);
  end_hat(n - 1, -1.0);
  return {g, dg};
}

namespace serial {

std::vector<double> hilbert_midpoint(std::span<const double> f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = hilbert_at(f, i);
  return out;
}

std::vector<CauchyPair> cauchy_trapezoid_many(std::span<const double> x, std::span<const double> wf,
                                              std::span<const cplx> z) {
  std::vector<CauchyPair> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = cauchy_trapezoid(x, wf, z[i]);
  return out;
}

std::vector<double> log_potential(double lo, double h, std::span<const double> f,
                                  std::span<const double> at) {
  const auto c = slope_jumps(h, f);
  std::vector<double> out(at.size());
  for (std::size_t i = 0; i < at.size(); ++i) out[i] = potential_at(lo, h, f, c, at[i]);
  return out;
}

std::vector<double> cauchy_convolve(double lo, double h, std::span<const double> f, double eps,
                                    std::span<const double> at) {
  const auto c = slope_jumps(h, f);
  std::vector<double> out(at.size());
  for (std::size_t i = 0; i < at.size(); ++i) out[i] = convolve_at(lo, h, f, c, eps, at[i]);
  return out;
}

QuadrupleParts quadruple_sum(std::span<const double> x, std::span<const double> q,
                             std::span<const cplx> g_upper, std::span<const cplx> dg_upper, double eps) {
  RowSums total;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (q[i] == 0.0) continue;
    const RowSums r = quadruple_row(x, q, g_upper, dg_upper, eps, i);
    total.s2 += r.s2;
    total.s1 += r.s1;
    total.s0 += r.s0;
  }
  return {2.0 * total.s2.real(), 2.0 * total.s1.real(), 2.0 * total.s0.real()};
}

}  // namespace serial

namespace omp {

std::vector<double> hilbert_midpoint(std::span<const double> f) {
  std::vector<double> out(f.size());
  const auto n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = hilbert_at(f, static_cast<std::size_t>(i));
  }
  return out;
}

std::vector<CauchyPair> cauchy_trapezoid_many(std::span<const double> x, std::span<const double> wf,
                                              std::span<const cplx> z) {
  std::vector<CauchyPair> out(z.size());
  const auto n = static_cast<std::ptrdiff_t>(z.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = cauchy_trapezoid(x, wf, z[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<double> log_potential(double lo, double h, std::span<const double> f,
                                  std::span<const double> at) {
  const auto c = slope_jumps(h, f);
  std::vector<double> out(at.size());
  const auto n = static_cast<std::ptrdiff_t>(at.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = potential_at(lo, h, f, c, at[k]);
  }
  return out;
}

std::vector<double> cauchy_convolve(double lo, double h, std::span<const double> f, double eps,
                                    std::span<const double> at) {
  const auto c = slope_jumps(h, f);
  std::vector<double> out(at.size());
  const auto n = static_cast<std::ptrdiff_t>(at.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = convolve_at(lo, h, f, c, eps, at[k]);
  }
  return out;
}

QuadrupleParts quadruple_sum(std::span<const double> x, std::span<const double> q,
                             std::span<const cplx> g_upper, std::span<const cplx> dg_upper, double eps) {
  double s2 = 0.0, s1 = 0.0, s0 = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : s2, s1, s0)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (q[k] == 0.0) continue;
    const RowSums r = quadruple_row(x, q, g_upper, dg_upper, eps, k);
    s2 += r.s2.real();
    s1 += r.s1.real();
    s0 += r.s0.real();
  }
  return {2.0 * s2, 2.0 * s1, 2.0 * s0};
}

}  // namespace omp

}  // namespace freeconv::kernels
