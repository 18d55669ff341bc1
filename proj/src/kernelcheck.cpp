#include "freeconv/kernelcheck.hpp"

#include <cmath>
#include <numbers>

#include "freeconv/error.hpp"
#include "freeconv/functionals.hpp"
#include "freeconv/kernels.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

namespace {

constexpr double kPi = std::numbers::pi;

void require_off_support(const GridMeasure& mu, cplx z) {
  require(!(z.imag() == 0.0 && z.real() >= mu.lo() && z.real() <= mu.hi()), ErrorKind::OnSupport,
          "kernel point " + std::to_string(z.real()) + " lies on the support");
}

double cube_integral(const GridMeasure& mu) {
  std::vector<double> f3(mu.n());
  const auto f = mu.density();
  for (std::size_t j = 0; j < mu.n(); ++j) f3[j] = f[j] * f[j] * f[j];
  return trapezoid(f3, mu.h());
}

}  // namespace

cplx kernel_from_values(cplx z, cplx w, cplx gz, cplx gw, cplx dgz) {
  const cplx d = std::abs(z - w) < kDiagonalGap ? dgz : (gz - gw) / (z - w);
  const cplx p = gz * gw;
  return (d + p) * (d + p) / p;
}

cplx kernel_K(const GridMeasure& mu, cplx z, cplx w) {
  require_off_support(mu, z);
  require_off_support(mu, w);
  const auto pz = cauchy_pair(mu, z);
  const auto pw = cauchy_pair(mu, w);
  return kernel_from_values(z, w, pz.g, pw.g, pz.dg);
}

KernelEvaluation kernel_gram(const GridMeasure& mu, std::span<const cplx> points) {
  const std::size_t m = points.size();
  require(m >= 1, ErrorKind::DegeneratePoints, "empty point cloud");
  for (std::size_t j = 0; j < m; ++j) {
    require_off_support(mu, points[j]);
    for (std::size_t k = 0; k < j; ++k) {
      require(std::abs(points[j] - points[k]) > 1e-12, ErrorKind::DegeneratePoints, "repeated kernel point");
    }
  }
  std::vector<kernels::CauchyPair> at(m), at_conj(m);
  for (std::size_t j = 0; j < m; ++j) {
    at[j] = cauchy_pair(mu, points[j]);
    at_conj[j] = {std::conj(at[j].g), std::conj(at[j].dg)};
  }
  KernelEvaluation out;
  out.points.assign(points.begin(), points.end());
  out.gram.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      const cplx w = std::conj(points[k]);
      out.gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          kernel_from_values(points[j], w, at[j].g, at_conj[k].g, at[j].dg);
    }
  }
  return out;
}

double gram_min_eigenvalue(const GridMeasure& mu, std::span<const cplx> points) {
  const auto eval = kernel_gram(mu, points);
  // Symmetrize away rounding before the Hermitian solver.
  const Eigen::MatrixXcd h = 0.5 * (eval.gram + eval.gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

QuadrupleTerms a_decomposition(const GridMeasure& mu, double eps) {
  require(eps > 0.0, ErrorKind::NonPositiveEps, "eps must be > 0");
  const double hq_target = std::min(mu.h(), 0.5 * eps);
  const auto nq = static_cast<std::size_t>(std::ceil((mu.hi() - mu.lo()) / hq_target)) + 1;
  const double hq = (mu.hi() - mu.lo()) / static_cast<double>(nq - 1);
  std::vector<double> x(nq), q(nq);
  std::vector<cplx> g(nq), dg(nq);
  const auto f = mu.density();
  for (std::size_t i = 0; i < nq; ++i) {
    x[i] = mu.lo() + hq * static_cast<double>(i);
    const double t = std::min((x[i] - mu.lo()) / mu.h(), static_cast<double>(mu.n() - 1));
    const auto j = std::min(static_cast<std::size_t>(t), mu.n() - 2);
    const double frac = t - static_cast<double>(j);
    const double w = (i == 0 || i + 1 == nq) ? 0.5 * hq : hq;
    q[i] = w * ((1.0 - frac) * f[j] + frac * f[j + 1]);
  }
  const auto n = static_cast<std::ptrdiff_t>(nq);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto p = cauchy_pair(mu, cplx(x[k], eps));
    g[k] = p.g;
    dg[k] = p.dg;
  }
  const auto parts = kernels::omp::quadruple_sum(x, q, g, dg, eps);
  return {parts.a0, parts.a1, parts.a2};
}

double quadruple_integral(const GridMeasure& mu, double eps) { return a_decomposition(mu, eps).total(); }

Extrapolation extrapolate_quadruple(const GridMeasure& mu) {
  Extrapolation out;
  for (double e : kKernelEpsLadder) {
    out.eps.push_back(e);
    out.terms.push_back(a_decomposition(mu, e));
  }
  const std::size_t m = out.eps.size();
  const double e1 = out.eps[m - 2], e2 = out.eps[m - 1];
  auto richardson = [&](double v1, double v2) { return v2 - e2 * (v1 - v2) / (e1 - e2); };
  const auto& t1 = out.terms[m - 2];
  const auto& t2 = out.terms[m - 1];
  out.terms_limit = {richardson(t1.a0, t2.a0), richardson(t1.a1, t2.a1), richardson(t1.a2, t2.a2)};
  out.limit = richardson(t1.total(), t2.total());
  return out;
}

double a1_limit(const GridMeasure& mu) { return -4.0 * kPi * kPi / 3.0 * cube_integral(mu); }

double a2_limit(const GridMeasure& mu) {
  return -(dphi_dk_formula(mu) - 8.0 * kPi * kPi / 3.0 * cube_integral(mu));
}

}  // namespace freeconv
