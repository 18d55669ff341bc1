#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "freeconv/functionals.hpp"
#include "freeconv/kernelcheck.hpp"
#include "test_util.hpp"

using namespace freeconv;
using freeconv::testing::kind_of;

namespace {

cplx g_semicircle(cplx z) { return (z - std::sqrt(z - 2.0) * std::sqrt(z + 2.0)) / 2.0; }

// With z = G + 1/G the kernel collapses to P^3 / (P - 1)^2, P = G(z) G(w).
cplx k_semicircle(cplx z, cplx w) {
  const cplx p = g_semicircle(z) * g_semicircle(w);
  return p * p * p / ((p - 1.0) * (p - 1.0));
}

}  // namespace

TEST_CASE("kernel from values matches the semicircle closed form") {
  for (auto [z, w] : {std::pair<cplx, cplx>{{0.3, 0.5}, {-1.0, -0.2}}, {{2.0, 1.0}, {0.5, -0.7}}, {{0.0, 2.0}, {0.0, 3.0}}}) {
    const cplx gz = g_semicircle(z);
    const cplx gw = g_semicircle(w);
    CHECK(std::abs(kernel_from_values(z, w, gz, gw, {}) - k_semicircle(z, w)) < 1e-12 * std::abs(k_semicircle(z, w)));
  }
}

TEST_CASE("kernel on the diagonal uses the derivative") {
  const cplx z{0.4, 0.3};
  const cplx gz = g_semicircle(z);
  const cplx dg = gz * gz / (gz * gz - 1.0);
  const cplx on = kernel_from_values(z, z, gz, gz, dg);
  const cplx near = k_semicircle(z, z + cplx(1e-6, 0.0));
  CHECK(std::abs(on - near) < 1e-5 * std::abs(on));
}

TEST_CASE("numerical kernel of the semicircle") {
  const auto mu = semicircle(0.0, 1.0, 4001);
  for (auto [z, w] : {std::pair<cplx, cplx>{{0.3, 0.5}, {-1.0, -0.2}}, {{0.0, 2.0}, {0.0, 3.0}}}) {
    const cplx k = kernel_K(mu, z, w);
    // The far pair is limited by the grid at about 1e-8 absolute.
    CHECK(std::abs(k - k_semicircle(z, w)) < 1e-5 * std::abs(k_semicircle(z, w)) + 1e-7);
  }
  CHECK(kind_of([&] { kernel_K(mu, {0.5, 0.0}, {0.0, 1.0}); }) == ErrorKind::OnSupport);
}

TEST_CASE("Gram matrices are Hermitian and positive semidefinite") {
  const auto mu = bump(2001);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(-1.5, 1.5);
  std::uniform_real_distribution<double> im(0.05, 1.0);
  std::vector<cplx> pts;
  for (int j = 0; j < 16; ++j) pts.emplace_back(re(rng), im(rng));
  const auto ev = kernel_gram(mu, pts);
  CHECK((ev.gram - ev.gram.adjoint()).norm() < 1e-10 * ev.gram.norm());
  CHECK(gram_min_eigenvalue(mu, pts) >= -1e-9 * ev.gram.trace().real());
  pts.push_back(pts.front());
  CHECK(kind_of([&] { kernel_gram(mu, pts); }) == ErrorKind::DegeneratePoints);
}

TEST_CASE("quadruple integral decomposition") {
  const auto mu = uniform_smoothed(0.2, 0.02);
  const auto t = a_decomposition(mu, 0.05);
  CHECK(std::abs(t.a0) < 1e-10);
  CHECK(t.total() == doctest::Approx(quadruple_integral(mu, 0.05)).epsilon(1e-12));
  CHECK(t.total() >= -1e-8);
}

TEST_CASE("extrapolated pieces and the Fisher derivative") {
  const auto mu = bump(2001);
  const auto ex = extrapolate_quadruple(mu);
  CHECK(ex.eps.size() == std::size(kKernelEpsLadder));
  CHECK(ex.terms_limit.a1 == doctest::Approx(a1_limit(mu)).epsilon(1e-2));
  CHECK(ex.terms_limit.a2 == doctest::Approx(a2_limit(mu)).epsilon(2e-2));
  CHECK(ex.limit == doctest::Approx(-dphi_dk_formula(mu)).epsilon(5e-2));
}
