#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "freeconv/rmt.hpp"
#include "test_util.hpp"

using namespace freeconv;
using freeconv::testing::kind_of;

TEST_CASE("Haar columns are orthonormal") {
  auto rng = rmt::trial_rng(11, 0);
  const auto q = rmt::haar_columns(96, 40, rng);
  CHECK(q.rows() == 96);
  CHECK(q.cols() == 40);
  const Eigen::MatrixXcd gram = q.adjoint() * q;
  CHECK((gram - Eigen::MatrixXcd::Identity(40, 40)).norm() < 1e-12);
}

TEST_CASE("Haar entries have the invariant first two moments") {
  // E|U_11|^2 = 1/n, E U_11 = 0, E U_11^2 = 0.
  const std::size_t n = 8;
  const int draws = 4000;
  double abs2 = 0.0;
  std::complex<double> first{};
  std::complex<double> square{};
  for (int t = 0; t < draws; ++t) {
    auto rng = rmt::trial_rng(5, static_cast<std::uint64_t>(t));
    const auto q = rmt::haar_columns(n, 1, rng);
    abs2 += std::norm(q(0, 0));
    first += q(0, 0);
    square += q(0, 0) * q(0, 0);
  }
  CHECK(abs2 / draws == doctest::Approx(1.0 / n).epsilon(0.05));
  CHECK(std::abs(first) / draws < 0.02);
  CHECK(std::abs(square) / draws < 0.02);
}

TEST_CASE("trial streams are reproducible and distinct") {
  auto a = rmt::trial_rng(42, 3);
  auto b = rmt::trial_rng(42, 3);
  auto c = rmt::trial_rng(42, 4);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
}

TEST_CASE("invariant matrices keep the quantile spectrum") {
  const auto mu = semicircle(0.0, 1.0);
  const auto a = rmt::sample_invariant_hermitian(mu, 64, 9);
  CHECK((a - a.adjoint()).norm() < 1e-12);
  const auto full = rmt::minor_spectrum(a, 64);
  const auto expect = rmt::quantile_spectrum(mu, 64);
  for (std::size_t j = 0; j < 64; ++j) CHECK(full.eigenvalues[j] == doctest::Approx(expect[j]).epsilon(1e-9));
  const auto minor = rmt::minor_spectrum(a, 20);
  CHECK(rmt::interlacing_violations(full, minor, 1e-10) == 0);
  CHECK(kind_of([&] { rmt::minor_spectrum(a, 0); }) == ErrorKind::BadMinorDim);
  CHECK(kind_of([&] { rmt::minor_spectrum(a, 65); }) == ErrorKind::BadMinorDim);
}

TEST_CASE("interlacing counter") {
  rmt::SpectralSample big{4, {0.0, 1.0, 2.0, 3.0}};
  rmt::SpectralSample good{2, {0.5, 2.5}};
  rmt::SpectralSample bad{2, {-0.5, 3.5}};
  CHECK(rmt::interlacing_violations(big, good, 1e-12) == 0);
  CHECK(rmt::interlacing_violations(big, bad, 1e-12) == 2);
}

TEST_CASE("KS distance of a uniform grid sample") {
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) xs.push_back((i + 0.5) / 100.0);
  CHECK(rmt::ks_distance(xs, [](double x) { return x; }) == doctest::Approx(0.005).epsilon(1e-9));
}

TEST_CASE("small minor process run") {
  const auto mu = uniform(-1.0, 1.0);
  const auto r = rmt::minor_process_check(mu, {.n_dim = 256, .k = 2.0, .trials = 4, .seed = 1});
  CHECK(r.minor_dim == 128);
  CHECK(r.pooled.size() == 4 * 128);
  CHECK(r.ks_distance < 0.03);
  CHECK(r.interlacing_violations == 0);
  CHECK(r.deviations[1] < 0.02);
  CHECK(kind_of([&] { rmt::minor_process_check(mu, {.n_dim = 16}); }) == ErrorKind::BadArgument);
}

TEST_CASE("GUE variance normalization") {
  const auto g = rmt::gue_variance_check(3, 128, 0.5, 8, 2);
  CHECK(g.expected == doctest::Approx(1.5));
  CHECK(g.estimate == doctest::Approx(1.5).epsilon(0.02));
}
