#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "freeconv/error.hpp"
#include "freeconv/measure.hpp"
#include "test_util.hpp"

using namespace freeconv;
using freeconv::testing::kind_of;

namespace {
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("semicircle moments follow the Catalan numbers") {
  const auto mu = semicircle(0.0, 1.0);
  const auto m = moments(mu, 4);
  CHECK(std::abs(m[0]) < 1e-12);
  CHECK(m[1] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(m[2]) < 1e-12);
  CHECK(m[3] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("uniform variance and mass") {
  const auto mu = uniform(-1.0, 1.0);
  CHECK(variance(mu) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(trapezoid(mu.density(), mu.h()) == doctest::Approx(1.0).epsilon(kMassTolerance));
}

TEST_CASE("construction rejects bad samples") {
  CHECK(kind_of([] { make_grid_measure(0, 1, std::vector<double>(32, -1.0)); }) == ErrorKind::NegativeDensity);
  CHECK(kind_of([] { make_grid_measure(0, 1, std::vector<double>(32, 0.0)); }) == ErrorKind::ZeroMass);
  CHECK(kind_of([] { make_grid_measure(0, 1, std::vector<double>(8, 1.0)); }) == ErrorKind::GridTooSmall);
  CHECK(kind_of([] { semicircle(0.0, 0.0); }) == ErrorKind::NonPositiveVariance);
  CHECK(kind_of([] { dilate(uniform(0, 1, 32), -2.0); }) == ErrorKind::NonPositiveScale);
  CHECK(kind_of([] { quantile(uniform(0, 1, 32), 1.0); }) == ErrorKind::QuantileOutOfRange);
}

TEST_CASE("dilation scales the variance") {
  const auto mu = semicircle(0.3, 1.0);
  const auto nu = dilate(mu, 2.5);
  CHECK(variance(nu) == doctest::Approx(6.25 * variance(mu)).epsilon(1e-10));
  CHECK(mean(nu) == doctest::Approx(2.5 * mean(mu)).epsilon(1e-10));
  CHECK(mean(translate(mu, 1.0)) == doctest::Approx(mean(mu) + 1.0).epsilon(1e-12));
}

TEST_CASE("quantiles invert the closed-form semicircle CDF") {
  const auto mu = semicircle(0.0, 1.0);
  CHECK(std::abs(quantile(mu, 0.5)) < 1e-9);
  for (double q : {0.01, 0.1, 0.3, 0.77, 0.95}) {
    const double x = quantile(mu, q);
    CHECK(semicircle_cdf(x, 0.0, 1.0) == doctest::Approx(q).epsilon(1e-4));
    CHECK(cdf(mu, x) == doctest::Approx(q).epsilon(1e-12));
  }
  CHECK(cdf_distance(mu, [](double x) { return semicircle_cdf(x, 0.0, 1.0); }) < 1e-4);
}

TEST_CASE("quantile is monotone in q") {
  const auto mu = bernoulli_smoothed(0.05);
  double prev = -1e300;
  for (int i = 1; i < 200; ++i) {
    const double x = quantile(mu, i / 200.0);
    CHECK(x >= prev);
    prev = x;
  }
}

TEST_CASE("smoothed laws match their closed forms") {
  const auto mu = bernoulli_smoothed(0.05);
  const double eps = 0.05;
  const double x = 0.4;
  const double expect = 0.5 * (eps / (kPi * ((x - 1) * (x - 1) + eps * eps)) +
                               eps / (kPi * ((x + 1) * (x + 1) + eps * eps)));
  const auto j = static_cast<std::size_t>(std::round((x - mu.lo()) / mu.h()));
  // Truncation renormalizes by 1/(1 - tail mass).
  CHECK(mu.density()[j] == doctest::Approx(expect / (1.0 - 2e-3)).epsilon(2e-3));
  CHECK(mu.h() <= eps / 4.0);
}

TEST_CASE("Cauchy smoothing of a uniform law matches the analytic convolution") {
  const double eps = 0.1;
  const auto mu = cauchy_smooth(uniform(-1.0, 1.0, 801), eps, 1e-2);
  const auto j = static_cast<std::size_t>(std::round((0.0 - mu.lo()) / mu.h()));
  const double x = mu.node(j);
  const double expect = (std::atan((x + 1) / eps) - std::atan((x - 1) / eps)) / (2 * kPi);
  CHECK(mu.density()[j] == doctest::Approx(expect / (1.0 - 1e-2)).epsilon(5e-4));
  CHECK(mu.h() <= eps / 4.0 + 1e-15);
}

TEST_CASE("regrid preserves the law") {
  const auto mu = semicircle(0.0, 1.0, 1001);
  const auto nu = regrid(mu, -2.5, 2.5, 1501);
  CHECK(cdf_distance(mu, nu) < 1e-4);
  CHECK(variance(nu) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("measure JSON round trip") {
  const auto mu = semicircle(0.0, 2.0, 129);
  const auto nu = measure_from_json(nlohmann::json::parse(to_json(mu).dump()));
  CHECK(nu.lo() == mu.lo());
  CHECK(nu.hi() == mu.hi());
  for (std::size_t j = 0; j < mu.n(); ++j) CHECK(nu.density()[j] == doctest::Approx(mu.density()[j]).epsilon(1e-14));
  CHECK(kind_of([] { measure_from_json(nlohmann::json::parse(R"({"lo":0})")); }) == ErrorKind::InvalidInput);
}

TEST_CASE("random densities are normalized") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> f(40);
    for (double& v : f) v = u(rng);
    const auto mu = make_grid_measure(-1.0, 2.0, f);
    CHECK(trapezoid(mu.density(), mu.h()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cdf(mu, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
