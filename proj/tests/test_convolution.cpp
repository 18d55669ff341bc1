#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "freeconv/convolution.hpp"
#include "freeconv/transforms.hpp"
#include "test_util.hpp"

using namespace freeconv;
using freeconv::testing::kind_of;

namespace {

constexpr double kPi = std::numbers::pi;

// Arcsine law on [-2, 2] convolved with the Cauchy law of width eps.
double smoothed_arcsine_cdf(double x, double eps) {
  const int m = 4000;
  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    const double theta = kPi * (j + 0.5) / m;
    acc += 0.5 + std::atan((x - 2.0 * std::cos(theta)) / eps) / kPi;
  }
  return acc / m;
}

// Moments of mu^{boxplus k} from exact moments of mu by the moment-cumulant
// recursion over non-crossing partitions, written independently of the
// library: m_n = sum_{s=1}^n kappa_s sum_{i_1+...+i_s = n-s} m_{i_1}...m_{i_s}.
std::vector<double> power_moments_from(std::vector<double> m, double k) {
  const std::size_t n = m.size();
  std::vector<double> full(n + 1, 0.0);
  full[0] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) full[j] = m[j - 1];
  // conv[s][t]: coefficient of x^t in (sum m_i x^i)^s.
  auto products = [&](const std::vector<double>& mm) {
    std::vector<std::vector<double>> conv(n + 1, std::vector<double>(n + 1, 0.0));
    conv[0][0] = 1.0;
    for (std::size_t s = 1; s <= n; ++s) {
      for (std::size_t t = 0; t <= n; ++t) {
        for (std::size_t i = 0; i <= t; ++i) conv[s][t] += conv[s - 1][t - i] * mm[i];
      }
    }
    return conv;
  };
  const auto conv = products(full);
  std::vector<double> kappa(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    double rest = 0.0;
    for (std::size_t s = 1; s < j; ++s) rest += kappa[s] * conv[s][j - s];
    kappa[j] = full[j] - rest;
  }
  std::vector<double> out(n + 1, 0.0);
  out[0] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const auto c = products(out);
    double acc = 0.0;
    for (std::size_t s = 1; s <= j; ++s) acc += k * kappa[s] * c[s][j - s];
    out[j] = acc;
  }
  return {out.begin() + 1, out.end()};
}

}  // namespace

TEST_CASE("semicircle powers are dilations") {
  const auto mu = semicircle(0.0, 1.0);
  const auto p = free_power(mu, 4.0);
  CHECK(cdf_distance(p, [](double x) { return semicircle_cdf(x, 0.0, 4.0); }) < 1e-4);
  CHECK(variance(p) == doctest::Approx(4.0).epsilon(1e-3));
  const auto q = normalized_free_power(mu, 2.0);
  CHECK(cdf_distance(q, [](double x) { return semicircle_cdf(x, 0.0, 1.0); }) < 1e-4);
}

TEST_CASE("k = 1 returns the input law") {
  const auto mu = uniform(-1.0, 1.0);
  const auto p = free_power(mu, 1.0);
  CHECK(cdf_distance(p, mu) < 1e-4);
}

TEST_CASE("power moments follow the cumulant scaling") {
  std::vector<double> exact(8);
  for (std::size_t n = 1; n <= 8; ++n) exact[n - 1] = n % 2 ? 0.0 : 1.0 / static_cast<double>(n + 1);
  const double k = 2.5;
  const auto target = power_moments_from(exact, k);
  const auto p = free_power(uniform(-1.0, 1.0), k);
  const auto m = moments(p, 8);
  for (std::size_t n = 2; n <= 8; n += 2) CHECK(m[n - 1] == doctest::Approx(target[n - 1]).epsilon(5e-4));
  const auto viacum = free_power_moments(uniform(-1.0, 1.0), k, 8);
  for (std::size_t n = 2; n <= 8; n += 2) CHECK(viacum[n - 1] == doctest::Approx(target[n - 1]).epsilon(1e-4));
}

TEST_CASE("mass, mean and variance of powers") {
  const auto mu = translate(uniform(-1.0, 1.0), 0.3);
  for (double k : {1.3, 2.0, 3.7}) {
    const auto p = free_power(mu, k);
    CHECK(trapezoid(p.density(), p.h()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean(p) == doctest::Approx(k * 0.3).epsilon(1e-4));
    CHECK(variance(p) == doctest::Approx(k / 3.0).epsilon(1e-3));
  }
}

TEST_CASE("smoothed Bernoulli squared is a smoothed arcsine") {
  const double eps = 0.05;
  const auto p = free_power(bernoulli_smoothed(eps), 2.0);
  CHECK(cdf_distance(p, [&](double x) { return smoothed_arcsine_cdf(x, 2.0 * eps); }) < 1e-2);
}

TEST_CASE("powers compose") {
  const auto mu = uniform(-1.0, 1.0);
  const auto two_step = free_power(free_power(mu, 1.5), 2.0);
  CHECK(cdf_distance(two_step, free_power(mu, 3.0)) < 1e-4);
}

TEST_CASE("Cauchy transform of a semicircle power") {
  const auto mu = semicircle(0.0, 1.0, 4001);
  const double k = 2.5;
  const double r = 2.0 * std::sqrt(k);
  for (std::complex<double> z : {std::complex<double>(0.5, 0.5), {3.0, 0.1}, {-1.0, 2.0}}) {
    const auto exact = (z - std::sqrt(z - r) * std::sqrt(z + r)) / (2.0 * k);
    CHECK(std::abs(free_power_cauchy(mu, k, z) - exact) < 5e-5);
  }
}

TEST_CASE("semicircular flow adds variance") {
  const auto p = semicircular_flow(semicircle(0.0, 1.0), 1.0);
  CHECK(cdf_distance(p, [](double x) { return semicircle_cdf(x, 0.0, 2.0); }) < 1e-4);
  const auto q = semicircular_flow(uniform(-1.0, 1.0), 0.5);
  CHECK(variance(q) == doctest::Approx(1.0 / 3.0 + 0.5).epsilon(1e-3));
}

TEST_CASE("complex Burgers equation") {
  CHECK(burgers_residual(semicircle(0.0, 1.0), 2.0, 0.01, 0.05) < 1e-4);
  CHECK(burgers_residual(uniform_smoothed(0.2), 1.5, 0.01, 0.05) < 1e-4);
}

TEST_CASE("domain errors") {
  const auto mu = uniform(-1.0, 1.0, 201);
  CHECK(kind_of([&] { free_power(mu, 0.5); }) == ErrorKind::KLessThanOne);
  CHECK(kind_of([&] { free_power_moments(mu, 2.0, 1); }) == ErrorKind::TooFewMoments);
  CHECK(kind_of([&] { semicircular_flow(mu, -1.0); }) == ErrorKind::BadArgument);
  CHECK(kind_of([&] { burgers_residual(mu, 1.0, 0.1, 0.05); }) == ErrorKind::KLessThanOne);
}
