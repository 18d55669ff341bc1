#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "freeconv/functionals.hpp"
#include "test_util.hpp"

using namespace freeconv;

namespace {
constexpr double kPi = std::numbers::pi;
const double kHalfLog2PiE = 0.5 * std::log(2.0 * kPi * std::numbers::e);
}  // namespace

TEST_CASE("Fisher information of reference laws") {
  CHECK(fisher_information(semicircle(0.0, 1.0, 4001)) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(fisher_information(semicircle(0.0, 4.0, 4001)) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(fisher_information(uniform(-1.0, 1.0)) == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-12));
}

TEST_CASE("Fisher information through the score") {
  const auto mu = bump(4001);
  CHECK(fisher_via_score(mu) == doctest::Approx(fisher_information(mu)).epsilon(1e-3));
  const auto sc = semicircle(0.0, 1.0, 4001);
  CHECK(fisher_via_score(sc) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("free entropy of reference laws") {
  CHECK(free_entropy(semicircle(0.0, 1.0, 4001)) == doctest::Approx(kHalfLog2PiE).epsilon(1e-4));
  // log 2 - 3/2 is the logarithmic energy of uniform[-1, 1].
  const double uniform_chi = std::log(2.0) - 1.5 + 0.75 + 0.5 * std::log(2.0 * kPi);
  CHECK(free_entropy(uniform(-1.0, 1.0)) == doctest::Approx(uniform_chi).epsilon(1e-5));
  CHECK(free_entropy(dilate(uniform(-1.0, 1.0), 2.0)) == doctest::Approx(uniform_chi + std::log(2.0)).epsilon(1e-5));
}

TEST_CASE("entropy by integrating Fisher information along the flow") {
  const auto sc = semicircle(0.0, 1.0, 1001);
  CHECK(entropy_via_flow(sc, 50.0, 4) == doctest::Approx(free_entropy(sc)).epsilon(2e-4));
}

TEST_CASE("Fisher information bounds the variance") {
  for (const auto& mu : {uniform(-1.0, 1.0), bump(2001)}) CHECK(fisher_information(mu) * variance(mu) >= 1.0);
}

TEST_CASE("monotonicity scan") {
  const std::vector<double> ks{1.0, 1.5, 2.0};
  const auto u = monotonicity_scan(uniform(-1.0, 1.0), ks);
  CHECK(u.phi_increase <= 1e-6);
  CHECK(u.chi_decrease <= 1e-6);
  CHECK(u.rows.back().phi < u.rows.front().phi - 0.05);
  const auto s = monotonicity_scan(semicircle(0.0, 1.0), ks);
  for (const auto& r : s.rows) {
    CHECK(r.phi == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(r.chi == doctest::Approx(kHalfLog2PiE).epsilon(2e-3));
  }
  const std::vector<double> bad{1.5, 2.0};
  CHECK(testing::kind_of([&] { monotonicity_scan(uniform(-1.0, 1.0), bad); }) == ErrorKind::BadArgument);
}

TEST_CASE("derivative of the normalized Fisher information at k = 1") {
  const auto mu = bump(2001);
  const auto d = dphi_dk_at_one(mu);
  CHECK(d.lhs <= 0.0);
  CHECK(d.lhs == doctest::Approx(d.rhs).epsilon(1e-3));
  CHECK(std::abs(dphi_dk_formula(semicircle(0.0, 1.0, 4001))) < 1e-3);
}
