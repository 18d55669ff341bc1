// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned here.
// Exit status is the number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "freeconv/convolution.hpp"
#include "freeconv/functionals.hpp"
#include "freeconv/kernelcheck.hpp"
#include "freeconv/measure.hpp"
#include "freeconv/rmt.hpp"
#include "freeconv/transforms.hpp"
#include "freeconv/variational.hpp"

using namespace freeconv;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = t <= budget_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("criterion %2d %s %-22s %s runtime=%.1fs budget=%.0fs%s\n", id, ok ? "PASS" : "FAIL", name,
              o.detail.c_str(), t, budget_s, in_time ? "" : " (over budget)");
  std::fflush(stdout);
}

std::string fmt(const char* key, double v, const char* tol_key, double tol) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s=%.3e %s=%.1e ", key, v, tol_key, tol);
  return buf;
}

// Arcsine law on [-2, 2] convolved with a Cauchy law of width eps.
double smoothed_arcsine_cdf(double x, double eps) {
  const int m = 4000;
  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    const double theta = kPi * (j + 0.5) / m;
    acc += 0.5 + std::atan((x - 2.0 * std::cos(theta)) / eps) / kPi;
  }
  return acc / m;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

Outcome semicircle_stability() {
  const auto sc = semicircle(0.0, 1.0);
  const std::vector<double> ks{1.0, 1.5, 2.0, 4.0};
  double dist = 0.0;
  for (double k : ks) {
    dist = std::max(dist, cdf_distance(normalized_free_power(sc, k),
                                       [](double x) { return semicircle_cdf(x, 0.0, 1.0); }));
  }
  const auto table = monotonicity_scan(sc, ks);
  const double chi0 = 0.5 * std::log(2.0 * kPi * std::numbers::e);
  double dphi = 0.0;
  double dchi = 0.0;
  for (const auto& r : table.rows) {
    dphi = std::max(dphi, std::abs(r.phi - 1.0));
    dchi = std::max(dchi, std::abs(r.chi - chi0));
  }
  return {dist <= 1e-3 && dphi <= 2e-3 && dchi <= 2e-3,
          fmt("cdf", dist, "tol", 1e-3) + fmt("phi_dev", dphi, "tol", 2e-3) + fmt("chi_dev", dchi, "tol", 2e-3)};
}

Outcome bernoulli_square() {
  const double eps = 0.05;
  const auto p = free_power(bernoulli_smoothed(eps), 2.0);
  const double d = cdf_distance(p, [&](double x) { return smoothed_arcsine_cdf(x, 2.0 * eps); });
  return {d <= 1e-2, fmt("cdf", d, "tol", 1e-2)};
}

Outcome monotonicity() {
  const auto ks = linspace(1.0, 4.0, 31);
  double worst = 0.0;
  std::string detail;
  for (const auto& [name, mu] : {std::pair{"uniform", uniform(-1.0, 1.0)}, {"bernoulli", bernoulli_smoothed(0.05)}}) {
    const auto t = monotonicity_scan(mu, ks);
    const double w = std::max(t.phi_increase, t.chi_decrease);
    worst = std::max(worst, w);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_violation=%.3e ", name, w);
    detail += buf;
  }
  return {worst <= 1e-6, detail + fmt("worst", worst, "tol", 1e-6)};
}

Outcome hilbert_identities_check() {
  double worst = 0.0;
  for (const auto& mu : {semicircle(0.0, 1.0, 4001), bump(4001)}) {
    const auto r = hilbert_identities(mu);
    worst = std::max({worst, r.first, r.second, r.third});
  }
  return {worst <= 1e-5, fmt("max_rel", worst, "tol", 1e-5)};
}

Outcome kernel_chain() {
  std::string detail;
  bool ok = true;
  double gram = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double chain = 0.0;
  std::mt19937_64 rng(1);
  for (const auto& mu : {uniform_smoothed(0.05, 0.02), bump(2001)}) {
    std::vector<cplx> line;
    for (int j = 0; j < 10; ++j) {
      const double x = mu.lo() + (mu.hi() - mu.lo()) * (j + 0.5) / 10.0;
      line.emplace_back(x, 0.1);
      line.emplace_back(x, 0.5);
    }
    std::uniform_real_distribution<double> re(mu.lo(), mu.hi());
    std::uniform_real_distribution<double> im(0.05, 1.0);
    std::vector<cplx> cloud;
    for (int j = 0; j < 30; ++j) cloud.emplace_back(re(rng), im(rng));
    for (const auto* pts : {&line, &cloud}) {
      const auto ev = kernel_gram(mu, *pts);
      gram = std::min(gram, gram_min_eigenvalue(mu, *pts) / ev.gram.trace().real());
    }
    const auto ex = extrapolate_quadruple(mu);
    a0 = std::max(a0, std::abs(ex.terms.back().a0));
    a1 = std::max(a1, std::abs(ex.terms_limit.a1 / a1_limit(mu) - 1.0));
    a2 = std::max(a2, std::abs(ex.terms_limit.a2 / a2_limit(mu) - 1.0));
    const double lhs = dphi_dk_at_one(mu).lhs;
    chain = std::max(chain, std::abs(ex.limit + lhs) / std::max(std::abs(ex.limit), std::abs(lhs)));
  }
  ok = gram >= -1e-9 && a0 <= 1e-6 && a1 <= 1e-2 && a2 <= 2e-2 && chain <= 5e-2;
  detail = fmt("gram_min/trace", gram, "tol", -1e-9) + fmt("a0", a0, "tol", 1e-6) + fmt("a1_rel", a1, "tol", 1e-2) +
           fmt("a2_rel", a2, "tol", 2e-2) + fmt("chain_rel", chain, "tol", 5e-2);
  return {ok, detail};
}

Outcome flow_equation() {
  const auto mu = uniform_smoothed(0.2);
  const double fine = flow_residual(mu, 1.5, 0.01, 2001);
  const double coarse = flow_residual(mu, 1.5, 0.02, 1001);
  const double ratio = coarse / fine;
  char buf[64];
  std::snprintf(buf, sizeof buf, "ratio=%.2f range=[3,5] ", ratio);
  return {fine <= 5e-3 && ratio >= 3.0 && ratio <= 5.0, fmt("residual", fine, "tol", 5e-3) + buf};
}

Outcome variational() {
  const auto sc = semicircle(0.0, 1.0);
  std::vector<double> res;
  InterlacingReport il;
  GtConsistency gt;
  for (std::size_t m : {32, 64, 128}) {
    const auto field = lambda_field(sc, m, m);
    res.push_back(max_interior(euler_lagrange_residual(field)));
    if (m == 32) {
      il = interlacing_check(field);
      gt = gt_consistency(field, sc);
    }
  }
  const double q1 = res[0] / res[1];
  const double q2 = res[1] / res[2];
  const bool ratios = q1 >= 3.0 && q1 <= 5.0 && q2 >= 3.0 && q2 <= 5.0;
  const bool ok = ratios && il.violations == 0 && gt.r1 <= 1e-2 && gt.r2 <= 5e-2;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "el_ratios=%.2f,%.2f range=[3,5] interlacing_violations=%zu/%zu reflected_violations=%zu ", q1, q2,
                il.violations, il.interior_nodes, il.reflected_violations);
  return {ok, buf + fmt("r1", gt.r1, "tol", 1e-2) + fmt("r2", gt.r2, "tol", 5e-2)};
}

Outcome minor_process() {
  const auto r = rmt::minor_process_check(semicircle(0.0, 1.0, 4001), {.n_dim = 1024, .k = 2.0, .trials = 16, .seed = 7});
  const double dev = *std::max_element(r.deviations.begin(), r.deviations.end());
  std::string moments = "moment_devs=";
  for (double d : r.deviations) {
    char b[16];
    std::snprintf(b, sizeof b, "%.4f,", d);
    moments += b;
  }
  moments.back() = ' ';
  const bool ok = r.ks_distance <= 0.03 && dev <= 0.05 && r.interlacing_violations == 0;
  return {ok, fmt("ks", r.ks_distance, "tol", 0.03) + moments + "tol=0.05 interlacing_violations=" +
                  std::to_string(r.interlacing_violations) + " "};
}

Outcome gue_normalization() {
  const auto g = rmt::gue_variance_check(2, 256, 1.0, 64, 7);
  const double rel = std::abs(g.estimate / g.expected - 1.0);
  return {rel <= 0.025, fmt("estimate", g.estimate, "expected", g.expected) + fmt("rel", rel, "tol", 0.025)};
}

Outcome dual_route() {
  double worst = 0.0;
  for (const auto& mu : {bump(4001), translate(bump(4001), 0.4), uniform_smoothed(0.2), semicircle(0.3, 1.0, 4001)}) {
    for (double k : {1.3, 2.0, 3.7}) {
      const auto dens = moments(free_power(mu, k), 8);
      const auto cum = free_power_moments(mu, k, 8);
      const double scale = variance(mu) * k;
      for (std::size_t n = 1; n <= 8; ++n) {
        const double ref = std::max(std::abs(cum[n - 1]), std::pow(scale, 0.5 * static_cast<double>(n)));
        worst = std::max(worst, std::abs(dens[n - 1] - cum[n - 1]) / ref);
      }
    }
  }
  return {worst <= 1e-3, fmt("max_rel", worst, "tol", 1e-3)};
}

}  // namespace

int main() {
  criterion(1, "semicircle_stability", 30, semicircle_stability);
  criterion(2, "bernoulli_square", 30, bernoulli_square);
  criterion(3, "monotonicity", 300, monotonicity);
  criterion(4, "hilbert_identities", 10, hilbert_identities_check);
  criterion(5, "kernel_chain", 600, kernel_chain);
  criterion(6, "flow_equation", 120, flow_equation);
  criterion(7, "variational", 300, variational);
  criterion(8, "minor_process", 180, minor_process);
  criterion(9, "gue_normalization", 60, gue_normalization);
  criterion(10, "dual_route_moments", 60, dual_route);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
