#include "freeconv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "freeconv/convolution.hpp"
#include "freeconv/functionals.hpp"
#include "freeconv/kernelcheck.hpp"
#include "freeconv/transforms.hpp"
#include "freeconv/variational.hpp"

namespace freeconv::verify {

namespace {

double relative(double value, double target) { return std::abs(value - target) / std::abs(target); }

std::vector<cplx> line_cloud(const GridMeasure& mu) {
  std::vector<cplx> pts;
  for (double im : {0.1, 0.5}) {
    for (int j = 0; j < 10; ++j) pts.emplace_back(mu.lo() + (mu.hi() - mu.lo()) * (j + 0.5) / 10.0, im);
  }
  return pts;
}

std::vector<cplx> mixed_cloud(const GridMeasure& mu) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> re(mu.lo(), mu.hi()), im(0.05, 1.0);
  std::vector<cplx> pts;
  for (int j = 0; j < 30; ++j) {
    const double x = re(rng);
    pts.emplace_back(x, im(rng));
  }
  return pts;
}

double gram_ratio(const GridMeasure& mu, const std::vector<cplx>& pts) {
  const auto g = kernel_gram(mu, pts);
  return gram_min_eigenvalue(mu, pts) / g.gram.trace().real();
}

}  // namespace

Check at_most(std::string name, std::string reference, double value, double tolerance) {
  Check c{std::move(name), std::move(reference), value, tolerance};
  c.pass = value <= tolerance;
  return c;
}

Check at_least(std::string name, std::string reference, double value, double bound) {
  Check c{std::move(name), std::move(reference), value, bound};
  c.pass = value >= bound;
  return c;
}

Check within(std::string name, std::string reference, double value, double lo, double hi) {
  Check c{std::move(name), std::move(reference), value};
  c.range = true;
  c.lo = lo;
  c.hi = hi;
  c.pass = value >= lo && value <= hi;
  return c;
}

nlohmann::json to_json(const Check& c) {
  nlohmann::json j{{"name", c.name}, {"reference", c.reference}, {"value", c.value}, {"pass", c.pass}};
  if (c.range) {
    j["tolerance"] = {c.lo, c.hi};
  } else {
    j["tolerance"] = c.tolerance;
  }
  return j;
}

nlohmann::json to_json(const std::vector<Check>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  return arr;
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<Check> hilbert_suite(const GridMeasure& mu, double tol) {
  const auto r = hilbert_identities(mu);
  return {at_most("hilbert.orthogonality", "int f Hf = 0", r.first, tol),
          at_most("hilbert.cubic", "int f (Hf)^2 = (1/3) int f^3", r.second, tol),
          at_most("hilbert.product", "H(f Hf) = ((Hf)^2 - f^2)/2 on the inner 90%", r.third, tol)};
}

std::vector<Check> kernel_suite(const GridMeasure& mu) {
  std::vector<Check> out;
  out.push_back(at_least("kernel.gram_lines", "K(z, conj w) positive semi-definite, 20 points",
                         gram_ratio(mu, line_cloud(mu)), -1e-9));
  out.push_back(at_least("kernel.gram_mixed", "K(z, conj w) positive semi-definite, 30 points",
                         gram_ratio(mu, mixed_cloud(mu)), -1e-9));
  const auto ex = extrapolate_quadruple(mu);
  double low = ex.terms.front().total();
  for (const auto& t : ex.terms) low = std::min(low, t.total());
  out.push_back(at_least("kernel.quadruple_nonnegative", "quadruple integral >= 0 at every eps", low, -1e-8));
  out.push_back(at_most("kernel.a0", "A0 = 0", std::abs(ex.terms.back().a0), 1e-6));
  out.push_back(at_most("kernel.a1", "A1 = -(4 pi^2/3) int f^3", relative(ex.terms_limit.a1, a1_limit(mu)), 1e-2));
  out.push_back(at_most("kernel.a2", "A2 = -4 pi int (Hf f' - f Hf')/((Hf)^2 + f^2) f^2",
                        relative(ex.terms_limit.a2, a2_limit(mu)), 2e-2));
  const double lhs = dphi_dk_at_one(mu).lhs;
  const double scale = std::max({std::abs(ex.limit), std::abs(lhs), 0.01});
  out.push_back(at_most("kernel.chain", "quadruple integral = -d/dk Phi(normalized power) at k = 1",
                        std::abs(ex.limit + lhs) / scale, 5e-2));
  return out;
}

std::vector<Check> pde_suite(const GridMeasure& mu, double k) {
  std::vector<Check> out;
  out.push_back(at_most("pde.burgers", "(k d/dk + z d/dz) G = G'/G off the axis", burgers_residual(mu, k, 0.01, 0.05),
                        1e-4));
  const double coarse = flow_residual(mu, k, 0.02, 1001);
  const double fine = flow_residual(mu, k, 0.01, 2001);
  out.push_back(at_most("pde.flow", "density flow of the normalized powers", fine, 5e-3));
  out.push_back(within("pde.flow_ratio", "second-order convergence of the flow residual", coarse / fine, 3.0, 5.0));
  return out;
}

std::vector<Check> variational_suite(const GridMeasure& mu, std::size_t ns) {
  std::vector<Check> out;
  const auto coarse = lambda_field(mu, ns, ns);
  const auto fine = lambda_field(mu, 2 * ns, 2 * ns);
  const double rc = max_interior(euler_lagrange_residual(coarse));
  const double rf = max_interior(euler_lagrange_residual(fine));
  out.push_back(within("variational.el_ratio", "Euler-Lagrange residual of L = log l_y + log|sin(pi l_s/l_y)|", rc / rf,
                       3.0, 5.0));
  const auto il = interlacing_check(fine);
  out.push_back(at_most("variational.interlacing", "0 <= d_s lambda <= d_y lambda at interior nodes",
                        static_cast<double>(il.violations), 0.0));
  out.push_back(at_most("variational.interlacing_reflected", "-d_y lambda <= d_s lambda <= 0 at interior nodes",
                        static_cast<double>(il.reflected_violations), 0.0));
  const auto gt = gt_consistency(fine, mu);
  out.push_back(at_most("variational.density", "f(lambda/s) d_y lambda = 1", gt.r1, 1e-2));
  out.push_back(at_most("variational.hilbert", "Hf(lambda/s) d_y lambda = cot(pi d_s lambda/d_y lambda)", gt.r2, 5e-2));
  return out;
}

std::vector<Check> rmt_suite(const GridMeasure& mu, const rmt::RunConfig& cfg) {
  std::vector<Check> out;
  const auto rep = rmt::minor_process_check(mu, cfg);
  out.push_back(at_most("rmt.ks", "k times the minor spectrum follows the free power", rep.ks_distance, 0.03));
  for (std::size_t j = 0; j < rep.deviations.size(); ++j) {
    out.push_back(at_most("rmt.moment" + std::to_string(j + 1), "pooled minor moments match the free power",
                          rep.deviations[j], 0.05));
  }
  out.push_back(at_most("rmt.interlacing", "Cauchy interlacing of minor and full spectra",
                        static_cast<double>(rep.interlacing_violations), 0.0));
  const auto gue = rmt::gue_variance_check(2, 256, 1.0, 64, cfg.seed);
  out.push_back(at_most("rmt.gue_variance", "normalized GUE variance equals t n",
                        std::abs(gue.estimate - gue.expected) / gue.expected, 0.025));
  return out;
}

}  // namespace freeconv::verify
