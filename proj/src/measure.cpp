#include "freeconv/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

#include "freeconv/error.hpp"
#include "freeconv/kernels.hpp"

namespace freeconv {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(double lo, double hi, std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> out(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) out[j] = f(lo + h * static_cast<double>(j));
  return out;
}

// Fritsch-Carlson slopes for monotone data on a uniform grid.
std::vector<double> monotone_slopes(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  std::vector<double> delta(n - 1), m(n);
  for (std::size_t j = 0; j + 1 < n; ++j) delta[j] = (y[j + 1] - y[j]) / h;
  m[0] = delta[0];
  m[n - 1] = delta[n - 2];
  for (std::size_t j = 1; j + 1 < n; ++j) {
    m[j] = (delta[j - 1] * delta[j] <= 0.0) ? 0.0 : 0.5 * (delta[j - 1] + delta[j]);
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (delta[j] == 0.0) {
      m[j] = 0.0;
      m[j + 1] = 0.0;
      continue;
    }
    const double a = m[j] / delta[j];
    const double b = m[j + 1] / delta[j];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      m[j] = t * a * delta[j];
      m[j + 1] = t * b * delta[j];
    }
  }
  return m;
}

}  // namespace

GridMeasure::GridMeasure(double lo, double hi, std::vector<double> density)
    : lo_(lo), hi_(hi), density_(std::move(density)) {
  const std::size_t n = density_.size();
  const double step = h();
  nodes_.resize(n);
  weighted_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    nodes_[j] = lo_ + step * static_cast<double>(j);
    const double w = (j == 0 || j + 1 == n) ? 0.5 * step : step;
    weighted_[j] = w * density_[j];
  }
  nodes_[n - 1] = hi_;
}

double GridMeasure::max_density() const noexcept {
  return *std::max_element(density_.begin(), density_.end());
}

double trapezoid(std::span<const double> values, double h) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t j = 1; j + 1 < values.size(); ++j) s += values[j];
  return s * h;
}

GridMeasure make_grid_measure(double lo, double hi, std::vector<double> samples) {
  require(samples.size() >= kMinGridPoints, ErrorKind::GridTooSmall,
          "need at least 16 samples, got " + std::to_string(samples.size()));
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, ErrorKind::BadArgument,
          "grid endpoints must satisfy lo < hi");
  for (double v : samples) {
    require(std::isfinite(v), ErrorKind::InvalidInput, "non-finite density sample");
    require(v >= 0.0, ErrorKind::NegativeDensity, "density sample " + std::to_string(v) + " < 0");
  }
  const double h = (hi - lo) / static_cast<double>(samples.size() - 1);
  const double mass = trapezoid(samples, h);
  require(mass > 0.0, ErrorKind::ZeroMass, "density integrates to zero");
  for (double& v : samples) v /= mass;
  return GridMeasure(lo, hi, std::move(samples));
}

GridMeasure semicircle(double mean, double variance, std::size_t n) {
  require(variance > 0.0, ErrorKind::NonPositiveVariance, "semicircle variance must be > 0");
  const double sigma = std::sqrt(variance);
  const double lo = mean - 2.0 * sigma;
  const double hi = mean + 2.0 * sigma;
  return make_grid_measure(lo, hi, sample(lo, hi, n, [&](double x) {
                             const double r = 4.0 * variance - (x - mean) * (x - mean);
                             return r > 0.0 ? std::sqrt(r) / (2.0 * kPi * variance) : 0.0;
                           }));
}

GridMeasure uniform(double lo, double hi, std::size_t n) {
  return make_grid_measure(lo, hi, std::vector<double>(n, 1.0));
}

GridMeasure bump(std::size_t n) {
  return make_grid_measure(-1.0, 1.0, sample(-1.0, 1.0, n, [](double x) {
                             const double r = 1.0 - x * x;
                             return r > 0.0 ? std::exp(-1.0 / r) : 0.0;
                           }));
}

double cauchy_window(double eps, double tail_mass) {
  require(eps > 0.0, ErrorKind::NonPositiveEps, "Cauchy width must be > 0");
  require(tail_mass > 0.0 && tail_mass < 1.0, ErrorKind::BadArgument, "tail mass must be in (0,1)");
  return eps / std::tan(0.5 * kPi * tail_mass);
}

namespace {

GridMeasure smoothed_on_window(double core, double eps, double tail_mass,
                               const std::function<double(double)>& density) {
  const double half = core + cauchy_window(eps, tail_mass);
  const double h = std::min(eps / 5.0, 2.0 * half / static_cast<double>(kDefaultGridPoints - 1));
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * half / h)) + 1;
  return make_grid_measure(-half, half, sample(-half, half, n, density));
}

}  // namespace

GridMeasure bernoulli_smoothed(double eps, double tail_mass) {
  require(eps > 0.0, ErrorKind::NonPositiveEps, "smoothing width must be > 0");
  return smoothed_on_window(1.0, eps, tail_mass, [eps](double x) {
    auto cauchy = [eps](double u) { return eps / (kPi * (u * u + eps * eps)); };
    return 0.5 * (cauchy(x - 1.0) + cauchy(x + 1.0));
  });
}

GridMeasure uniform_smoothed(double eps, double tail_mass) {
  require(eps > 0.0, ErrorKind::NonPositiveEps, "smoothing width must be > 0");
  return smoothed_on_window(1.0, eps, tail_mass, [eps](double x) {
    return (std::atan((x + 1.0) / eps) - std::atan((x - 1.0) / eps)) / (2.0 * kPi);
  });
}

GridMeasure dilate(const GridMeasure& mu, double lambda) {
  require(lambda > 0.0, ErrorKind::NonPositiveScale, "dilation factor must be > 0");
  std::vector<double> f(mu.density().begin(), mu.density().end());
  for (double& v : f) v /= lambda;
  return make_grid_measure(lambda * mu.lo(), lambda * mu.hi(), std::move(f));
}

GridMeasure translate(const GridMeasure& mu, double shift) {
  return make_grid_measure(mu.lo() + shift, mu.hi() + shift,
                           std::vector<double>(mu.density().begin(), mu.density().end()));
}

std::vector<double> moments(const GridMeasure& mu, std::size_t m) {
  require(m >= 1, ErrorKind::BadArgument, "moment order must be >= 1");
  std::vector<double> out(m, 0.0);
  const auto x = mu.nodes();
  const auto w = mu.weighted();
  for (std::size_t j = 0; j < mu.n(); ++j) {
    double p = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      p *= x[j];
      out[k] += w[j] * p;
    }
  }
  return out;
}

double mean(const GridMeasure& mu) { return moments(mu, 1)[0]; }

double variance(const GridMeasure& mu) {
  const auto m = moments(mu, 2);
  return m[1] - m[0] * m[0];
}

std::vector<double> cdf_nodes(const GridMeasure& mu) {
  const auto f = mu.density();
  std::vector<double> c(mu.n(), 0.0);
  const double h = mu.h();
  for (std::size_t j = 1; j < mu.n(); ++j) c[j] = c[j - 1] + 0.5 * h * (f[j - 1] + f[j]);
  return c;
}

namespace {

double cdf_with(const GridMeasure& mu, std::span<const double> c, double x) {
  if (x <= mu.lo()) return 0.0;
  if (x >= mu.hi()) return 1.0;
  const double h = mu.h();
  const auto j = std::min(static_cast<std::size_t>((x - mu.lo()) / h), mu.n() - 2);
  const double u = x - mu.node(j);
  const auto f = mu.density();
  return c[j] + f[j] * u + (f[j + 1] - f[j]) * u * u / (2.0 * h);
}

}  // namespace

double cdf(const GridMeasure& mu, double x) {
  const auto c = cdf_nodes(mu);
  return cdf_with(mu, c, x);
}

double quantile(const GridMeasure& mu, double q) {
  require(q > 0.0 && q < 1.0, ErrorKind::QuantileOutOfRange, "quantile level must be in (0,1)");
  const auto c = cdf_nodes(mu);
  const double total = c.back();
  const double target = q * total;
  const auto it = std::lower_bound(c.begin(), c.end(), target);
  const auto k = static_cast<std::size_t>(std::distance(c.begin(), it));
  if (k == 0) return mu.lo();
  const std::size_t j = k - 1;
  const auto f = mu.density();
  const double h = mu.h();
  const double a = (f[j + 1] - f[j]) / (2.0 * h);
  const double b = f[j];
  const double r = target - c[j];
  const double disc = std::max(b * b + 4.0 * a * r, 0.0);
  const double denom = b + std::sqrt(disc);
  const double u = denom > 0.0 ? 2.0 * r / denom : h;
  return mu.node(j) + std::clamp(u, 0.0, h);
}

GridMeasure cauchy_smooth(const GridMeasure& mu, double eps, double tail_mass) {
  require(eps > 0.0, ErrorKind::NonPositiveEps, "smoothing width must be > 0");
  const double w = cauchy_window(eps, tail_mass);
  const double lo = mu.lo() - w;
  const double hi = mu.hi() + w;
  const double h_target = std::min(mu.h(), eps / 4.0);
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h_target)) + 1;
  std::vector<double> at(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) at[j] = lo + h * static_cast<double>(j);
  auto f = kernels::omp::cauchy_convolve(mu.lo(), mu.h(), mu.density(), eps, at);
  for (double& v : f) v = std::max(v, 0.0);
  return make_grid_measure(lo, hi, std::move(f));
}

GridMeasure regrid(const GridMeasure& mu, double lo, double hi, std::size_t n) {
  require(n >= kMinGridPoints, ErrorKind::GridTooSmall, "regrid target too small");
  require(lo < hi, ErrorKind::BadArgument, "regrid target must satisfy lo < hi");
  const auto c = cdf_nodes(mu);
  const double hs = mu.h();
  const auto m = monotone_slopes(c, hs);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + h * static_cast<double>(i);
    if (x < mu.lo() || x > mu.hi()) continue;
    const auto j = std::min(static_cast<std::size_t>((x - mu.lo()) / hs), mu.n() - 2);
    const double t = (x - mu.node(j)) / hs;
    // Derivative of the cubic Hermite basis.
    const double d00 = (6.0 * t * t - 6.0 * t) / hs;
    const double d10 = 3.0 * t * t - 4.0 * t + 1.0;
    const double d01 = (-6.0 * t * t + 6.0 * t) / hs;
    const double d11 = 3.0 * t * t - 2.0 * t;
    f[i] = std::max(0.0, d00 * c[j] + d10 * m[j] + d01 * c[j + 1] + d11 * m[j + 1]);
  }
  return make_grid_measure(lo, hi, std::move(f));
}

double cdf_distance(const GridMeasure& mu, const std::function<double(double)>& reference_cdf) {
  const auto c = cdf_nodes(mu);
  double worst = 0.0;
  const double h = mu.h();
  for (std::size_t j = 0; j < mu.n(); ++j) {
    for (double frac : {0.0, 0.5}) {
      const double x = mu.node(j) + frac * h;
      worst = std::max(worst, std::abs(cdf_with(mu, c, x) - reference_cdf(x)));
    }
  }
  worst = std::max(worst, std::abs(reference_cdf(mu.lo() - h)));
  worst = std::max(worst, std::abs(1.0 - reference_cdf(mu.hi() + h)));
  return worst;
}

double cdf_distance(const GridMeasure& mu, const GridMeasure& nu) {
  const auto cn = cdf_nodes(nu);
  const auto cm = cdf_nodes(mu);
  const double a = cdf_distance(mu, [&](double x) { return cdf_with(nu, cn, x); });
  const double b = cdf_distance(nu, [&](double x) { return cdf_with(mu, cm, x); });
  return std::max(a, b);
}

double semicircle_cdf(double x, double mean, double variance) {
  const double y = (x - mean) / std::sqrt(variance);
  if (y <= -2.0) return 0.0;
  if (y >= 2.0) return 1.0;
  return 0.5 + y * std::sqrt(4.0 - y * y) / (4.0 * kPi) + std::asin(0.5 * y) / kPi;
}

nlohmann::json to_json(const GridMeasure& mu) {
  return nlohmann::json{{"lo", mu.lo()}, {"hi", mu.hi()},
                        {"density", std::vector<double>(mu.density().begin(), mu.density().end())}};
}

GridMeasure measure_from_json(const nlohmann::json& j) {
  try {
    return make_grid_measure(j.at("lo").get<double>(), j.at("hi").get<double>(),
                             j.at("density").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed measure JSON: ") + e.what());
  }
}

GridMeasure read_measure_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::InvalidInput, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, path.string() + ": " + e.what());
  }
  return measure_from_json(j);
}

void write_measure_json(const GridMeasure& mu, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::InvalidInput, "cannot write " + path.string());
  out << to_json(mu).dump() << '\n';
}

GridMeasure read_measure_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::InvalidInput, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<double> xs, fs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    require(std::getline(row, a, ',') && std::getline(row, b, ','), ErrorKind::InvalidInput,
            path.string() + ": expected x,f in row " + std::to_string(xs.size() + 2));
    try {
      xs.push_back(std::stod(a));
      fs.push_back(std::stod(b));
    } catch (const std::logic_error&) {
      fail(ErrorKind::InvalidInput, path.string() + ": bad number in row " + std::to_string(xs.size() + 2));
    }
  }
  require(xs.size() >= 2, ErrorKind::GridTooSmall, path.string() + ": fewer than two rows");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    require(std::abs(xs[j] - (xs.front() + h * static_cast<double>(j))) <= 1e-9 * std::max(1.0, std::abs(xs[j])),
            ErrorKind::InvalidInput, path.string() + ": grid is not uniform");
  }
  return make_grid_measure(xs.front(), xs.back(), std::move(fs));
}

void write_measure_csv(const GridMeasure& mu, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::InvalidInput, "cannot write " + path.string());
  out << std::setprecision(17) << "x,f\n";
  const auto f = mu.density();
  for (std::size_t j = 0; j < mu.n(); ++j) out << mu.node(j) << ',' << f[j] << '\n';
}

GridMeasure read_measure(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? read_measure_csv(path) : read_measure_json(path);
}

}  // namespace freeconv
