#include "freeconv/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "freeconv/convolution.hpp"
#include "freeconv/error.hpp"
#include "freeconv/functionals.hpp"
#include "freeconv/rmt.hpp"
#include "freeconv/verify.hpp"

namespace freeconv::cli {

namespace {

double parse_param(const std::string& spec, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::logic_error&) {
  }
  fail(ErrorKind::InvalidInput, "bad parameter in " + spec);
}

void write_json(const nlohmann::json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  require(f.good(), ErrorKind::InvalidInput, "cannot write " + path);
  f << j.dump(2) << '\n';
}

std::vector<verify::Check> run_suite(const std::string& suite, const std::optional<GridMeasure>& given,
                                     const rmt::RunConfig& cfg, std::size_t ns) {
  auto pick = [&](const char* fallback, std::size_t n) { return given ? *given : load_measure(fallback, n); };
  if (suite == "hilbert") return verify::hilbert_suite(pick("builtin:semicircle", 4001));
  if (suite == "kernel") return verify::kernel_suite(pick("builtin:uniform-smoothed:0.05", 0));
  if (suite == "pde") return verify::pde_suite(pick("builtin:uniform-smoothed:0.2", 0));
  if (suite == "variational") return verify::variational_suite(pick("builtin:semicircle", 0), ns);
  if (suite == "rmt") return verify::rmt_suite(pick("builtin:semicircle", 4001), cfg);
  std::vector<verify::Check> all;
  for (const auto& s : verify::kSuites) {
    if (s == "all") continue;
    auto part = run_suite(s, given, cfg, ns);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

}  // namespace

GridMeasure load_measure(const std::string& spec, std::size_t n) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) != 0) return read_measure(spec);
  std::string name = spec.substr(prefix.size());
  std::optional<double> param;
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    param = parse_param(spec, name.substr(colon + 1));
    name = name.substr(0, colon);
  }
  const std::size_t grid = n ? n : kDefaultGridPoints;
  auto no_param = [&] { require(!param, ErrorKind::InvalidInput, spec + " takes no parameter"); };
  if (name == "semicircle") {
    no_param();
    return semicircle(0.0, 1.0, grid);
  }
  if (name == "uniform") {
    no_param();
    return uniform(-1.0, 1.0, grid);
  }
  if (name == "bump") {
    no_param();
    return bump(n ? n : 4001);
  }
  if (name == "bernoulli-smoothed") return bernoulli_smoothed(param.value_or(0.05));
  if (name == "uniform-smoothed") return uniform_smoothed(param.value_or(0.2));
  fail(ErrorKind::InvalidInput, "unknown builtin measure " + spec);
}

int exit_code(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::SolverDiverged:
      case ErrorKind::SeriesNotConverged:
      case ErrorKind::DisconnectedSupport:
        return kExitSolverFailure;
      default:
        return kExitInvalidInput;
    }
  }
  return kExitSolverFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional free convolution powers: computation and numerical checks"};
  app.require_subcommand(1);
  std::size_t grid = 0;
  app.add_option("--grid", grid, "Grid size for builtin measures (0 = default)");

  std::string in, out_path, csv_path;
  double k = 0.0;
  std::size_t n_out = 0;
  auto* power = app.add_subcommand("power", "Compute mu^{boxplus k}");
  power->add_option("--in", in, "Measure JSON / CSV or builtin:<name>");
  power->add_option("--k", k, "Power k >= 1")->required();
  power->add_option("--out", out_path, "Output measure JSON");
  power->add_option("--csv", csv_path, "Output CSV x,f,x_normalized,f_normalized");
  power->add_option("--n-out", n_out, "Output grid size (0 = input size)");

  double k_min = 1.0, k_max = 4.0, tol = 1e-6;
  std::size_t k_count = 31;
  std::vector<double> k_list;
  bool dphi = false;
  auto* scan = app.add_subcommand("scan", "Phi and chi of the normalized powers along a k grid");
  scan->add_option("--in", in)->required();
  scan->add_option("--k-min", k_min);
  scan->add_option("--k-max", k_max);
  scan->add_option("--k-count", k_count);
  scan->add_option("--k", k_list, "Explicit ascending k values starting at 1");
  scan->add_option("--out", out_path, "CSV k,phi,chi (default: stdout)");
  scan->add_option("--tol", tol, "Monotonicity tolerance");
  scan->add_flag("--dphi", dphi, "Also report d/dk Phi at k = 1");

  std::string suite;
  std::uint64_t seed = 7;
  rmt::RunConfig cfg;
  std::size_t ns = 32;
  auto* ver = app.add_subcommand("verify", "Run a suite of numerical checks");
  ver->add_option("--suite", suite, "hilbert | kernel | pde | variational | rmt | all")->required();
  ver->add_option("--in", in);
  ver->add_option("--seed", seed);
  ver->add_option("--n", cfg.n_dim);
  ver->add_option("--trials", cfg.trials);
  ver->add_option("--k", cfg.k);
  ver->add_option("--ns", ns, "Coarse lambda grid; the fine grid doubles it");
  ver->add_option("--out", out_path);

  bool gue = false;
  std::size_t vars = 2;
  double t = 1.0;
  auto* rmtc = app.add_subcommand("rmt", "Monte Carlo minor process");
  rmtc->add_option("--in", in);
  rmtc->add_option("--k", cfg.k);
  rmtc->add_option("--n", cfg.n_dim);
  rmtc->add_option("--trials", cfg.trials);
  rmtc->add_option("--seed", seed)->required();
  rmtc->add_option("--out", out_path);
  rmtc->add_flag("--gue", gue, "GUE variance check instead of the minor process");
  rmtc->add_option("--vars", vars);
  rmtc->add_option("--t", t);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }

  try {
    if (power->parsed()) {
      require(k >= 1.0, ErrorKind::KLessThanOne, "k must be >= 1");
      require(!in.empty(), ErrorKind::InvalidInput, "--in is required");
      require(!out_path.empty() || !csv_path.empty(), ErrorKind::InvalidInput, "give --out and/or --csv");
      const auto mu = load_measure(in, grid);
      PowerOptions opts;
      opts.n_out = n_out;
      const auto p = free_power(mu, k, opts);
      if (!out_path.empty()) write_measure_json(p, out_path);
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        require(f.good(), ErrorKind::InvalidInput, "cannot write " + csv_path);
        f << std::setprecision(17) << "x,f,x_normalized,f_normalized\n";
        const double s = std::sqrt(k);
        const auto d = p.density();
        for (std::size_t j = 0; j < p.n(); ++j) f << p.node(j) << ',' << d[j] << ',' << p.node(j) / s << ',' << d[j] * s << '\n';
      }
      out << "k=" << k << " support=[" << p.lo() << ", " << p.hi() << "] nodes=" << p.n() << '\n';
      return kExitOk;
    }

    if (scan->parsed()) {
      if (k_list.empty()) {
        require(k_count >= 1, ErrorKind::BadArgument, "empty k grid");
        require(k_count == 1 || k_max > k_min, ErrorKind::BadArgument, "k-max must exceed k-min");
        for (std::size_t i = 0; i < k_count; ++i) {
          k_list.push_back(k_count == 1 ? k_min
                                        : k_min + (k_max - k_min) * static_cast<double>(i) /
                                                      static_cast<double>(k_count - 1));
        }
      }
      const auto mu = load_measure(in, grid);
      const auto table = monotonicity_scan(mu, k_list);
      if (out_path.empty()) {
        write_scan_csv(table, out);
      } else {
        write_scan_csv(table, out_path);
      }
      const double worst = std::max(table.phi_increase, table.chi_decrease);
      out << (worst <= tol ? "MONOTONE" : "VIOLATED") << " worst_margin=" << worst
          << " phi_increase=" << table.phi_increase << " chi_decrease=" << table.chi_decrease << " tolerance=" << tol
          << '\n';
      if (dphi) {
        const auto d = dphi_dk_at_one(mu);
        out << "dphi_dk lhs=" << d.lhs << " rhs=" << d.rhs << '\n';
      }
      return kExitOk;
    }

    if (ver->parsed()) {
      require(std::find(verify::kSuites.begin(), verify::kSuites.end(), suite) != verify::kSuites.end(),
              ErrorKind::InvalidInput, "unknown suite " + suite);
      cfg.seed = seed;
      std::optional<GridMeasure> given;
      if (!in.empty()) given = load_measure(in, grid);
      const auto checks = run_suite(suite, given, cfg, ns);
      const bool ok = verify::all_pass(checks);
      nlohmann::json report{{"suite", suite},
                            {"input", in.empty() ? "default" : in},
                            {"config", {{"seed", seed}, {"n", cfg.n_dim}, {"trials", cfg.trials}, {"k", cfg.k}, {"ns", ns}}},
                            {"checks", verify::to_json(checks)},
                            {"pass", ok}};
      write_json(report, out_path, out);
      return ok ? kExitOk : kExitCheckFailed;
    }

    if (rmtc->parsed()) {
      cfg.seed = seed;
      if (gue) {
        const auto start = std::chrono::steady_clock::now();
        auto j = rmt::to_json(rmt::gue_variance_check(vars, cfg.n_dim, t, cfg.trials, seed));
        j["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_json(j, out_path, out);
        return kExitOk;
      }
      rmt::validate(cfg);
      const auto mu = load_measure(in.empty() ? "builtin:semicircle" : in, grid ? grid : 4001);
      auto j = rmt::to_json(rmt::minor_process_check(mu, cfg));
      j["input"] = in.empty() ? "builtin:semicircle" : in;
      write_json(j, out_path, out);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    const auto* fe = dynamic_cast<const Error*>(&e);
    err << "error" << (fe ? " [" + std::string(to_string(fe->kind())) + "]" : std::string()) << ": " << e.what()
        << '\n';
    return exit_code(e);
  }
  return kExitInvalidInput;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace freeconv::cli
