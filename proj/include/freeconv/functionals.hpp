#pragma once
// Free Fisher information, free entropy and their behaviour under free powers.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "freeconv/measure.hpp"

namespace freeconv {

/// (4 pi^2 / 3) int f^3.
double fisher_information(const GridMeasure& mu);
/// 4 pi^2 int f (Hf)^2, over the central `interior` fraction of [lo, hi].
double fisher_via_score(const GridMeasure& mu, double interior = 1.0);
/// J = 2 pi Hf at the nodes.
std::vector<double> score(const GridMeasure& mu);

/// int int log|x - y| dmu dmu + 3/4 + log(2 pi)/2. The inner integral is
/// the exact log potential of the piecewise-linear density.
double free_entropy(const GridMeasure& mu);

/// Entropy from the integral of 1/(1+t) - Phi(mu boxplus sqrt(t) sc) over
/// [0, t_max] (adaptive Simpson in log(1+t), `steps` initial panels) plus
/// the tail with Phi ~ 1/(kappa_2 + t). Requires t_max >= 50.
double entropy_via_flow(const GridMeasure& mu, double t_max = 50.0, int steps = 16);

struct ScanRow {
  double k;
  double phi;
  double chi;
};

struct ScanTable {
  std::vector<ScanRow> rows;
  /// max over consecutive rows of phi[i+1] - phi[i], floored at 0.
  double phi_increase = 0.0;
  /// max over consecutive rows of chi[i] - chi[i+1], floored at 0.
  double chi_decrease = 0.0;
};

/// Phi and chi of k^{-1/2} mu^{boxplus k} along an ascending grid starting at 1.
ScanTable monotonicity_scan(const GridMeasure& mu, std::span<const double> k_grid);
void write_scan_csv(const ScanTable& table, std::ostream& out);
void write_scan_csv(const ScanTable& table, const std::filesystem::path& path);

struct DerivativePair {
  /// Finite difference of Phi(k^{-1/2} mu^{boxplus k}) at k = 1.
  double lhs;
  /// Closed quadrature of the first variation formula.
  double rhs;
};

/// The powers live on the detected support unless `fixed_window`.
DerivativePair dphi_dk_at_one(const GridMeasure& mu, bool fixed_window = false);
/// (8 pi^2/3) int f^3 + 4 pi int (Hf f' - f (Hf)') f^2 / ((Hf)^2 + f^2).
double dphi_dk_formula(const GridMeasure& mu);

}  // namespace freeconv
