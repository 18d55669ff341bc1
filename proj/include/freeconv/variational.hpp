#pragma once
// Quantile coordinates lambda(s, y) of the free power family, defined by
// mu^{boxplus 1/s}((-inf, lambda/s]) = y/s on 0 < y < s <= 1, the Lagrangian
// L = log lambda_y + log|sin(pi lambda_s / lambda_y)|, and the density flow
// of the normalized powers.

#include <filesystem>
#include <vector>

#include "freeconv/measure.hpp"

namespace freeconv {

inline constexpr double kInterlacingTol = 1e-6;
inline constexpr double kBoundaryLayer = 0.1;

/// Rectangular storage in (s, u = y/s): lambda(i, j) = lambda(s_i, u_j s_i),
/// s_i = i/ns for i = 1..ns, u_j = (j - 1/2)/ny.
struct LambdaField {
  std::vector<double> s_grid;
  std::vector<double> u_grid;
  /// Row-major, ns x ny.
  std::vector<double> lambda;
  double ds = 0.0;
  double du = 0.0;
  /// mu^{boxplus 1/s_i}, kept for the density / Hilbert checks.
  std::vector<GridMeasure> slices;

  std::size_t ns() const noexcept { return s_grid.size(); }
  std::size_t ny() const noexcept { return u_grid.size(); }
  double at(std::size_t i, std::size_t j) const { return lambda[i * ny() + j]; }
  double y(std::size_t i, std::size_t j) const { return u_grid[j] * s_grid[i]; }
};

/// Partial derivatives d_s lambda, d_y lambda at fixed y and s respectively.
struct LambdaGradient {
  std::vector<double> ls;
  std::vector<double> ly;
};

/// (k d/dk + x/2 d/dx) f_k - (1/pi)(Hf f' - f Hf')/(Hf^2 + f^2) - f_k/2 for
/// the normalized family f_k, sup over nodes with f_k >= 1% of its maximum
/// that lie in the inner 80% of the support.
/// n_out = 0 keeps the input grid size.
double flow_residual(const GridMeasure& mu, double k, double dk, std::size_t n_out = 0);

/// ns, ny >= 16. Throws DisconnectedSupport if a slice density vanishes
/// inside its support.
LambdaField lambda_field(const GridMeasure& mu, std::size_t ns, std::size_t ny);

/// Centered differences in (s, u), one-sided on the rectangle edges.
LambdaGradient lambda_gradient(const LambdaField& field);

/// Throws NonPositiveLambdaY, ConeBoundary (lambda_s / lambda_y an integer).
double lagrangian_density(double lambda_s, double lambda_y);
double lagrangian_ds(double lambda_s, double lambda_y);
double lagrangian_dy(double lambda_s, double lambda_y);

/// d_s L_s + d_y L_y on the nodes, NaN outside the interior
/// (boundary layer kBoundaryLayer on each side in s and u).
std::vector<double> euler_lagrange_residual(const LambdaField& field);
double max_interior(const std::vector<double>& residual);

struct InterlacingReport {
  /// 0 <= d_s lambda <= d_y lambda.
  std::size_t violations = 0;
  /// -d_y lambda <= d_s lambda <= 0, the orientation of Cauchy interlacing
  /// for minors of increasing size.
  std::size_t reflected_violations = 0;
  std::size_t interior_nodes = 0;
  /// Most negative margin of the first cone and its location.
  double worst_margin = 0.0;
  double worst_s = 0.0;
  double worst_y = 0.0;
  double worst_reflected_margin = 0.0;
};

InterlacingReport interlacing_check(const LambdaField& field, const LambdaGradient& grad);
InterlacingReport interlacing_check(const LambdaField& field);

struct GtConsistency {
  /// sup |f(lambda/s) d_y lambda - 1|.
  double r1 = 0.0;
  /// sup |Hf(lambda/s) d_y lambda - cot(pi d_s lambda / d_y lambda)|.
  double r2 = 0.0;
};

/// Uses field.slices when present, else recomputes them from mu.
GtConsistency gt_consistency(const LambdaField& field, const GridMeasure& mu);

/// Rows s,y,lambda.
void write_lambda_csv(const LambdaField& field, const std::filesystem::path& path);
/// Rows s,y,residual over the interior.
void write_residual_csv(const LambdaField& field, const std::vector<double>& residual,
                        const std::filesystem::path& path);

}  // namespace freeconv
