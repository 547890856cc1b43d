#include "gsbmi/kde.hpp"

#include <algorithm>
#include <cmath>

#include "gsbmi/errors.hpp"

namespace gsbmi {

GridAxis build_grid(std::span<const double> y, double h, std::size_t n_points) {
  if (n_points < 64) throw ConfigError("build_grid: n_points must be >= 64");
  if (!(h > 0.0)) throw ConfigError("build_grid: bandwidth must be positive");
  if (y.empty()) throw DegenerateSample("build_grid: empty sample");
  const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
  GridAxis axis;
  axis.lo = *mn - 3.0 * h;
  axis.size = n_points;
  axis.spacing = (*mx + 3.0 * h - axis.lo) / static_cast<double>(n_points - 1);
  return axis;
}

std::pair<double, double> estimate_marginal_x(std::span<const int> labels) {
  if (labels.empty()) throw OneGroupEmpty("estimate_marginal_x: empty label vector");
  std::size_t c0 = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw ConfigError("estimate_marginal_x: labels must be 0 or 1");
    c0 += (l == 0);
  }
  if (c0 == 0 || c0 == labels.size())
    throw OneGroupEmpty("estimate_marginal_x: one group has no observations");
  const double n = static_cast<double>(labels.size());
  const double p0 = static_cast<double>(c0) / n;
  return {p0, 1.0 - p0};
}

namespace {

// Adds K((yi - g)/h)/(n h) into acc over the grid points covered by the
// kernel support. Fixed left-to-right summation order per grid point keeps
// results bit-identical regardless of call context.
void accumulate_kernel(std::vector<double>& acc, double yi, double h, const GridAxis& axis,
                       const KernelSpec& kernel, double scale) {
  const double r = kernel.support_radius * h;
  const double lo = yi - r, hi = yi + r;
  auto first = static_cast<long>(std::ceil((lo - axis.lo) / axis.spacing));
  auto last = static_cast<long>(std::floor((hi - axis.lo) / axis.spacing));
  first = std::max(first, 0L);
  last = std::min(last, static_cast<long>(axis.size) - 1L);
  for (long j = first; j <= last; ++j) {
    const double u = (yi - axis.point(static_cast<std::size_t>(j))) / h;
    acc[static_cast<std::size_t>(j)] += scale * kernel_eval(kernel, u);
  }
}

}  // namespace

DensityGrid estimate_marginal_y(std::span<const double> y, double h, const GridAxis& axis,
                                const KernelSpec& kernel) {
  if (!(h > 0.0)) throw ConfigError("estimate_marginal_y: bandwidth must be positive");
  DensityGrid out{axis, std::vector<double>(axis.size, 0.0)};
  const double scale = 1.0 / (static_cast<double>(y.size()) * h);
  for (double yi : y) accumulate_kernel(out.values, yi, h, axis, kernel, scale);
  return out;
}

DensityGrid estimate_joint_xy(std::span<const double> y, std::span<const int> labels, int x,
                              double h, const GridAxis& axis, const KernelSpec& kernel) {
  if (!(h > 0.0)) throw ConfigError("estimate_joint_xy: bandwidth must be positive");
  if (x != 0 && x != 1) throw ConfigError("estimate_joint_xy: x must be 0 or 1");
  if (y.size() != labels.size())
    throw ConfigError("estimate_joint_xy: samples and labels differ in length");
  DensityGrid out{axis, std::vector<double>(axis.size, 0.0)};
  const double scale = 1.0 / (static_cast<double>(y.size()) * h);
  for (std::size_t i = 0; i < y.size(); ++i)
    if (labels[i] == x) accumulate_kernel(out.values, y[i], h, axis, kernel, scale);
  return out;
}

}  // namespace gsbmi
