#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gsbmi/errors.hpp"

namespace gsbmi {

/// Grid points with f_y at or below this value are treated as outside the
/// {f_y > 0} integration domain. Keeps fractional powers of near-zero
/// densities out of the integrands.
inline constexpr double kDensityFloor = 1e-12;

/// Uniformly spaced abscissae: point(i) = lo + i*spacing, i = 0..size-1.
struct GridAxis {
  double lo = 0.0;
  double spacing = 0.0;
  std::size_t size = 0;

  double point(std::size_t i) const { return lo + spacing * static_cast<double>(i); }
  double hi() const { return point(size - 1); }

  bool operator==(const GridAxis& other) const = default;
};

/// A density discretized on a uniform grid. Values are nonnegative; for a
/// probability density the trapezoid integral is ~1.
struct DensityGrid {
  GridAxis axis;
  std::vector<double> values;

  double spacing() const { return axis.spacing; }
  std::size_t size() const { return values.size(); }
};

inline void require_same_axis(const DensityGrid& a, const DensityGrid& b) {
  if (!(a.axis == b.axis) || a.values.size() != b.values.size())
    throw GridMismatch("density grids do not share the same axis");
}

/// Plain trapezoid rule over the whole grid.
inline double trapezoid(std::span<const double> values, double spacing) {
  if (values.size() < 2) return 0.0;
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
  return acc * spacing;
}

inline double trapezoid(const DensityGrid& g) { return trapezoid(g.values, g.spacing()); }

/// Marks the {f > floor} region of a density.
inline std::vector<unsigned char> support_mask(std::span<const double> density,
                                               double floor = kDensityFloor) {
  std::vector<unsigned char> mask(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) mask[i] = density[i] > floor ? 1 : 0;
  return mask;
}

/// Trapezoid rule of the integrand zero-extended outside the mask. For an
/// indicator integrand this equals (count of masked points)*spacing whenever
/// the mask does not touch the grid ends, which is the support-measure
/// convention used for the power-divergence moments.
inline double trapezoid_masked(std::span<const double> integrand,
                               std::span<const unsigned char> mask, double spacing) {
  if (integrand.size() < 2) return 0.0;
  double acc = 0.5 * (mask.front() ? integrand.front() : 0.0) +
               0.5 * (mask.back() ? integrand.back() : 0.0);
  for (std::size_t i = 1; i + 1 < integrand.size(); ++i)
    if (mask[i]) acc += integrand[i];
  return acc * spacing;
}

/// Lebesgue measure of the masked region under the convention above.
inline double mask_measure(std::span<const unsigned char> mask, double spacing) {
  std::size_t n = 0;
  double edge = 0.5 * ((mask.front() ? 1.0 : 0.0) + (mask.back() ? 1.0 : 0.0));
  for (std::size_t i = 1; i + 1 < mask.size(); ++i) n += mask[i];
  return (static_cast<double>(n) + edge) * spacing;
}

/// x^p computed as exp(p*log(max(x, floor))); avoids NaN/overflow for
/// fractional powers of tiny values.
inline double safe_pow(double x, double p, double floor = kDensityFloor) {
  if (p == 0.0) return 1.0;
  if (p == 1.0) return x < floor ? floor : x;
  const double c = x < floor ? floor : x;
  return std::exp(p * std::log(c));
}

}  // namespace gsbmi
