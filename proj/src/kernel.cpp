#include "gsbmi/kernel.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "gsbmi/errors.hpp"
#include "gsbmi/grid.hpp"

namespace gsbmi {

double kernel_eval(const KernelSpec& spec, double u) {
  switch (spec.kind) {
    case KernelKind::Epanechnikov:
      return std::abs(u) <= spec.support_radius ? 0.75 * (1.0 - u * u) : 0.0;
  }
  return 0.0;
}

namespace {

KernelConstants compute_kernel_constants(const KernelSpec& spec, std::size_t quad_points);

}  // namespace

KernelConstants kernel_constants(const KernelSpec& spec, std::size_t quad_points) {
  if (quad_points < 64) throw ConfigError("kernel_constants: quad_points must be >= 64");
  // The Epanechnikov defaults are hit in every test pipeline; memoize them.
  if (spec.kind == KernelKind::Epanechnikov && spec.support_radius == 1.0 &&
      quad_points == 2048) {
    static const KernelConstants cached = compute_kernel_constants(spec, 2048);
    return cached;
  }
  return compute_kernel_constants(spec, quad_points);
}

namespace {

KernelConstants compute_kernel_constants(const KernelSpec& spec, std::size_t quad_points) {
  const double r = spec.support_radius;
  const std::size_t m = quad_points;
  const double du = 2.0 * r / static_cast<double>(m - 1);

  std::vector<double> k2(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = -r + du * static_cast<double>(i);
    const double k = kernel_eval(spec, u);
    k2[i] = k * k;
  }
  KernelConstants kc;
  kc.c1 = trapezoid(k2, du);

  // conv(u) = int K(z) K(z+u) dz on [-2r, 2r], same resolution for the inner
  // integral, then c2 = int conv^2.
  const double dv = 4.0 * r / static_cast<double>(m - 1);
  std::vector<double> conv2(m);
  std::vector<double> inner(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = -2.0 * r + dv * static_cast<double>(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double z = -r + du * static_cast<double>(j);
      inner[j] = kernel_eval(spec, z) * kernel_eval(spec, z + u);
    }
    const double c = trapezoid(inner, du);
    conv2[i] = c * c;
  }
  kc.c2 = trapezoid(conv2, dv);
  return kc;
}

}  // namespace

double bandwidth_silverman(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 2) throw DegenerateSample("bandwidth_silverman: need at least 2 observations");
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw DegenerateSample("bandwidth_silverman: sample has zero spread");
  return 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
}

}  // namespace gsbmi
