#pragma once

#include <cstddef>
#include <span>

namespace gsbmi {

enum class KernelKind { Epanechnikov };

/// A symmetric, bounded-support kernel. support_radius is the half-width of
/// {K > 0} (1 for Epanechnikov).
struct KernelSpec {
  KernelKind kind = KernelKind::Epanechnikov;
  double support_radius = 1.0;
};

/// K(u); (3/4)(1-u^2) on [-1,1] for the Epanechnikov kernel, 0 outside.
double kernel_eval(const KernelSpec& spec, double u);

/// c1 = int K^2(u) du and c2 = int (int K(z)K(z+u) dz)^2 du, the kernel
/// factors of the null centring and scaling constants.
struct KernelConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Computes the kernel constants by trapezoid quadrature over the kernel
/// support (the inner convolution of c2 uses a grid of the same resolution).
/// quad_points must be >= 64.
KernelConstants kernel_constants(const KernelSpec& spec, std::size_t quad_points = 2048);

/// Silverman's rule of thumb 1.06 * sd(y) * n^{-1/5}, with the
/// (n-1)-denominator standard deviation. Throws DegenerateSample when n < 2
/// or the sample has zero spread.
double bandwidth_silverman(std::span<const double> y);

}  // namespace gsbmi
