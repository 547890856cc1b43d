#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "gsbmi/grid.hpp"
#include "gsbmi/kernel.hpp"

namespace gsbmi {

/// Uniform grid spanning [min(y) - 3h, max(y) + 3h] with n_points points
/// (n_points >= 64). The 3h margin captures the full mass of a
/// bounded-support kernel.
GridAxis build_grid(std::span<const double> y, double h, std::size_t n_points = 512);

/// Relative frequencies of the two labels: (count0/n, count1/n). Labels must
/// be 0/1 and both groups nonempty.
std::pair<double, double> estimate_marginal_x(std::span<const int> labels);

/// f_hat_Y(g) = (1/(n h)) sum_i K((Y_i - g)/h) at every grid point.
DensityGrid estimate_marginal_y(std::span<const double> y, double h, const GridAxis& axis,
                                const KernelSpec& kernel = {});

/// The joint slice f_hat_{X,Y}(x, .): the same kernel sum restricted to
/// observations with label x. The two slices add up to estimate_marginal_y
/// exactly (identical summands).
DensityGrid estimate_joint_xy(std::span<const double> y, std::span<const int> labels, int x,
                              double h, const GridAxis& axis, const KernelSpec& kernel = {});

}  // namespace gsbmi
