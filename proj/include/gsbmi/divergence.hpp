#pragma once

#include <array>
#include <utility>

#include "gsbmi/grid.hpp"
#include "gsbmi/params.hpp"
#include "gsbmi/phi.hpp"

namespace gsbmi {

/// Extended Bregman divergence with index k:
///   int { phi(g^k) - phi(f^k) - (g^k - f^k) phi'(f^k) }
/// integrated over {f > floor} by the masked trapezoid rule. Both grids must
/// share the same axis; k must be positive.
double extended_bregman(const DensityGrid& g, const DensityGrid& f, const PhiGenerator& phi,
                        double k, double floor = kDensityFloor);

/// GSB integrand at a single point (g, f) >= 0. Dispatches between the
/// direct form and the A->0 / B->0 limit forms, and returns 0 when alpha is
/// within the limit tolerance of -1 in a limit case.
double gsb_integrand(double g, double f, const GsbParams& params, double floor = kDensityFloor);

/// GSB divergence between two densities on a shared grid, over {f > floor}.
double gsb_divergence(const DensityGrid& g, const DensityGrid& f, const GsbParams& params,
                      double floor = kDensityFloor);

/// Binary x discrete marginal plus per-x continuous joint slices on a shared
/// grid; fy is the pointwise sum of the slices.
struct HybridDensity {
  std::pair<double, double> fx;
  std::array<DensityGrid, 2> joint;
  DensityGrid fy;

  double fx_of(int x) const { return x == 0 ? fx.first : fx.second; }
};

/// Assembles a HybridDensity from the marginal probabilities and the two
/// joint slices; fy is recomputed as their sum. Validates p0 + p1 = 1,
/// positivity, and shared axes.
HybridDensity make_hybrid(double p0, double p1, DensityGrid joint0, DensityGrid joint1);

/// A product-form (null) hybrid: joint slices p_x * fy.
HybridDensity make_product_hybrid(double p0, double p1, DensityGrid fy);

/// Mutual information in the hybrid setup: the GSB integrand with
/// g = joint slice x, f = p_x * fy, summed over x and integrated over
/// {fy > floor}. Zero iff the slices are pointwise products.
double mi_hybrid(const HybridDensity& hd, const GsbParams& params,
                 double floor = kDensityFloor);

}  // namespace gsbmi
