#pragma once

#include <utility>

#include "gsbmi/divergence.hpp"
#include "gsbmi/grid.hpp"
#include "gsbmi/kernel.hpp"
#include "gsbmi/params.hpp"

namespace gsbmi {

/// Which closed form produced the null moments.
enum class FamilyPath { GenericGsb, PowerDivergence, SDivergence, SquaredL2, Bed, ItakuraSaito };

const char* to_string(FamilyPath path);

/// Centring and scaling constants of the null limit: T is asymptotically
/// N(0,1) with centring mu/(n h) and scaling sigma/(n sqrt(h)).
struct NullMoments {
  double mu = 0.0;
  double sigma2 = 0.0;
  FamilyPath family_path = FamilyPath::GenericGsb;
};

/// Null moments for the GSB family with plug-in marginals. Dispatches on the
/// sub-family tags of params to the matching closed form (power divergence,
/// squared L2, S-divergence, scaled BED) and otherwise evaluates the generic
/// expression. All values are on the same scale as the GSB divergence, so
/// (I, mu, sigma) stay consistent in the normalized statistic. Throws
/// DegenerateVariance when sigma^2 <= 0.
NullMoments null_moments(const GsbParams& params, std::pair<double, double> fx,
                         const DensityGrid& fy, const KernelConstants& kc,
                         double floor = kDensityFloor);

/// The generic path of Eqs. above without sub-family dispatch; exposed so the
/// closed forms can be cross-checked against it.
NullMoments null_moments_generic(const GsbParams& params, std::pair<double, double> fx,
                                 const DensityGrid& fy, const KernelConstants& kc,
                                 double floor = kDensityFloor);

/// Null moments of the Itakura-Saito mutual information (index k = 1,
/// generator -log(t)/(2 pi)). The integrals involve 1/f_y and 1/f_y^2, so
/// they are extremely sensitive to the support floor on unbounded supports.
NullMoments null_moments_itakura_saito(std::pair<double, double> fx, const DensityGrid& fy,
                                       const KernelConstants& kc, double floor = kDensityFloor);

}  // namespace gsbmi
