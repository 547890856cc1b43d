#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsbmi/divergence.hpp"
#include "gsbmi/kernel.hpp"
#include "gsbmi/params.hpp"

namespace gsbmi {

/// A contamination point t0 = (x0, y0) in {0,1} x R.
struct ContaminationPoint {
  int x0 = 0;
  double y0 = 0.0;
};

/// How the continuous Dirac point mass is realized inside the influence
/// integrals. Bump replaces delta_{y0} by a normalized uniform window of
/// width eta; Evaluation expands the square and resolves every
/// int g(y) delta^j dy, j >= 1, as g(y0).
struct DeltaPolicy {
  enum class Kind { Bump, Evaluation };
  Kind kind = Kind::Bump;
  double eta = 0.05;
};

enum class Region { S1, S2, S3, S4, Unstable };

const char* to_string(Region r);

/// Second-order influence function of the GSB mutual information at t0
/// under a product-form (null) hybrid. Always nonnegative. Under Bump the
/// window must lie inside the grid (PolicyDomain otherwise) and the
/// integrand is masked at the density floor.
double if2_null(const GsbParams& params, const HybridDensity& hd, const ContaminationPoint& t0,
                const DeltaPolicy& policy = {});

/// Central finite difference of the contaminated divergence at eps = 0 under
/// the Bump policy; identically ~0 when hd is product-form (the first-order
/// influence function vanishes under the null).
double if1_null_check(const GsbParams& params, const HybridDensity& hd,
                      const ContaminationPoint& t0, double eps_step = 1e-4,
                      const DeltaPolicy& policy = {});

/// IF2 evaluated over a y0 grid with the gross-error sensitivity (sup) and
/// the region classification. Bump points whose window falls below the
/// density floor (or outside the grid) are skipped, so the default range
/// [-20, 20] works on a discretized standard-normal null.
struct RobustnessReport {
  std::vector<double> y0;
  std::vector<double> if2;
  double ges2 = 0.0;
  Region region = Region::Unstable;
  DeltaPolicy policy;
  std::optional<double> breakdown;
  GsbParams params;
};

RobustnessReport ges_curve(const GsbParams& params, const HybridDensity& hd, int x0 = 0,
                           double y_lo = -20.0, double y_hi = 20.0, std::size_t n_eval = 201,
                           const DeltaPolicy& policy = {});

/// Membership in the stability regions, checked in the listed order:
///   S1: alpha > 0, beta = 0
///   S2: alpha > 0, alpha != 1, beta != 0, lambda = 1/(alpha-1) (tol 1e-9)
///   S3: alpha = -1, lambda > -1/4, beta != 0
///   S4: alpha > 0, lambda(1-alpha) > -1/2, beta != 0
Region region_classify(const GsbParams& params);

/// Slope of the local asymptotic power at contiguous alternatives:
/// S = IF2(t0) / (2 sigma), with sigma from the population null moments of
/// hd. Local power at shift d is 1 - Phi(tau_c - d^2 S).
double local_power_slope(const GsbParams& params, const HybridDensity& hd,
                         const ContaminationPoint& t0, const KernelConstants& kc,
                         const DeltaPolicy& policy = {});

/// Power influence function at t1 = t0:
/// (d/sigma) IF2 phi1(tau_c - d^2 IF2 / (2 sigma)), phi1 the standard normal
/// density.
double pif(const GsbParams& params, const HybridDensity& hd, const ContaminationPoint& t1,
           double d, double level, const KernelConstants& kc, const DeltaPolicy& policy = {});

/// The level influence function is identically zero under the null.
inline constexpr double kLevelInfluence = 0.0;

/// Closed-form lower bound on the asymptotic breakdown point:
/// min{ (B/(1+alpha))^{1/A}, 1 - (B/(1+alpha))^{1/A}, 1/2 } for beta = 0
/// with A > 0 and B >= 0 (power divergence needs -1 <= lambda <= 0; the DPD
/// form alpha/(1+alpha) is the lambda = 0 case). Absent when beta != 0, where
/// the bound depends on the contaminating sequences.
std::optional<double> breakdown_bound(const GsbParams& params);

}  // namespace gsbmi
