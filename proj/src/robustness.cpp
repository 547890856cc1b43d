#include "gsbmi/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gsbmi/errors.hpp"
#include "gsbmi/moments.hpp"
#include "gsbmi/two_sample.hpp"

namespace gsbmi {

const char* to_string(Region r) {
  switch (r) {
    case Region::S1: return "S1";
    case Region::S2: return "S2";
    case Region::S3: return "S3";
    case Region::S4: return "S4";
    case Region::Unstable: return "unstable";
  }
  return "?";
}

namespace {

// Weight of the squared contamination direction in the GSB influence
// integrand at t = f_x f_y:
//   A^2 beta^2 e^{beta t^A} t^{2A} + (A+B) t^{A+B}.
double influence_weight(const GsbParams& params, double t, double floor) {
  const double A = params.A();
  const double AB = A + params.B();
  double w = 0.0;
  if (params.beta != 0.0) {
    const double tA = safe_pow(t, A, floor);
    w += A * A * params.beta * params.beta * std::exp(params.beta * tA) *
         safe_pow(t, 2.0 * A, floor);
  }
  if (AB != 0.0) w += AB * safe_pow(t, AB, floor);
  return w;
}

// Grid realization of the unit-mass window: 2k+1 nodes centred on the node
// nearest y0, covering ~eta, at height 1/(2k*spacing) so the trapezoid
// integral of the profile is exactly 1. Node-centred snapping keeps the
// realization symmetric on symmetric grids.
struct BumpProfile {
  std::size_t first = 0, last = 0;  // inclusive node range
  double height = 0.0;
};

BumpProfile bump_profile(const GridAxis& axis, double y0, double eta) {
  if (!(eta > 0.0)) throw ConfigError("bump width eta must be positive");
  if (y0 - 0.5 * eta < axis.lo || y0 + 0.5 * eta > axis.hi())
    throw PolicyDomain("bump window extends outside the density grid");
  const auto center = static_cast<long>(std::lround((y0 - axis.lo) / axis.spacing));
  const auto half = static_cast<long>(std::lround(0.5 * eta / axis.spacing));
  if (half < 1)
    throw PolicyDomain("bump width eta is below the grid resolution (need >= 2 nodes)");
  const long first = center - half;
  const long last = center + half;
  if (first < 0 || last >= static_cast<long>(axis.size))
    throw PolicyDomain("bump window extends outside the density grid");
  BumpProfile b;
  b.first = static_cast<std::size_t>(first);
  b.last = static_cast<std::size_t>(last);
  b.height = 1.0 / (static_cast<double>(last - first) * axis.spacing);
  return b;
}

double linear_interp(const DensityGrid& g, double y) {
  const auto& ax = g.axis;
  if (y <= ax.lo) return g.values.front();
  if (y >= ax.hi()) return g.values.back();
  const double s = (y - ax.lo) / ax.spacing;
  const auto i = static_cast<std::size_t>(s);
  const double frac = s - static_cast<double>(i);
  return g.values[i] * (1.0 - frac) + g.values[i + 1] * frac;
}

}  // namespace

double if2_null(const GsbParams& params, const HybridDensity& hd, const ContaminationPoint& t0,
                const DeltaPolicy& policy) {
  if (t0.x0 != 0 && t0.x0 != 1) throw ConfigError("if2_null: x0 must be 0 or 1");
  const auto& fy = hd.fy;
  const std::size_t n = fy.size();
  const double floor = kDensityFloor;
  // The contamination direction factorizes per x:
  //   Delta_x/f_x + Delta_y/f_y - Delta_{x,y}/(f_x f_y) = w_x (1 - delta(y)/f_y)
  // with w_{x0} = (1 - f_{x0})/f_{x0} and w_{1-x0} = -1.
  const double px0 = hd.fx_of(t0.x0);
  const double wx[2] = {t0.x0 == 0 ? (1.0 - px0) / px0 : -1.0,
                        t0.x0 == 1 ? (1.0 - px0) / px0 : -1.0};

  double total = 0.0;
  if (policy.kind == DeltaPolicy::Kind::Bump) {
    const BumpProfile bump = bump_profile(fy.axis, t0.y0, policy.eta);
    std::vector<double> integrand(n, 0.0);
    std::vector<unsigned char> mask(n, 0);
    for (int x = 0; x < 2; ++x) {
      const double px = hd.fx_of(x);
      const double w2 = wx[x] * wx[x];
      for (std::size_t i = 0; i < n; ++i) {
        if (!(fy.values[i] > floor)) {
          mask[i] = 0;
          integrand[i] = 0.0;
          continue;
        }
        mask[i] = 1;
        const double b =
            (i >= bump.first && i <= bump.last) ? bump.height : 0.0;
        const double dir = 1.0 - b / fy.values[i];
        integrand[i] = influence_weight(params, px * fy.values[i], floor) * w2 * dir * dir;
      }
      total += trapezoid_masked(integrand, mask, fy.spacing());
    }
    return total;
  }

  // Evaluation policy: expand the square and resolve every delta^j term,
  // j >= 1, by point evaluation at y0.
  const double fy0 = linear_interp(fy, t0.y0);
  std::vector<double> integrand(n, 0.0);
  std::vector<unsigned char> mask(n, 0);
  for (int x = 0; x < 2; ++x) {
    const double px = hd.fx_of(x);
    const double w2 = wx[x] * wx[x];
    for (std::size_t i = 0; i < n; ++i) {
      if (!(fy.values[i] > floor)) {
        mask[i] = 0;
        integrand[i] = 0.0;
        continue;
      }
      mask[i] = 1;
      integrand[i] = influence_weight(params, px * fy.values[i], floor) * w2;
    }
    double part = trapezoid_masked(integrand, mask, fy.spacing());
    if (fy0 > floor) {
      const double w_at = influence_weight(params, px * fy0, floor) * w2;
      part += -2.0 * w_at / fy0 + w_at / (fy0 * fy0);
    }
    total += part;
  }
  return total;
}

double if1_null_check(const GsbParams& params, const HybridDensity& hd,
                      const ContaminationPoint& t0, double eps_step,
                      const DeltaPolicy& policy) {
  if (!(eps_step > 0.0)) throw ConfigError("if1_null_check: eps_step must be positive");
  const auto& fy = hd.fy;
  const std::size_t n = fy.size();
  const BumpProfile bump = bump_profile(fy.axis, t0.y0, policy.eta);
  const double floor = kDensityFloor;

  auto contaminated_mi = [&](double eps) {
    std::vector<double> integrand(n, 0.0);
    std::vector<unsigned char> mask(n, 0);
    double total = 0.0;
    const double fx_eps[2] = {
        (1.0 - eps) * hd.fx.first + (t0.x0 == 0 ? eps : 0.0),
        (1.0 - eps) * hd.fx.second + (t0.x0 == 1 ? eps : 0.0)};
    for (int x = 0; x < 2; ++x) {
      for (std::size_t i = 0; i < n; ++i) {
        const double b = (i >= bump.first && i <= bump.last) ? bump.height : 0.0;
        const double fy_eps = std::max(0.0, (1.0 - eps) * fy.values[i] + eps * b);
        if (!(fy_eps > floor)) {
          mask[i] = 0;
          integrand[i] = 0.0;
          continue;
        }
        mask[i] = 1;
        const double joint_eps =
            std::max(0.0, (1.0 - eps) * hd.joint[static_cast<std::size_t>(x)].values[i] +
                              (x == t0.x0 ? eps * b : 0.0));
        integrand[i] = gsb_integrand(joint_eps, fx_eps[x] * fy_eps, params, floor);
      }
      total += trapezoid_masked(integrand, mask, fy.spacing());
    }
    return total;
  };

  // Fourth-order central stencil: the divergence is even in eps to leading
  // order under the null, so the plain two-point difference leaves an
  // O(eps^2 D''') residue above the 1e-5 target.
  const double e = eps_step;
  return (-contaminated_mi(2.0 * e) + 8.0 * contaminated_mi(e) - 8.0 * contaminated_mi(-e) +
          contaminated_mi(-2.0 * e)) /
         (12.0 * e);
}

RobustnessReport ges_curve(const GsbParams& params, const HybridDensity& hd, int x0,
                           double y_lo, double y_hi, std::size_t n_eval,
                           const DeltaPolicy& policy) {
  if (!(y_hi > y_lo) || !std::isfinite(y_lo) || !std::isfinite(y_hi))
    throw ConfigError("ges_curve: need a finite range with y_hi > y_lo");
  if (n_eval < 2) throw ConfigError("ges_curve: n_eval must be >= 2");
  RobustnessReport report;
  report.policy = policy;
  report.params = params;
  report.region = region_classify(params);
  report.breakdown = breakdown_bound(params);
  const double step = (y_hi - y_lo) / static_cast<double>(n_eval - 1);
  const double floor = kDensityFloor;
  for (std::size_t i = 0; i < n_eval; ++i) {
    const double y0 = y_lo + step * static_cast<double>(i);
    if (policy.kind == DeltaPolicy::Kind::Bump) {
      // Skip points whose window leaves the grid or dips below the density
      // floor; the supremum is over the effective support.
      BumpProfile bump;
      try {
        bump = bump_profile(hd.fy.axis, y0, policy.eta);
      } catch (const PolicyDomain&) {
        continue;
      }
      bool above_floor = true;
      for (std::size_t j = bump.first; j <= bump.last; ++j)
        if (!(hd.fy.values[j] > floor)) {
          above_floor = false;
          break;
        }
      if (!above_floor) continue;
    }
    report.y0.push_back(y0);
    report.if2.push_back(if2_null(params, hd, ContaminationPoint{x0, y0}, policy));
  }
  if (report.if2.empty())
    throw PolicyDomain("ges_curve: no evaluable contamination points in the given range");
  report.ges2 = *std::max_element(report.if2.begin(), report.if2.end());
  return report;
}

Region region_classify(const GsbParams& params) {
  constexpr double manifold_tol = 1e-9;
  const double a = params.alpha, l = params.lambda, b = params.beta;
  if (a > 0.0 && b == 0.0) return Region::S1;
  if (a > 0.0 && a != 1.0 && b != 0.0 && std::abs(l - 1.0 / (a - 1.0)) <= manifold_tol)
    return Region::S2;
  if (a == -1.0 && l > -0.25 && b != 0.0) return Region::S3;
  if (a > 0.0 && l * (1.0 - a) > -0.5 && b != 0.0) return Region::S4;
  return Region::Unstable;
}

double local_power_slope(const GsbParams& params, const HybridDensity& hd,
                         const ContaminationPoint& t0, const KernelConstants& kc,
                         const DeltaPolicy& policy) {
  const NullMoments m = null_moments(params, hd.fx, hd.fy, kc);
  const double sigma = std::sqrt(m.sigma2);
  return if2_null(params, hd, t0, policy) / (2.0 * sigma);
}

double pif(const GsbParams& params, const HybridDensity& hd, const ContaminationPoint& t1,
           double d, double level, const KernelConstants& kc, const DeltaPolicy& policy) {
  if (d < 0.0) throw ConfigError("pif: shift d must be nonnegative");
  if (!(level > 0.0) || !(level < 1.0)) throw ConfigError("pif: level must be in (0,1)");
  const NullMoments m = null_moments(params, hd.fx, hd.fy, kc);
  const double sigma = std::sqrt(m.sigma2);
  const double if2 = if2_null(params, hd, t1, policy);
  const double tau = normal_quantile(1.0 - level);
  const double arg = tau - d * d * if2 / (2.0 * sigma);
  constexpr double inv_sqrt2pi = 0.39894228040143267794;
  return d / sigma * if2 * inv_sqrt2pi * std::exp(-0.5 * arg * arg);
}

std::optional<double> breakdown_bound(const GsbParams& params) {
  if (params.beta != 0.0) return std::nullopt;  // density-dependent, no closed form
  const double A = params.A();
  const double B = params.B();
  if (!(params.alpha > -1.0) || !(A > 0.0) || B < 0.0) return std::nullopt;
  const double ratio = B / (1.0 + params.alpha);
  const double e1 = ratio <= 0.0 ? 0.0 : std::pow(ratio, 1.0 / A);
  return std::min({e1, 1.0 - e1, 0.5});
}

}  // namespace gsbmi
