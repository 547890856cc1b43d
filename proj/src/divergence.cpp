#include "gsbmi/divergence.hpp"

#include <cmath>

#include "gsbmi/errors.hpp"

namespace gsbmi {

double extended_bregman(const DensityGrid& g, const DensityGrid& f, const PhiGenerator& phi,
                        double k, double floor) {
  require_same_axis(g, f);
  if (!(k > 0.0)) throw ConfigError("extended_bregman: index k must be positive");
  const std::size_t n = g.size();
  std::vector<double> integrand(n, 0.0);
  std::vector<unsigned char> mask(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(f.values[i] > floor)) continue;
    mask[i] = 1;
    const double gk = safe_pow(g.values[i], k, floor);
    const double fk = safe_pow(f.values[i], k, floor);
    integrand[i] = phi.evaluate(gk) - phi.evaluate(fk) - (gk - fk) * phi.d1(fk);
  }
  return trapezoid_masked(integrand, mask, g.spacing());
}

double gsb_integrand(double g, double f, const GsbParams& params, double floor) {
  const double cg = g < floor ? floor : g;
  const double cf = f < floor ? floor : f;
  const double lg = std::log(cg);
  const double lf = std::log(cf);
  const double beta = params.beta;

  if (params.a_is_limit() || params.b_is_limit()) {
    if (std::abs(params.alpha + 1.0) <= kLimitTol) return 0.0;
    const double ap1 = 1.0 + params.alpha;
    const double gp = std::exp(ap1 * lg);
    const double fp = std::exp(ap1 * lf);
    if (params.a_is_limit()) {
      // A -> 0: the exponential part of the integrand vanishes.
      return fp * (lf - lg) - (fp - gp) / ap1;
    }
    // B -> 0 (A = 1 + alpha).
    double s = gp * (lg - lf) - (gp - fp) / ap1;
    if (beta != 0.0)
      s += std::exp(beta * fp) * (beta * fp - beta * gp - 1.0) + std::exp(beta * gp);
    return s;
  }

  const double A = params.A();
  const double B = params.B();
  const double AB = A + B;
  const double gA = std::exp(A * lg);
  const double fA = std::exp(A * lf);
  double s = (std::exp(AB * lg) - std::exp(AB * lf)) / B;
  if (AB != 0.0) s -= (gA - fA) * (AB / (A * B)) * std::exp(B * lf);
  if (beta != 0.0)
    s += std::exp(beta * fA) * (beta * fA - beta * gA - 1.0) + std::exp(beta * gA);
  return s;
}

double gsb_divergence(const DensityGrid& g, const DensityGrid& f, const GsbParams& params,
                      double floor) {
  require_same_axis(g, f);
  const std::size_t n = g.size();
  std::vector<double> integrand(n, 0.0);
  std::vector<unsigned char> mask(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(f.values[i] > floor)) continue;
    mask[i] = 1;
    integrand[i] = gsb_integrand(g.values[i], f.values[i], params, floor);
  }
  return trapezoid_masked(integrand, mask, g.spacing());
}

HybridDensity make_hybrid(double p0, double p1, DensityGrid joint0, DensityGrid joint1) {
  if (!(p0 > 0.0) || !(p1 > 0.0))
    throw OneGroupEmpty("make_hybrid: both marginal probabilities must be positive");
  if (std::abs(p0 + p1 - 1.0) > 1e-9)
    throw ConfigError("make_hybrid: marginal probabilities must sum to 1");
  require_same_axis(joint0, joint1);
  HybridDensity hd;
  hd.fx = {p0, p1};
  hd.fy = DensityGrid{joint0.axis, std::vector<double>(joint0.size())};
  for (std::size_t i = 0; i < joint0.size(); ++i)
    hd.fy.values[i] = joint0.values[i] + joint1.values[i];
  hd.joint = {std::move(joint0), std::move(joint1)};
  return hd;
}

HybridDensity make_product_hybrid(double p0, double p1, DensityGrid fy) {
  DensityGrid j0{fy.axis, fy.values};
  DensityGrid j1{fy.axis, fy.values};
  for (auto& v : j0.values) v *= p0;
  for (auto& v : j1.values) v *= p1;
  return make_hybrid(p0, p1, std::move(j0), std::move(j1));
}

double mi_hybrid(const HybridDensity& hd, const GsbParams& params, double floor) {
  const std::size_t n = hd.fy.size();
  std::vector<double> integrand(n, 0.0);
  std::vector<unsigned char> mask(n, 0);
  double total = 0.0;
  for (int x = 0; x < 2; ++x) {
    const double px = hd.fx_of(x);
    const auto& slice = hd.joint[static_cast<std::size_t>(x)];
    require_same_axis(slice, hd.fy);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(hd.fy.values[i] > floor)) {
        mask[i] = 0;
        integrand[i] = 0.0;
        continue;
      }
      mask[i] = 1;
      integrand[i] = gsb_integrand(slice.values[i], px * hd.fy.values[i], params, floor);
    }
    total += trapezoid_masked(integrand, mask, hd.fy.spacing());
  }
  return total;
}

}  // namespace gsbmi
