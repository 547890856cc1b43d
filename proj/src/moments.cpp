#include "gsbmi/moments.hpp"

#include <cmath>
#include <vector>

#include "gsbmi/errors.hpp"

namespace gsbmi {

const char* to_string(FamilyPath path) {
  switch (path) {
    case FamilyPath::GenericGsb: return "generic-gsb";
    case FamilyPath::PowerDivergence: return "power-divergence";
    case FamilyPath::SDivergence: return "s-divergence";
    case FamilyPath::SquaredL2: return "squared-l2";
    case FamilyPath::Bed: return "bed";
    case FamilyPath::ItakuraSaito: return "itakura-saito";
  }
  return "?";
}

namespace {

NullMoments finish(double mu, double sigma2, FamilyPath path) {
  if (!(sigma2 > 0.0))
    throw DegenerateVariance("null_moments: estimated sigma^2 is not positive");
  return {mu, sigma2, path};
}

}  // namespace

NullMoments null_moments_generic(const GsbParams& params, std::pair<double, double> fx,
                                 const DensityGrid& fy, const KernelConstants& kc,
                                 double floor) {
  const double A = params.A();
  const double B = params.B();
  const double AB = A + B;
  const double beta = params.beta;
  const std::size_t n = fy.size();
  std::vector<double> s(n, 0.0), s2(n, 0.0);
  std::vector<unsigned char> mask(n, 0);
  const double px[2] = {fx.first, fx.second};
  for (std::size_t i = 0; i < n; ++i) {
    if (!(fy.values[i] > floor)) continue;
    mask[i] = 1;
    double acc = 0.0;
    for (int x = 0; x < 2; ++x) {
      const double t = px[x] * fy.values[i];
      double bracket = 0.0;
      if (beta != 0.0)
        bracket += (A * beta) * (A * beta) * std::exp(beta * safe_pow(t, A, floor));
      if (AB != 0.0) bracket += AB * safe_pow(t, B - A, floor);
      acc += safe_pow(t, 2.0 * A - 1.0, floor) * bracket * (1.0 - px[x]);
    }
    s[i] = acc;
    s2[i] = acc * acc;
  }
  const double mu = 0.5 * kc.c1 * trapezoid_masked(s, mask, fy.spacing());
  const double sigma2 = 0.5 * kc.c2 * trapezoid_masked(s2, mask, fy.spacing());
  return finish(mu, sigma2, FamilyPath::GenericGsb);
}

namespace {

// Masked integral of fy^p over {fy > floor}.
double fy_power_integral(const DensityGrid& fy, double p, double floor) {
  const std::size_t n = fy.size();
  std::vector<double> v(n, 0.0);
  std::vector<unsigned char> mask(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(fy.values[i] > floor)) continue;
    mask[i] = 1;
    v[i] = safe_pow(fy.values[i], p, floor);
  }
  return trapezoid_masked(v, mask, fy.spacing());
}

NullMoments moments_power_divergence(std::pair<double, double>, const DensityGrid& fy,
                                     const KernelConstants& kc, double floor) {
  const auto mask = support_mask(fy.values, floor);
  const double supp = mask_measure(mask, fy.spacing());
  return finish(0.5 * kc.c1 * supp, 0.5 * kc.c2 * supp, FamilyPath::PowerDivergence);
}

NullMoments moments_s_divergence(double alpha, std::pair<double, double> fx,
                                 const DensityGrid& fy, const KernelConstants& kc, double floor,
                                 FamilyPath path) {
  const double w = std::pow(fx.first, alpha) * fx.second + std::pow(fx.second, alpha) * fx.first;
  const double mu =
      0.5 * (1.0 + alpha) * kc.c1 * w * fy_power_integral(fy, alpha, floor);
  const double sigma2 = 0.5 * (1.0 + alpha) * (1.0 + alpha) * kc.c2 * w * w *
                        fy_power_integral(fy, 2.0 * alpha, floor);
  return finish(mu, sigma2, path);
}

// Scaled-BED moments (alpha = -1, lambda = 0, beta != 0), on the same scale
// as the GSB divergence. The unscaled BED corollary values are these times
// 2/beta^2 (mean) and 4/beta^4 (variance); the normalized statistic is the
// same either way.
NullMoments moments_bed(double beta, std::pair<double, double> fx, const DensityGrid& fy,
                        const KernelConstants& kc, double floor) {
  const std::size_t n = fy.size();
  std::vector<double> s(n, 0.0), s2(n, 0.0);
  std::vector<unsigned char> mask(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(fy.values[i] > floor)) continue;
    mask[i] = 1;
    const double e0 = std::exp(beta * fx.first * fy.values[i]);
    const double e1 = std::exp(beta * fx.second * fy.values[i]);
    const double acc = beta * beta * fx.first * fx.second * fy.values[i] * (e0 + e1);
    s[i] = acc;
    s2[i] = acc * acc;
  }
  const double mu = 0.5 * kc.c1 * trapezoid_masked(s, mask, fy.spacing());
  const double sigma2 = 0.5 * kc.c2 * trapezoid_masked(s2, mask, fy.spacing());
  return finish(mu, sigma2, FamilyPath::Bed);
}

}  // namespace

NullMoments null_moments(const GsbParams& params, std::pair<double, double> fx,
                         const DensityGrid& fy, const KernelConstants& kc, double floor) {
  if (params.is_power_divergence()) return moments_power_divergence(fx, fy, kc, floor);
  if (params.is_squared_l2())
    return moments_s_divergence(1.0, fx, fy, kc, floor, FamilyPath::SquaredL2);
  if (params.is_s_divergence())
    return moments_s_divergence(params.alpha, fx, fy, kc, floor, FamilyPath::SDivergence);
  if (params.is_scaled_bed()) return moments_bed(params.beta, fx, fy, kc, floor);
  return null_moments_generic(params, fx, fy, kc, floor);
}

NullMoments null_moments_itakura_saito(std::pair<double, double> fx, const DensityGrid& fy,
                                       const KernelConstants& kc, double floor) {
  constexpr double pi = 3.14159265358979323846;
  const double ratio = fx.first / fx.second + fx.second / fx.first;
  const double i1 = fy_power_integral(fy, -1.0, floor);
  const double i2 = fy_power_integral(fy, -2.0, floor);
  const double mu = kc.c1 * ratio * i1 / (4.0 * pi);
  const double sigma2 = kc.c2 * ratio * ratio * i2 / (8.0 * pi * pi);
  if (!(sigma2 > 0.0))
    throw DegenerateVariance("null_moments_itakura_saito: sigma^2 is not positive");
  return {mu, sigma2, FamilyPath::ItakuraSaito};
}

}  // namespace gsbmi
