#include "gsbmi/two_sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsbmi/errors.hpp"
#include "gsbmi/kde.hpp"
#include "gsbmi/parallel.hpp"
#include "gsbmi/rng.hpp"

namespace gsbmi {

TwoSampleData TwoSampleData::from_samples(std::vector<double> y0, std::vector<double> y1) {
  if (y0.size() < 2 || y1.size() < 2)
    throw OneGroupEmpty("TwoSampleData: both groups need at least 2 observations");
  TwoSampleData d;
  d.combined.reserve(y0.size() + y1.size());
  d.combined.insert(d.combined.end(), y0.begin(), y0.end());
  d.combined.insert(d.combined.end(), y1.begin(), y1.end());
  d.labels.assign(y0.size(), 0);
  d.labels.insert(d.labels.end(), y1.size(), 1);
  d.y0 = std::move(y0);
  d.y1 = std::move(y1);
  return d;
}

const char* to_string(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Asymptotic: return "asymptotic";
    case Method::Permutation: return "permutation";
  }
  return "?";
}

HybridDensity KdePlugin::hybrid() const {
  return make_hybrid(fx.first, fx.second, joint[0], joint[1]);
}

std::vector<double> KdePlugin::joint0_for(std::span<const std::size_t> group0) const {
  std::vector<double> acc(axis.size, 0.0);
  for (std::size_t i : group0) {
    const auto& row = kernel_rows[i];
    for (std::size_t j = 0; j < row.vals.size(); ++j) acc[row.start + j] += row.vals[j];
  }
  return acc;
}

KdePlugin prepare_kde(const TwoSampleData& data, const RunConfig& config, bool with_rows) {
  KdePlugin kde;
  kde.n = data.n();
  kde.n0 = data.n0();
  kde.n1 = data.n1();
  kde.h = config.bandwidth ? *config.bandwidth : bandwidth_silverman(data.combined);
  if (!(kde.h > 0.0)) throw ConfigError("prepare_kde: bandwidth must be positive");
  kde.axis = build_grid(data.combined, kde.h, config.grid_points);
  kde.fx = estimate_marginal_x(data.labels);
  kde.joint[0] =
      estimate_joint_xy(data.combined, data.labels, 0, kde.h, kde.axis, config.kernel);
  kde.joint[1] =
      estimate_joint_xy(data.combined, data.labels, 1, kde.h, kde.axis, config.kernel);
  // fy as the pointwise sum keeps the additivity identity exact.
  kde.fy = DensityGrid{kde.axis, std::vector<double>(kde.axis.size)};
  for (std::size_t j = 0; j < kde.axis.size; ++j)
    kde.fy.values[j] = kde.joint[0].values[j] + kde.joint[1].values[j];

  if (with_rows) {
    kde.kernel_rows.resize(kde.n);
    const double r = config.kernel.support_radius * kde.h;
    const double scale = 1.0 / (static_cast<double>(kde.n) * kde.h);
    for (std::size_t i = 0; i < kde.n; ++i) {
      const double yi = data.combined[i];
      auto first = static_cast<long>(std::ceil((yi - r - kde.axis.lo) / kde.axis.spacing));
      auto last = static_cast<long>(std::floor((yi + r - kde.axis.lo) / kde.axis.spacing));
      first = std::max(first, 0L);
      last = std::min(last, static_cast<long>(kde.axis.size) - 1L);
      KernelRow row;
      row.start = static_cast<std::size_t>(first);
      row.vals.reserve(static_cast<std::size_t>(std::max(0L, last - first + 1)));
      for (long j = first; j <= last; ++j) {
        const double u = (yi - kde.axis.point(static_cast<std::size_t>(j))) / kde.h;
        row.vals.push_back(scale * kernel_eval(config.kernel, u));
      }
      kde.kernel_rows[i] = std::move(row);
    }
  }
  return kde;
}

namespace {

// Hybrid-setup divergence straight from slice/marginal buffers; the hot path
// shared by estimate_mi and the permutation loop.
double mi_from_slices(std::span<const double> joint0, std::span<const double> joint1,
                      std::span<const double> fy, std::pair<double, double> fx,
                      double spacing, const GsbParams& params, double floor) {
  const std::size_t n = fy.size();
  double total = 0.0;
  for (int x = 0; x < 2; ++x) {
    const double px = x == 0 ? fx.first : fx.second;
    const auto& slice = x == 0 ? joint0 : joint1;
    std::vector<double> integrand(n, 0.0);
    std::vector<unsigned char> mask(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(fy[i] > floor)) continue;
      mask[i] = 1;
      integrand[i] = gsb_integrand(slice[i], px * fy[i], params, floor);
    }
    total += trapezoid_masked(integrand, mask, spacing);
  }
  return total;
}

}  // namespace

double estimate_mi(const KdePlugin& kde, const GsbParams& params, double floor) {
  return mi_from_slices(kde.joint[0].values, kde.joint[1].values, kde.fy.values, kde.fx,
                        kde.axis.spacing, params, floor);
}

double estimate_mi(const TwoSampleData& data, const GsbParams& params, const RunConfig& config) {
  return estimate_mi(prepare_kde(data, config), params, config.density_floor);
}

double test_statistic(double i_hat, const NullMoments& moments, std::size_t n, double h) {
  if (!(h > 0.0)) throw ConfigError("test_statistic: bandwidth must be positive");
  const double sigma = std::sqrt(moments.sigma2);
  if (!(sigma > 0.0)) throw DegenerateVariance("test_statistic: sigma must be positive");
  const double nn = static_cast<double>(n);
  return nn * std::sqrt(h) * (i_hat - moments.mu / (nn * h)) / sigma;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) throw ConfigError("normal_quantile: p must be in (0,1)");
  // Acklam's rational approximation, polished by one Halley step.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

double asymptotic_p_value(double t_hat) { return 1.0 - normal_cdf(t_hat); }

double permutation_p_value(const KdePlugin& kde, const GsbParams& params,
                           const RunConfig& config) {
  if (config.n_perm < 19) throw ConfigError("permutation_p_value: n_perm must be >= 19");
  if (kde.kernel_rows.empty())
    throw ConfigError("permutation_p_value: KDE plugin prepared without kernel rows");
  const double floor = config.density_floor;
  const double i_obs = estimate_mi(kde, params, floor);

  std::vector<std::size_t> exceed(config.n_perm, 0);
  parallel_for(
      config.n_perm,
      [&](std::size_t b) {
        RngStream rng(config.seed, /*label=*/0x7065726dULL, b);
        std::vector<std::size_t> idx(kde.n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        rng.shuffle(idx.begin(), idx.end());
        const auto joint0 =
            kde.joint0_for(std::span<const std::size_t>(idx.data(), kde.n0));
        std::vector<double> joint1(kde.axis.size);
        for (std::size_t j = 0; j < joint1.size(); ++j)
          joint1[j] = kde.fy.values[j] - joint0[j];
        const double i_b = mi_from_slices(joint0, joint1, kde.fy.values, kde.fx,
                                          kde.axis.spacing, params, floor);
        exceed[b] = i_b >= i_obs ? 1 : 0;
      },
      config.n_threads);

  const std::size_t count = std::accumulate(exceed.begin(), exceed.end(), std::size_t{0});
  return static_cast<double>(1 + count) / static_cast<double>(config.n_perm + 1);
}

double permutation_p_value(const TwoSampleData& data, const GsbParams& params,
                           const RunConfig& config) {
  return permutation_p_value(prepare_kde(data, config, /*with_rows=*/true), params, config);
}

TestResult run_test(const KdePlugin& kde, const GsbParams& params, const RunConfig& config) {
  if (!(config.level > 0.0) || !(config.level < 1.0))
    throw ConfigError("run_test: level must lie strictly inside (0,1)");
  Method method = config.method;
  if (method == Method::Auto)
    method = params.is_power_divergence() ? Method::Permutation : Method::Asymptotic;

  TestResult result;
  result.params = params;
  result.level = config.level;
  result.h = kde.h;
  result.seed = config.seed;
  result.n0 = kde.n0;
  result.n1 = kde.n1;
  result.method = method;
  result.i_hat = estimate_mi(kde, params, config.density_floor);
  const auto kc = kernel_constants(config.kernel);
  result.moments = null_moments(params, kde.fx, kde.fy, kc, config.density_floor);
  result.t_hat = test_statistic(result.i_hat, result.moments, kde.n, kde.h);
  result.p_value = method == Method::Permutation ? permutation_p_value(kde, params, config)
                                                 : asymptotic_p_value(result.t_hat);
  result.reject = result.p_value <= config.level;
  return result;
}

TestResult run_test(const TwoSampleData& data, const GsbParams& params,
                    const RunConfig& config) {
  Method method = config.method;
  if (method == Method::Auto)
    method = params.is_power_divergence() ? Method::Permutation : Method::Asymptotic;
  const bool with_rows = method == Method::Permutation;
  return run_test(prepare_kde(data, config, with_rows), params, config);
}

}  // namespace gsbmi
