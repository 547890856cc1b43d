#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gsbmi/divergence.hpp"
#include "gsbmi/grid.hpp"
#include "gsbmi/kernel.hpp"
#include "gsbmi/moments.hpp"
#include "gsbmi/params.hpp"

namespace gsbmi {

/// The two observed samples, their concatenation, and the 0/1 labels
/// (n0 zeros followed by n1 ones). Both groups need at least 2 observations.
struct TwoSampleData {
  std::vector<double> y0;
  std::vector<double> y1;
  std::vector<double> combined;
  std::vector<int> labels;

  std::size_t n0() const { return y0.size(); }
  std::size_t n1() const { return y1.size(); }
  std::size_t n() const { return combined.size(); }

  static TwoSampleData from_samples(std::vector<double> y0, std::vector<double> y1);
};

enum class Method { Auto, Asymptotic, Permutation };

const char* to_string(Method m);

/// Knobs shared by the test pipeline. All randomness flows from seed.
struct RunConfig {
  double level = 0.05;
  Method method = Method::Auto;
  std::size_t n_perm = 500;
  std::size_t grid_points = 512;
  std::optional<double> bandwidth;  // absent: Silverman's rule on the combined sample
  std::uint64_t seed = 0;
  double density_floor = kDensityFloor;
  KernelSpec kernel;
  unsigned n_threads = 0;  // 0: hardware concurrency
};

struct TestResult {
  double i_hat = 0.0;
  NullMoments moments;
  double t_hat = 0.0;
  double p_value = 1.0;
  Method method = Method::Asymptotic;  // resolved method, never Auto
  bool reject = false;
  double level = 0.05;
  double h = 0.0;
  std::uint64_t seed = 0;
  GsbParams params;
  std::size_t n0 = 0, n1 = 0;
};

/// One observation's kernel profile K((Y_i - g_j)/h)/(n h) over the grid
/// points it covers (bounded support keeps rows short).
struct KernelRow {
  std::size_t start = 0;
  std::vector<double> vals;
};

/// KDE products of one data set, reusable across tuning parameters and
/// permutations: bandwidth, grid, marginals, joint slices, and (optionally)
/// the per-observation kernel rows needed to rebuild joint slices under
/// label permutations.
struct KdePlugin {
  double h = 0.0;
  GridAxis axis;
  std::pair<double, double> fx;
  DensityGrid fy;
  std::array<DensityGrid, 2> joint;
  std::vector<KernelRow> kernel_rows;  // empty unless requested
  std::size_t n = 0, n0 = 0, n1 = 0;

  HybridDensity hybrid() const;
  /// Joint slice for x=0 when the observations in `group0` carry label 0.
  /// Requires kernel rows.
  std::vector<double> joint0_for(std::span<const std::size_t> group0) const;
};

KdePlugin prepare_kde(const TwoSampleData& data, const RunConfig& config = {},
                      bool with_rows = false);

/// Plug-in estimate of the generalized mutual information: Silverman
/// bandwidth on the combined sample, KDE marginal and joint slices, then the
/// hybrid-setup divergence.
double estimate_mi(const TwoSampleData& data, const GsbParams& params,
                   const RunConfig& config = {});
double estimate_mi(const KdePlugin& kde, const GsbParams& params,
                   double floor = kDensityFloor);

/// T = n sqrt(h) (I - mu/(n h)) / sigma.
double test_statistic(double i_hat, const NullMoments& moments, std::size_t n, double h);

/// One-sided upper p-value 1 - Phi(t) against N(0,1).
double asymptotic_p_value(double t_hat);

/// Standard normal CDF / quantile helpers shared by the test machinery.
double normal_cdf(double x);
double normal_quantile(double p);

/// Permutation p-value with the add-one rule: bandwidth and grid are frozen
/// at their observed-data values (the combined sample is
/// permutation-invariant), labels are uniformly re-assigned n_perm times,
/// and p = (1 + #{I_b >= I_obs}) / (n_perm + 1).
double permutation_p_value(const TwoSampleData& data, const GsbParams& params,
                           const RunConfig& config);
double permutation_p_value(const KdePlugin& kde, const GsbParams& params,
                           const RunConfig& config);

/// The full pipeline. Method::Auto resolves to Permutation for the
/// power-divergence family (alpha = 0 and beta = 0, whose asymptotic null
/// needs bounded support) and to Asymptotic otherwise.
TestResult run_test(const TwoSampleData& data, const GsbParams& params,
                    const RunConfig& config = {});
TestResult run_test(const KdePlugin& kde, const GsbParams& params, const RunConfig& config);

}  // namespace gsbmi
