#include "gsbmi/simulate.hpp"

#include <cmath>
#include <cstring>

#include "gsbmi/errors.hpp"
#include "gsbmi/moments.hpp"
#include "gsbmi/parallel.hpp"
#include "gsbmi/rng.hpp"

namespace gsbmi {

double DistSpec::sample(RngStream& rng) const {
  switch (kind) {
    case Kind::Normal:
      return rng.normal(mean, sd);
    case Kind::Mixture:
      return rng.uniform() < w ? rng.normal(mean, sd) : rng.normal(mean2, sd2);
  }
  return 0.0;
}

DistSpec model0() { return DistSpec{DistSpec::Kind::Normal, 0.0, 1.0, 0.5, 0.0, 1.0}; }
DistSpec model1() { return DistSpec{DistSpec::Kind::Normal, 0.0, 1.75, 0.5, 0.0, 1.0}; }
DistSpec model2() { return DistSpec{DistSpec::Kind::Mixture, -1.0, 1.0, 0.4, 1.0, 1.0}; }
DistSpec contaminant_n52() {
  return DistSpec{DistSpec::Kind::Normal, 5.0, std::sqrt(2.0), 0.5, 0.0, 1.0};
}

namespace {
constexpr std::uint64_t kScenarioLabel = 0x7363656eULL;  // "scen"
constexpr std::uint64_t kTableLabel = 0x7461626cULL;     // "tabl"
}  // namespace

TwoSampleData sample_scenario(const ScenarioSpec& spec, std::uint64_t replication_index) {
  if (spec.n0 < 2 || spec.n1 < 2)
    throw ConfigError("sample_scenario: both group sizes must be >= 2");
  if (spec.contamination &&
      (spec.contamination->epsilon < 0.0 || spec.contamination->epsilon > 0.5))
    throw ConfigError("sample_scenario: contamination epsilon must lie in [0, 0.5]");
  RngStream rng(spec.seed, kScenarioLabel, replication_index);
  std::vector<double> y0(spec.n0), y1(spec.n1);
  for (auto& v : y0) {
    if (spec.contamination && rng.uniform() < spec.contamination->epsilon)
      v = spec.contamination->dist.sample(rng);
    else
      v = spec.sample0.sample(rng);
  }
  for (auto& v : y1) v = spec.sample1.sample(rng);
  return TwoSampleData::from_samples(std::move(y0), std::move(y1));
}

std::uint64_t hash_data(const TwoSampleData& data) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  auto mix = [&h](const std::vector<double>& v) {
    for (double d : v) {
      std::uint64_t bits;
      std::memcpy(&bits, &d, sizeof bits);
      for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffULL;
        h *= 1099511628211ULL;
      }
    }
  };
  mix(data.y0);
  mix(data.y1);
  return h;
}

RejectionTable run_table(const ScenarioSpec& spec, const std::vector<double>& alpha_grid,
                         const std::vector<double>& lambda_grid, double beta,
                         const RunConfig& config) {
  if (alpha_grid.empty() || lambda_grid.empty())
    throw ConfigError("run_table: parameter grids must be nonempty");
  if (spec.replications < 1) throw ConfigError("run_table: need at least one replication");

  const std::size_t n_cells = alpha_grid.size() * lambda_grid.size();
  const std::size_t reps = spec.replications;
  bool any_pd = false;
  for (double a : alpha_grid)
    if (a == 0.0 && beta == 0.0) any_pd = true;

  const KernelConstants kc = kernel_constants(config.kernel);
  const double tau = normal_quantile(1.0 - spec.level);

  std::vector<unsigned char> rejections(reps * n_cells, 0);
  std::vector<std::uint64_t> hashes(reps, 0);

  parallel_for(
      reps,
      [&](std::size_t r) {
        const TwoSampleData data = sample_scenario(spec, r);
        hashes[r] = hash_data(data);
        // Every cell of this replication shares the one KDE below.
        const KdePlugin kde = prepare_kde(data, config, /*with_rows=*/any_pd);
        RunConfig perm_cfg = config;
        perm_cfg.level = spec.level;
        perm_cfg.seed = detail::splitmix64(spec.seed ^ kTableLabel ^ r);
        perm_cfg.n_threads = 1;  // replications already run in parallel
        for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
          for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai) {
            const GsbParams params{alpha_grid[ai], lambda_grid[li], beta};
            bool reject;
            if (params.is_power_divergence()) {
              reject = permutation_p_value(kde, params, perm_cfg) <= spec.level;
            } else {
              const double i_hat = estimate_mi(kde, params, config.density_floor);
              const NullMoments m =
                  null_moments(params, kde.fx, kde.fy, kc, config.density_floor);
              reject = test_statistic(i_hat, m, kde.n, kde.h) > tau;
            }
            rejections[r * n_cells + li * alpha_grid.size() + ai] = reject ? 1 : 0;
          }
        }
      },
      config.n_threads);

  RejectionTable table;
  table.alpha_grid = alpha_grid;
  table.lambda_grid = lambda_grid;
  table.beta = beta;
  table.replications = reps;
  table.data_hash = std::move(hashes);
  table.cells.resize(n_cells);
  table.se.resize(n_cells);
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < reps; ++r) count += rejections[r * n_cells + cell];
    const double p = static_cast<double>(count) / static_cast<double>(reps);
    table.cells[cell] = p;
    table.se[cell] = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
  }
  return table;
}

std::vector<double> default_alpha_grid() {
  return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
}

std::vector<double> default_lambda_grid() {
  return {-0.5, -0.3, -0.2, -0.1, 0.0, 0.25, 0.5, 1.0};
}

}  // namespace gsbmi
