#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsbmi/rng.hpp"
#include "gsbmi/two_sample.hpp"

namespace gsbmi {

/// A sampling distribution: a normal or a two-component normal mixture.
/// Means/sds are in sd units (the scenario file accepts var= keys and
/// converts).
struct DistSpec {
  enum class Kind { Normal, Mixture };
  Kind kind = Kind::Normal;
  double mean = 0.0, sd = 1.0;
  // Mixture: weight w on component 1, 1-w on component 2.
  double w = 0.5;
  double mean2 = 0.0, sd2 = 1.0;

  double sample(RngStream& rng) const;
};

/// Fixed scenario presets used throughout the simulation study:
/// model 0 is N(0,1); model 1 is N(0, 1.75^2); model 2 is the mixture
/// 0.4 N(-1,1) + 0.6 N(1,1).
DistSpec model0();
DistSpec model1();
DistSpec model2();
/// The contaminating distribution N(5, 2) (variance 2).
DistSpec contaminant_n52();

struct Contamination {
  double epsilon = 0.0;  // in [0, 0.5]
  DistSpec dist;
};

struct ScenarioSpec {
  DistSpec sample0 = model0();
  DistSpec sample1 = model0();
  std::optional<Contamination> contamination;  // applied to sample 0
  std::size_t n0 = 100, n1 = 100;
  std::size_t replications = 200;
  double level = 0.05;
  std::uint64_t seed = 0;
};

/// Draws the two samples of one replication. Each observation of sample 0 is
/// independently replaced by a contaminant draw with probability epsilon.
/// The stream is derived from (seed, replication_index), so a fixed pair
/// yields bit-identical samples.
TwoSampleData sample_scenario(const ScenarioSpec& spec, std::uint64_t replication_index);

/// Rejection proportions over a (lambda, alpha) grid at one beta.
struct RejectionTable {
  std::vector<double> alpha_grid;   // columns
  std::vector<double> lambda_grid;  // rows
  double beta = 0.0;
  std::vector<double> cells;       // row-major, lambda x alpha
  std::vector<double> se;          // binomial standard errors, same layout
  std::size_t replications = 0;
  std::vector<std::uint64_t> data_hash;  // per-replication hash of the drawn data

  double cell(std::size_t li, std::size_t ai) const { return cells[li * alpha_grid.size() + ai]; }
  double cell_se(std::size_t li, std::size_t ai) const { return se[li * alpha_grid.size() + ai]; }
};

/// Monte Carlo table: every replication draws one data set and evaluates all
/// grid cells on it (one KDE per replication, shared across cells).
/// Power-divergence cells (alpha = 0 with beta = 0) are calibrated by
/// permutation with config.n_perm; all others use the asymptotic normal
/// null. Replications run in parallel with per-replication derived RNG
/// streams, so results do not depend on the worker count.
RejectionTable run_table(const ScenarioSpec& spec, const std::vector<double>& alpha_grid,
                         const std::vector<double>& lambda_grid, double beta,
                         const RunConfig& config = {});

/// FNV-1a hash of the raw bytes of both samples; used to assert that every
/// cell of a replication saw identical data.
std::uint64_t hash_data(const TwoSampleData& data);

/// Default study grids: alpha 0..1 step 0.1 and
/// lambda {-0.5,-0.3,-0.2,-0.1,0,0.25,0.5,1}.
std::vector<double> default_alpha_grid();
std::vector<double> default_lambda_grid();

}  // namespace gsbmi
