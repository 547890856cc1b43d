#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "gsbmi/params.hpp"
#include "gsbmi/two_sample.hpp"

namespace gsbmi {

/// Outcome of the pilot test (Steps 2-3 of the selection algorithm).
struct PilotDecision {
  GsbParams pilot;
  double p1 = 1.0;
  bool rejected = false;
};

struct RiskEntry {
  GsbParams params;
  double p_hat = 0.0;
  double risk = 1.0;
};

/// Risk estimates over the searched candidates; best is the argmin index
/// (ties broken by listed order).
struct RiskSurface {
  std::vector<RiskEntry> entries;
  std::size_t best = 0;
  PilotDecision decision;

  const RiskEntry& best_entry() const { return entries[best]; }
};

/// Precomputed bootstrap index sets so that every candidate sees the same
/// resamples (common random numbers). When the pilot rejected, group b draws
/// indices into y0 and y1 separately; otherwise both index the pooled
/// sample.
struct ResampleSet {
  bool rejected = false;
  std::vector<std::vector<std::size_t>> idx0;  // B x n0
  std::vector<std::vector<std::size_t>> idx1;  // B x n1
};

ResampleSet make_resamples(const TwoSampleData& data, bool rejected, std::size_t n_resample,
                           std::uint64_t seed);

/// Step 2-3: run the test with the pilot parameters and record p1 and the
/// decision. The pilot must not be a power-divergence member when the
/// method resolves to Asymptotic-only semantics are required; Auto handles
/// it via permutation.
PilotDecision pilot_decide(const TwoSampleData& data, const GsbParams& pilot, double level,
                           const RunConfig& config = {});

/// Steps 4-6: bootstrap resamples (with replacement at the original group
/// sizes), the asymptotic statistic per resample, P = #{T_b > tau_c}/B, and
/// risk = 1 - P if the pilot rejected else P.
RiskEntry estimate_risk(const TwoSampleData& data, const GsbParams& params,
                        const PilotDecision& decision, std::size_t n_resample, double level,
                        std::uint64_t seed, const RunConfig& config = {});

/// Same, on a shared ResampleSet (used by select_tuning so risk differences
/// between candidates are low-variance).
RiskEntry estimate_risk(const TwoSampleData& data, const GsbParams& params,
                        const ResampleSet& resamples, bool rejected, double level,
                        const RunConfig& config = {});

/// Search space: an explicit grid, or derivative-free coordinate descent
/// from a start point (3 rounds with step halving).
struct GridSearch {
  std::vector<GsbParams> candidates;
};

struct LocalSearch {
  GsbParams start;
  double step_alpha = 0.2;
  double step_lambda = 0.25;
  double step_beta = 0.05;
  int rounds = 3;
};

using SearchSpec = std::variant<GridSearch, LocalSearch>;

struct TuningOptions {
  std::size_t n_resample = 200;
  double level = 0.05;
  std::uint64_t seed = 0;
  /// Power-divergence members are dropped from Grid searches unless set:
  /// the resample decision rule compares T to the normal quantile, whose
  /// calibration the PD family lacks on unbounded supports.
  bool allow_pd = false;
};

/// Step 7: evaluates the risk of every candidate on common resample indices
/// and returns the surface with the argmin. LocalSearch keeps candidates
/// inside alpha >= -1 and, unless allow_pd, steps around PD members.
RiskSurface select_tuning(const TwoSampleData& data, const GsbParams& pilot,
                          const SearchSpec& search, const TuningOptions& options,
                          const RunConfig& config = {});

}  // namespace gsbmi
