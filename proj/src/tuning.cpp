#include "gsbmi/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "gsbmi/errors.hpp"
#include "gsbmi/parallel.hpp"
#include "gsbmi/rng.hpp"

namespace gsbmi {

namespace {

constexpr std::uint64_t kBootLabel = 0x626f6f74ULL;  // "boot"

TwoSampleData resample_data(const TwoSampleData& data, const ResampleSet& resamples,
                            std::size_t b) {
  const auto& i0 = resamples.idx0[b];
  const auto& i1 = resamples.idx1[b];
  std::vector<double> y0(i0.size()), y1(i1.size());
  if (resamples.rejected) {
    for (std::size_t k = 0; k < i0.size(); ++k) y0[k] = data.y0[i0[k]];
    for (std::size_t k = 0; k < i1.size(); ++k) y1[k] = data.y1[i1[k]];
  } else {
    for (std::size_t k = 0; k < i0.size(); ++k) y0[k] = data.combined[i0[k]];
    for (std::size_t k = 0; k < i1.size(); ++k) y1[k] = data.combined[i1[k]];
  }
  return TwoSampleData::from_samples(std::move(y0), std::move(y1));
}

}  // namespace

ResampleSet make_resamples(const TwoSampleData& data, bool rejected, std::size_t n_resample,
                           std::uint64_t seed) {
  ResampleSet set;
  set.rejected = rejected;
  set.idx0.resize(n_resample);
  set.idx1.resize(n_resample);
  const std::size_t pool0 = rejected ? data.n0() : data.n();
  const std::size_t pool1 = rejected ? data.n1() : data.n();
  for (std::size_t b = 0; b < n_resample; ++b) {
    RngStream rng(seed, kBootLabel, b);
    set.idx0[b].resize(data.n0());
    for (auto& v : set.idx0[b]) v = rng.uniform_int(pool0);
    set.idx1[b].resize(data.n1());
    for (auto& v : set.idx1[b]) v = rng.uniform_int(pool1);
  }
  return set;
}

PilotDecision pilot_decide(const TwoSampleData& data, const GsbParams& pilot, double level,
                           const RunConfig& config) {
  if (!(level > 0.0) || !(level < 1.0))
    throw ConfigError("pilot_decide: level must lie strictly inside (0,1)");
  if (config.method == Method::Asymptotic && pilot.is_power_divergence())
    throw ConfigError(
        "pilot_decide: a power-divergence pilot needs permutation calibration; use Auto");
  RunConfig cfg = config;
  cfg.level = level;
  const TestResult r = run_test(data, pilot, cfg);
  return PilotDecision{pilot, r.p_value, r.reject};
}

RiskEntry estimate_risk(const TwoSampleData& data, const GsbParams& params,
                        const ResampleSet& resamples, bool rejected, double level,
                        const RunConfig& config) {
  const std::size_t B = resamples.idx0.size();
  if (B < 50) throw ConfigError("estimate_risk: need at least 50 resamples");
  const double tau = normal_quantile(1.0 - level);
  const KernelConstants kc = kernel_constants(config.kernel);
  std::vector<unsigned char> exceed(B, 0);
  parallel_for(
      B,
      [&](std::size_t b) {
        const TwoSampleData d = resample_data(data, resamples, b);
        const KdePlugin kde = prepare_kde(d, config);
        const double i_hat = estimate_mi(kde, params, config.density_floor);
        const NullMoments m = null_moments(params, kde.fx, kde.fy, kc, config.density_floor);
        exceed[b] = test_statistic(i_hat, m, kde.n, kde.h) > tau ? 1 : 0;
      },
      config.n_threads);
  const auto count = std::accumulate(exceed.begin(), exceed.end(), std::size_t{0});
  const double p_hat = static_cast<double>(count) / static_cast<double>(B);
  return RiskEntry{params, p_hat, rejected ? 1.0 - p_hat : p_hat};
}

RiskEntry estimate_risk(const TwoSampleData& data, const GsbParams& params,
                        const PilotDecision& decision, std::size_t n_resample, double level,
                        std::uint64_t seed, const RunConfig& config) {
  const ResampleSet set = make_resamples(data, decision.rejected, n_resample, seed);
  return estimate_risk(data, params, set, decision.rejected, level, config);
}

namespace {

struct RiskEvaluator {
  const TwoSampleData& data;
  const ResampleSet& resamples;
  bool rejected;
  double tau;
  const RunConfig& config;
  KernelConstants kc;
  // Cache of per-resample KDEs is deliberately avoided (memory); instead the
  // evaluator batches all pending candidates through each resample once.
  std::map<std::tuple<double, double, double>, double> seen;

  std::vector<double> p_hats(const std::vector<GsbParams>& candidates) {
    const std::size_t B = resamples.idx0.size();
    std::vector<std::size_t> counts(candidates.size(), 0);
    std::vector<std::vector<unsigned char>> exceed(
        B, std::vector<unsigned char>(candidates.size(), 0));
    parallel_for(
        B,
        [&](std::size_t b) {
          const TwoSampleData d = resample_data(data, resamples, b);
          const KdePlugin kde = prepare_kde(d, config);
          for (std::size_t c = 0; c < candidates.size(); ++c) {
            const double i_hat = estimate_mi(kde, candidates[c], config.density_floor);
            const NullMoments m =
                null_moments(candidates[c], kde.fx, kde.fy, kc, config.density_floor);
            exceed[b][c] = test_statistic(i_hat, m, kde.n, kde.h) > tau ? 1 : 0;
          }
        },
        config.n_threads);
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t c = 0; c < candidates.size(); ++c) counts[c] += exceed[b][c];
    std::vector<double> out(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c)
      out[c] = static_cast<double>(counts[c]) / static_cast<double>(B);
    return out;
  }

  double risk_one(const GsbParams& p) {
    const auto key = std::make_tuple(p.alpha, p.lambda, p.beta);
    if (auto it = seen.find(key); it != seen.end()) return it->second;
    const double ph = p_hats({p})[0];
    const double r = rejected ? 1.0 - ph : ph;
    seen.emplace(key, r);
    return r;
  }
};

}  // namespace

RiskSurface select_tuning(const TwoSampleData& data, const GsbParams& pilot,
                          const SearchSpec& search, const TuningOptions& options,
                          const RunConfig& config) {
  if (options.n_resample < 50) throw ConfigError("select_tuning: need at least 50 resamples");
  RiskSurface surface;
  surface.decision = pilot_decide(data, pilot, options.level, config);
  const ResampleSet resamples =
      make_resamples(data, surface.decision.rejected, options.n_resample, options.seed);
  RiskEvaluator eval{data,
                     resamples,
                     surface.decision.rejected,
                     normal_quantile(1.0 - options.level),
                     config,
                     kernel_constants(config.kernel),
                     {}};

  if (const auto* grid = std::get_if<GridSearch>(&search)) {
    std::vector<GsbParams> candidates;
    for (const auto& p : grid->candidates)
      if (options.allow_pd || !p.is_power_divergence()) candidates.push_back(p);
    if (candidates.empty())
      throw ConfigError("select_tuning: search space is empty (PD members are excluded "
                        "unless allow_pd is set)");
    const auto p_hats = eval.p_hats(candidates);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double risk = surface.decision.rejected ? 1.0 - p_hats[c] : p_hats[c];
      surface.entries.push_back(RiskEntry{candidates[c], p_hats[c], risk});
    }
  } else {
    const auto& local = std::get<LocalSearch>(search);
    auto admissible = [&](const GsbParams& p) {
      if (p.alpha < -1.0) return false;
      if (!options.allow_pd && p.is_power_divergence()) return false;
      return true;
    };
    GsbParams current = local.start;
    if (!options.allow_pd && current.is_power_divergence())
      current.alpha += local.step_alpha;  // step off the excluded PD manifold
    if (!admissible(current))
      throw ConfigError("select_tuning: local search start point is not admissible");
    auto record = [&](const GsbParams& p) {
      const double r = eval.risk_one(p);
      for (const auto& e : surface.entries)
        if (e.params == p) return r;
      surface.entries.push_back(RiskEntry{p, surface.decision.rejected ? 1.0 - r : r, r});
      return r;
    };
    double best_risk = record(current);
    double steps[3] = {local.step_alpha, local.step_lambda, local.step_beta};
    for (int round = 0; round < local.rounds; ++round) {
      for (int coord = 0; coord < 3; ++coord) {
        for (double sign : {+1.0, -1.0}) {
          GsbParams cand = current;
          double* field = coord == 0 ? &cand.alpha : coord == 1 ? &cand.lambda : &cand.beta;
          *field += sign * steps[coord];
          if (!admissible(cand)) continue;
          const double r = record(cand);
          if (r < best_risk) {
            best_risk = r;
            current = cand;
          }
        }
      }
      for (double& s : steps) s *= 0.5;
    }
  }

  surface.best = 0;
  for (std::size_t i = 1; i < surface.entries.size(); ++i)
    if (surface.entries[i].risk < surface.entries[surface.best].risk) surface.best = i;
  return surface;
}

}  // namespace gsbmi
