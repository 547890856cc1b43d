#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gsbmi/robustness.hpp"
#include "gsbmi/simulate.hpp"
#include "gsbmi/tuning.hpp"
#include "gsbmi/two_sample.hpp"

namespace gsbmi {

/// Single CSV with header columns "group" (0/1) and "y". Malformed rows
/// raise ParseError with the line number; missing columns raise SchemaError.
TwoSampleData load_samples_csv(const std::string& path);

/// Two single-column CSVs ("y" header each), one file per group.
TwoSampleData load_samples_csv(const std::string& path0, const std::string& path1);

/// Stable wire format for a test result: i_hat, mu_hat, sigma_hat, t_hat,
/// p_value, method, reject, params{alpha,lambda,beta,A,B}, n0, n1, h, seed.
/// Doubles round-trip losslessly.
nlohmann::json to_json(const TestResult& result);
TestResult test_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RiskSurface& surface);
nlohmann::json to_json(const RejectionTable& table);
nlohmann::json to_json(const RobustnessReport& report);

/// CSV renderings: the rejection table uses a header row of alpha values and
/// a first column of lambda values; the risk surface uses columns
/// alpha,lambda,beta,p_hat,risk; the robustness curve uses columns y0,if2.
std::string to_csv(const RejectionTable& table);
std::string to_csv(const RiskSurface& surface);
std::string to_csv(const RobustnessReport& report);

void write_text_file(const std::string& path, const std::string& text);

/// Scenario configuration: key=value lines grouped in [model0], [model1],
/// [contamination], [grids] and [run] sections. Distributions take
/// dist=normal|mixture with mean/sd or var keys (mixture adds w, mean2,
/// sd2/var2); [grids] takes comma-separated alpha=, lambda= and a beta=;
/// [run] takes n0, n1, replications, level, n_perm, grid_points, seed.
struct SimulationPlan {
  ScenarioSpec scenario;
  std::vector<double> alpha_grid = default_alpha_grid();
  std::vector<double> lambda_grid = default_lambda_grid();
  double beta = 0.0;
  std::size_t n_perm = 500;
  std::size_t grid_points = 512;
};

SimulationPlan parse_scenario_file(const std::string& path);
SimulationPlan parse_scenario_text(const std::string& text);

}  // namespace gsbmi
