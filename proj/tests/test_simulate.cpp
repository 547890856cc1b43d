#include <cmath>

#include "doctest.h"
#include "gsbmi/errors.hpp"
#include "gsbmi/simulate.hpp"

using namespace gsbmi;

TEST_CASE("scenario sampling is deterministic in (seed, index)") {
  ScenarioSpec spec;
  spec.sample1 = model2();
  spec.seed = 42;
  const auto a = sample_scenario(spec, 3);
  const auto b = sample_scenario(spec, 3);
  CHECK(hash_data(a) == hash_data(b));
  CHECK(a.combined == b.combined);
  const auto c = sample_scenario(spec, 4);
  CHECK(hash_data(a) != hash_data(c));
}

TEST_CASE("contamination replaces the expected share of sample 0") {
  ScenarioSpec spec;
  spec.contamination = Contamination{0.10, DistSpec{DistSpec::Kind::Normal, 100.0, 0.1}};
  spec.seed = 9;
  double total = 0.0;
  const std::size_t reps = 200;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto d = sample_scenario(spec, r);
    for (double v : d.y0) total += v > 50.0 ? 1.0 : 0.0;
    for (double v : d.y1) CHECK(v < 50.0);
  }
  const double mean_count = total / static_cast<double>(reps);
  // Binomial(100, 0.1): mean 10, SE of the mean over 200 reps ~ 0.21.
  CHECK(mean_count > 9.0);
  CHECK(mean_count < 11.0);
}

TEST_CASE("mixture sampling hits the component weights") {
  RngStream rng(77);
  const auto spec = model2();  // 0.4 N(-1,1) + 0.6 N(1,1): mean 0.2
  double sum = 0.0;
  const int n = 40000;
  int right = 0;
  for (int i = 0; i < n; ++i) {
    const double v = spec.sample(rng);
    sum += v;
    right += v > 0.0;
  }
  CHECK(sum / n == doctest::Approx(0.2).epsilon(0.15));
  // P(Y > 0) = 0.4 Phi(-1) + 0.6 Phi(1) ~ 0.568
  CHECK(static_cast<double>(right) / n == doctest::Approx(0.568).epsilon(0.03));
}

TEST_CASE("epsilon outside [0, 0.5] is rejected") {
  ScenarioSpec spec;
  spec.contamination = Contamination{0.7, contaminant_n52()};
  CHECK_THROWS_AS(sample_scenario(spec, 0), ConfigError);
}

TEST_CASE("study model presets") {
  CHECK(model1().sd == doctest::Approx(1.75));
  CHECK(model2().kind == DistSpec::Kind::Mixture);
  CHECK(model2().w == doctest::Approx(0.4));      // weight on the N(-1,1) component
  CHECK(model2().mean == doctest::Approx(-1.0));
  CHECK(model2().mean2 == doctest::Approx(1.0));
  CHECK(contaminant_n52().sd == doctest::Approx(std::sqrt(2.0)));
  CHECK(default_alpha_grid().size() == 11);
  CHECK(default_lambda_grid().size() == 8);
}

TEST_CASE("run_table shares one data set across the grid and is reproducible") {
  ScenarioSpec spec;
  spec.n0 = spec.n1 = 40;
  spec.replications = 12;
  spec.sample1 = model1();
  spec.seed = 5;
  RunConfig cfg;
  cfg.grid_points = 256;
  cfg.n_perm = 49;

  const std::vector<double> alphas{0.0, 0.5, 1.0};
  const std::vector<double> lambdas{0.0, 0.5};
  const auto t1 = run_table(spec, alphas, lambdas, 0.0, cfg);
  const auto t2 = run_table(spec, alphas, lambdas, 0.0, cfg);

  CHECK(t1.cells == t2.cells);
  CHECK(t1.data_hash == t2.data_hash);
  // the replication data is exactly what sample_scenario yields
  for (std::size_t r = 0; r < spec.replications; ++r)
    CHECK(t1.data_hash[r] == hash_data(sample_scenario(spec, r)));
  for (double c : t1.cells) {
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
  }
  CHECK(t1.cell(0, 1) == t1.cells[1]);

  SUBCASE("independent of the worker count") {
    RunConfig serial = cfg;
    serial.n_threads = 1;
    const auto t3 = run_table(spec, alphas, lambdas, 0.0, serial);
    CHECK(t3.cells == t1.cells);
  }
  SUBCASE("empty grids are rejected") {
    CHECK_THROWS_AS(run_table(spec, {}, lambdas, 0.0, cfg), ConfigError);
  }
}
