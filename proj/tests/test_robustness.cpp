#include <cmath>
#include <vector>

#include "doctest.h"
#include "gsbmi/divergence.hpp"
#include "gsbmi/errors.hpp"
#include "gsbmi/robustness.hpp"
#include "gsbmi/rng.hpp"
#include "gsbmi/two_sample.hpp"

using namespace gsbmi;

namespace {

constexpr double kPi = 3.14159265358979323846;

HybridDensity standard_null(double p0 = 0.5, double span = 21.0, std::size_t n = 8401) {
  GridAxis axis{-span, 2.0 * span / static_cast<double>(n - 1), n};
  DensityGrid fy{axis, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double y = axis.point(i);
    fy.values[i] = std::exp(-0.5 * y * y) / std::sqrt(2.0 * kPi);
  }
  return make_product_hybrid(p0, 1.0 - p0, std::move(fy));
}

HybridDensity dependent_toy(double c = 0.6, double span = 12.0, std::size_t n = 4801) {
  GridAxis axis{-span, 2.0 * span / static_cast<double>(n - 1), n};
  DensityGrid j0{axis, std::vector<double>(n)}, j1 = j0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = axis.point(i);
    const double fy = std::exp(-0.5 * y * y) / std::sqrt(2.0 * kPi);
    j0.values[i] = 0.5 * fy * (1.0 + c * std::tanh(y));
    j1.values[i] = 0.5 * fy * (1.0 - c * std::tanh(y));
  }
  return make_hybrid(0.5, 0.5, std::move(j0), std::move(j1));
}

}  // namespace

TEST_CASE("region classification") {
  CHECK(region_classify(GsbParams{0.5, 2.0, 0.0}) == Region::S1);
  CHECK(region_classify(GsbParams{0.0, 0.0, 0.0}) == Region::Unstable);
  CHECK(region_classify(GsbParams{0.0, 0.75, 0.0}) == Region::Unstable);
  CHECK(region_classify(GsbParams{-1.0, 0.0, -0.05}) == Region::S3);
  CHECK(region_classify(GsbParams{-1.0, -0.3, -0.05}) == Region::Unstable);
  // S2: lambda on the 1/(alpha-1) manifold with beta != 0
  CHECK(region_classify(GsbParams{0.5, -2.0, -0.05}) == Region::S2);
  CHECK(region_classify(GsbParams{0.5, -2.0 + 1e-12, -0.05}) == Region::S2);
  // off the manifold but with lambda(1-alpha) > -1/2: S4
  CHECK(region_classify(GsbParams{0.5, 0.3, -0.05}) == Region::S4);
  CHECK(region_classify(GsbParams{2.0, -0.3, -0.05}) == Region::S4);
  // outside every region
  CHECK(region_classify(GsbParams{0.5, -1.5, -0.05}) == Region::Unstable);
  CHECK(region_classify(GsbParams{-0.5, 0.3, -0.05}) == Region::Unstable);
}

TEST_CASE("closed-form breakdown bounds") {
  SUBCASE("DPD values") {
    CHECK(*breakdown_bound(GsbParams{0.0, 0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(*breakdown_bound(GsbParams{0.5, 0.0, 0.0}) == doctest::Approx(1.0 / 3.0));
    CHECK(*breakdown_bound(GsbParams{1.0, 0.0, 0.0}) == doctest::Approx(0.5));
  }
  SUBCASE("PD value at lambda = -0.5") {
    // (-lambda)^{1/(1+lambda)} = 0.5^2 = 0.25.
    CHECK(*breakdown_bound(GsbParams{0.0, -0.5, 0.0}) == doctest::Approx(0.25));
  }
  SUBCASE("beta != 0 has no closed form") {
    CHECK_FALSE(breakdown_bound(GsbParams{0.5, 0.0, -0.05}).has_value());
    CHECK_FALSE(breakdown_bound(GsbParams{-1.0, 0.0, -0.1}).has_value());
  }
  SUBCASE("20 random (alpha, lambda) with A,B > 0 against an independent evaluation") {
    RngStream rng(8);
    int done = 0;
    while (done < 20) {
      const double alpha = rng.uniform();
      const double lambda = (2.0 * rng.uniform() - 1.0) / (1.0 - alpha + 1e-12);
      const GsbParams p{alpha, lambda, 0.0};
      if (!(p.A() > 1e-6) || !(p.B() > 1e-6)) continue;
      ++done;
      const double r = std::pow(p.B() / (1.0 + alpha), 1.0 / p.A());
      const double expected = std::min({r, 1.0 - r, 0.5});
      CHECK(*breakdown_bound(p) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  SUBCASE("DPD bound is strictly increasing in alpha on [0,1]") {
    double prev = -1.0;
    for (double a = 0.0; a <= 1.0; a += 0.1) {
      const double b = *breakdown_bound(GsbParams{a, 0.0, 0.0});
      CHECK(b > prev);
      prev = b;
    }
  }
  SUBCASE("PD bound vanishes at lambda = 0 and climbs toward e^{-1} as lambda -> -1") {
    // (-lambda)^{1/(1+lambda)} stays below 1/2 on (-1, 0]; its supremum is
    // the lambda -> -1 limit e^{-1}, so min{r, 1-r, 1/2} = r throughout.
    CHECK(*breakdown_bound(GsbParams{0.0, 0.0, 0.0}) == doctest::Approx(0.0));
    double prev = -1.0;
    for (double l : {-0.05, -0.2, -0.5, -0.7, -0.9, -0.99}) {
      const double b = *breakdown_bound(GsbParams{0.0, l, 0.0});
      CHECK(b == doctest::Approx(std::pow(-l, 1.0 / (1.0 + l))).epsilon(1e-12));
      CHECK(b < 0.5);
      CHECK(b > prev);
      prev = b;
    }
    CHECK(*breakdown_bound(GsbParams{0.0, -0.999, 0.0}) ==
          doctest::Approx(std::exp(-1.0)).epsilon(2e-3));
  }
}

TEST_CASE("second-order influence function under the null") {
  const auto hd = standard_null();

  SUBCASE("nonnegative for parameters, points, and policies") {
    RngStream rng(15);
    for (int t = 0; t < 15; ++t) {
      const GsbParams p{rng.uniform(), (2.0 * rng.uniform() - 1.0) * 0.8,
                        (rng.uniform() - 0.5) * 0.1};
      const ContaminationPoint t0{static_cast<int>(rng.uniform_int(2)),
                                  4.0 * (rng.uniform() - 0.5)};
      CHECK(if2_null(p, hd, t0, DeltaPolicy{}) >= 0.0);
      CHECK(if2_null(p, hd, t0,
                     DeltaPolicy{DeltaPolicy::Kind::Evaluation, 0.05}) >= 0.0);
    }
  }

  SUBCASE("lambda invariance at beta = 0 (both policies)") {
    const ContaminationPoint t0{0, 1.3};
    for (auto kind : {DeltaPolicy::Kind::Bump, DeltaPolicy::Kind::Evaluation}) {
      const DeltaPolicy policy{kind, 0.05};
      const double base = if2_null(GsbParams{0.5, 0.0, 0.0}, hd, t0, policy);
      for (double lambda : {-0.5, 1.0}) {
        const double v = if2_null(GsbParams{0.5, lambda, 0.0}, hd, t0, policy);
        CHECK(v == doctest::Approx(base).epsilon(1e-6));
      }
    }
  }

  SUBCASE("symmetry of the symmetric null") {
    const DeltaPolicy policy{};
    const GsbParams p{0.5, 0.0, 0.0};
    const double a = if2_null(p, hd, ContaminationPoint{0, 1.5}, policy);
    CHECK(if2_null(p, hd, ContaminationPoint{1, 1.5}, policy) ==
          doctest::Approx(a).epsilon(1e-10));
    CHECK(if2_null(p, hd, ContaminationPoint{0, -1.5}, policy) ==
          doctest::Approx(a).epsilon(1e-10));
  }

  SUBCASE("bump window outside the grid raises PolicyDomain") {
    CHECK_THROWS_AS(if2_null(GsbParams{0.5, 0.0, 0.0}, hd, ContaminationPoint{0, 100.0},
                             DeltaPolicy{}),
                    PolicyDomain);
  }

  SUBCASE("beta = 0 closed form matches a direct evaluation") {
    // (1+alpha) sum_x int (f_x f_y)^{1+alpha} w_x^2 (1 - b/f_y)^2 dy.
    const GsbParams p{0.5, 0.25, 0.0};
    const ContaminationPoint t0{0, 0.8};
    const DeltaPolicy policy{};
    const double impl = if2_null(p, hd, t0, policy);
    const auto& fy = hd.fy;
    // rebuild the node-centred snapped window exactly as documented
    const auto center = static_cast<long>(std::lround((t0.y0 - fy.axis.lo) / fy.spacing()));
    const auto half = static_cast<long>(std::lround(0.5 * policy.eta / fy.spacing()));
    const auto first = static_cast<std::size_t>(center - half);
    const auto last = static_cast<std::size_t>(center + half);
    const double height = 1.0 / (static_cast<double>(last - first) * fy.spacing());
    double acc = 0.0;
    for (int x = 0; x < 2; ++x) {
      const double px = hd.fx_of(x);
      const double w = x == t0.x0 ? (1.0 - px) / px : -1.0;
      std::vector<double> integrand(fy.size(), 0.0);
      std::vector<unsigned char> mask(fy.size(), 0);
      for (std::size_t i = 0; i < fy.size(); ++i) {
        if (!(fy.values[i] > 1e-12)) continue;
        mask[i] = 1;
        const double b = (i >= first && i <= last) ? height : 0.0;
        const double dir = w * (1.0 - b / fy.values[i]);
        integrand[i] =
            (1.0 + p.alpha) * std::pow(px * fy.values[i], 1.0 + p.alpha) * dir * dir;
      }
      acc += trapezoid_masked(integrand, mask, fy.spacing());
    }
    CHECK(impl == doctest::Approx(acc).epsilon(1e-10));
  }
}

TEST_CASE("first-order influence function vanishes under the null") {
  const auto hd = standard_null();
  // >= 10 parameter triples, including beta < 0 cases.
  const std::vector<GsbParams> triples = {
      {0.5, 0.0, 0.0},  {0.1, 0.5, 0.0},   {0.3, -0.2, 0.0}, {1.0, 0.0, 0.0},
      {0.7, 0.25, 0.0}, {0.5, 0.0, -0.05}, {0.2, 0.3, -0.05}, {-1.0, 0.0, -0.05},
      {0.9, -0.5, 0.0}, {0.4, 1.0, 0.1},   {0.6, 0.1, 0.05}};
  for (const auto& p : triples) {
    const double fd = if1_null_check(p, hd, ContaminationPoint{0, 0.9}, 1e-4);
    CHECK(std::abs(fd) < 1e-5);
  }
}

TEST_CASE("first-order influence function is nonzero away from the null") {
  const auto hd = dependent_toy();
  const double fd =
      if1_null_check(GsbParams{0.5, 0.0, 0.0}, hd, ContaminationPoint{0, 0.9}, 1e-4);
  CHECK(std::abs(fd) > 1e-4);
}

TEST_CASE("gross-error sensitivity curves") {
  const auto hd = standard_null();

  SUBCASE("default [-20,20] range works and the sup dominates the curve") {
    const auto report = ges_curve(GsbParams{0.5, 0.0, 0.0}, hd);
    CHECK(!report.if2.empty());
    for (double v : report.if2) CHECK(v <= report.ges2);
    CHECK(report.region == Region::S1);
    CHECK(report.breakdown.has_value());
  }

  SUBCASE("GES decreasing in alpha at beta = 0, lambda = 0") {
    const double g01 = ges_curve(GsbParams{0.1, 0.0, 0.0}, hd).ges2;
    const double g05 = ges_curve(GsbParams{0.5, 0.0, 0.0}, hd).ges2;
    const double g10 = ges_curve(GsbParams{1.0, 0.0, 0.0}, hd).ges2;
    CHECK(g10 <= g05);
    CHECK(g05 <= g01);
  }

  SUBCASE("an S1 member is more stable than the PD member") {
    const double s1 = ges_curve(GsbParams{0.5, 0.0, 0.0}, hd).ges2;
    const double pd = ges_curve(GsbParams{0.0, 0.0, 0.0}, hd).ges2;
    CHECK(s1 < pd);
  }

  SUBCASE("shrinking eta inflates unstable members more") {
    const DeltaPolicy wide{DeltaPolicy::Kind::Bump, 0.5};
    const DeltaPolicy narrow{DeltaPolicy::Kind::Bump, 0.05};
    const auto ratio = [&](const GsbParams& p) {
      return ges_curve(p, hd, 0, -20, 20, 201, narrow).ges2 /
             ges_curve(p, hd, 0, -20, 20, 201, wide).ges2;
    };
    CHECK(ratio(GsbParams{0.0, 0.0, 0.0}) > ratio(GsbParams{0.5, 0.0, 0.0}));
  }
}

TEST_CASE("local power slope and power influence function") {
  const auto hd = standard_null(0.5, 10.0, 4001);
  const auto kc = kernel_constants(KernelSpec{});
  const GsbParams p{0.5, 0.0, 0.0};
  const ContaminationPoint t0{0, 1.0};

  SUBCASE("slope is positive and matches its definition") {
    const double s = local_power_slope(p, hd, t0, kc);
    CHECK(s > 0.0);
    const auto m = null_moments(p, hd.fx, hd.fy, kc);
    CHECK(s == doctest::Approx(if2_null(p, hd, t0, DeltaPolicy{}) /
                               (2.0 * std::sqrt(m.sigma2)))
                   .epsilon(1e-12));
  }
  SUBCASE("local power at d = 0 equals the nominal level") {
    // 1 - Phi(tau_c - 0) = c by construction of tau_c.
    const double tau = normal_quantile(0.95);
    CHECK(1.0 - normal_cdf(tau) == doctest::Approx(0.05).epsilon(1e-10));
  }
  SUBCASE("larger slope means larger local power at fixed d") {
    const double s_small = 0.2, s_big = 1.4, d = 1.0, tau = normal_quantile(0.95);
    CHECK(1.0 - normal_cdf(tau - d * d * s_big) > 1.0 - normal_cdf(tau - d * d * s_small));
  }
  SUBCASE("pif closed form and the d = 0 case") {
    CHECK(pif(p, hd, t0, 0.0, 0.05, kc) == doctest::Approx(0.0));
    const double d = 1.0;
    const double v = pif(p, hd, t0, d, 0.05, kc);
    const auto m = null_moments(p, hd.fx, hd.fy, kc);
    const double sigma = std::sqrt(m.sigma2);
    const double if2 = if2_null(p, hd, t0, DeltaPolicy{});
    const double arg = normal_quantile(0.95) - d * d * if2 / (2.0 * sigma);
    const double phi1 = std::exp(-0.5 * arg * arg) / std::sqrt(2.0 * kPi);
    CHECK(v == doctest::Approx(d / sigma * if2 * phi1).epsilon(1e-12));
    CHECK_THROWS_AS(pif(p, hd, t0, -1.0, 0.05, kc), ConfigError);
  }
  SUBCASE("the level influence function is the zero constant") {
    CHECK(kLevelInfluence == 0.0);
  }
  SUBCASE("normal density oracle for phi1(1.6449 - 0.5)") {
    const double v = std::exp(-0.5 * 1.1449 * 1.1449) / std::sqrt(2.0 * kPi);
    CHECK(v == doctest::Approx(0.20714).epsilon(1e-4));
  }
}
