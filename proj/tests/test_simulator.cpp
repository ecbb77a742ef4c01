// Copyright 2026 The eedeploy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "eedeploy/geometry.hpp"
#include "eedeploy/simulator.hpp"
#include "eedeploy/stats.hpp"

namespace eedeploy {
namespace {

using geometry::Point;
using geometry::Polygon;
using sim::McConfig;
using sim::UePlacement;

constexpr double pi = std::numbers::pi;

McConfig base_config(UePlacement placement, std::size_t n) {
  McConfig cfg;
  cfg.realization_count = n;
  cfg.placement = placement;
  cfg.point = {10.0, 89.0, 10.0, 7.24, infinity, 3.0};
  cfg.threads = 1;
  return cfg;
}

double rayleigh_cdf(double d, double lambda) { return 1.0 - std::exp(-pi * lambda * d * d); }

// -- geometry --------------------------------------------------------------

TEST(Geometry, ClipHalfplaneCutsSquareInHalf) {
  const Polygon square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  Polygon out;
  geometry::clip_halfplane(square, 1.0, 0.0, 0.5, out);  // keep x <= 0.5
  EXPECT_NEAR(geometry::signed_area(out), 0.5, 1e-12);
  for (const Point& p : out) EXPECT_LE(p.x, 0.5 + 1e-12);

  geometry::clip_halfplane(square, 1.0, 1.0, 1.0, out);  // keep x + y <= 1
  EXPECT_NEAR(geometry::signed_area(out), 0.5, 1e-12);
  geometry::clip_halfplane(square, 1.0, 0.0, -1.0, out);
  EXPECT_NEAR(geometry::signed_area(out), 0.0, 1e-12);
}

TEST(Geometry, VoronoiCellsTileTheSquareAndContainTheirPoints) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Point> sites(300);
  for (auto& s : sites) s = {u(rng), u(rng)};
  const double half = 2.0;
  geometry::SiteGrid grid(sites, half, 0.25);
  Polygon cell;
  Polygon scratch;
  double total = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    geometry::voronoi_cell(grid, i, half, cell, scratch);
    const double area = geometry::signed_area(cell);
    ASSERT_GT(area, 0.0);
    total += area;
    geometry::ConvexSampler sampler(cell);
    for (int t = 0; t < 20; ++t) {
      const Point p = sampler(rng);
      // Brute-force nearest site.
      std::size_t nearest = 0;
      for (std::size_t j = 1; j < sites.size(); ++j) {
        if (geometry::squared_distance(p, sites[j]) < geometry::squared_distance(p, sites[nearest])) nearest = j;
      }
      EXPECT_NEAR(geometry::squared_distance(p, sites[nearest]), geometry::squared_distance(p, sites[i]), 1e-12);
    }
  }
  EXPECT_NEAR(total, 4.0 * half * half, 1e-9);
}

TEST(Geometry, ConvexSamplerIsUniform) {
  const Polygon tri{{0, 0}, {3, 0}, {0, 3}};
  geometry::ConvexSampler sampler(tri);
  EXPECT_NEAR(sampler.area(), 4.5, 1e-12);
  std::mt19937_64 rng(3);
  double sx = 0.0;
  double sy = 0.0;
  int below_half = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Point p = sampler(rng);
    ASSERT_GE(p.x, -1e-12);
    ASSERT_GE(p.y, -1e-12);
    ASSERT_LE(p.x + p.y, 3.0 + 1e-12);
    sx += p.x;
    sy += p.y;
    below_half += p.x + p.y < 1.5;
  }
  EXPECT_NEAR(sx / n, 1.0, 0.01);
  EXPECT_NEAR(sy / n, 1.0, 0.01);
  EXPECT_NEAR(static_cast<double>(below_half) / n, 0.25, 0.005);
}

// -- window ----------------------------------------------------------------

TEST(Window, DefaultWindowMeetsTruncationTarget) {
  const double r = sim::default_window_radius(3.76, 10.0);
  EXPECT_NEAR(sim::truncation_ratio(3.76, 10.0, r), 0.01, 1e-12);
  EXPECT_GT(r, 3.0);
  EXPECT_LT(r, 4.0);
  // Tail of term (a) relative to its closed-form value 2/(alpha-2).
  EXPECT_NEAR(sim::interference_tail(3.76, 10.0, r) / PathlossMoments::interference_sum(3.76), 0.01, 1e-9);
}

TEST(Window, TruncationFallsWithRadius) {
  EXPECT_GT(sim::truncation_ratio(3.76, 10.0, 0.3), sim::truncation_ratio(3.76, 10.0, 1.0));
  EXPECT_GT(sim::truncation_ratio(3.76, 10.0, 0.3), 0.01);
}

// -- geometry sampling -----------------------------------------------------

TEST(SampleGeometry, ServingDistanceMatchesFullPppNearestNeighbour) {
  // Oracle: nearest point of an explicitly sampled PPP on a large disk.
  const double lambda = 10.0;
  const double radius = 1.5;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::poisson_distribution<int> count(lambda * pi * radius * radius);
  std::vector<double> oracle;
  for (int i = 0; i < 20000; ++i) {
    const int n = count(rng);
    double best = radius;
    for (int j = 0; j < n; ++j) best = std::min(best, radius * std::sqrt(u(rng)));
    oracle.push_back(best);
  }
  const double d_oracle = stats::ks_statistic(oracle, [&](double d) { return rayleigh_cdf(d, lambda); });
  EXPECT_GT(stats::ks_p_value(d_oracle, oracle.size()), 0.01);

  McConfig cfg = base_config(UePlacement::poisson, 20000);
  cfg.point.k = 1;
  cfg.point.m = 1;
  cfg.window_radius = 0.8;
  const auto s = sim::run_monte_carlo(cfg, {.signal_level = false});
  EXPECT_GT(s.ks_p_value, 0.01);

  // Two-sample comparison of the simulator against the oracle.
  std::vector<double> a = s.serving_distances;
  std::vector<double> b = oracle;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d2 = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d2 = std::max(d2, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  const double n_eff = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  EXPECT_GT(stats::ks_p_value(d2, static_cast<std::size_t>(n_eff)), 0.01);
}

TEST(SampleGeometry, ServingDistanceMoments) {
  McConfig cfg = base_config(UePlacement::poisson, 100000);
  cfg.point.k = 1;
  cfg.point.m = 1;
  cfg.window_radius = 0.8;
  const auto s = sim::run_monte_carlo(cfg, {.signal_level = false});
  const double lambda = cfg.point.lambda;
  const auto first = stats::estimate(s.serving_distances);
  std::vector<double> sq(s.serving_distances);
  for (double& d : sq) d *= d;
  const auto second = stats::estimate(sq);
  const double rayleigh_mean = 1.0 / (2.0 * std::sqrt(lambda));  // sigma sqrt(pi/2), sigma = 1/sqrt(2 pi lambda)
  EXPECT_NEAR(rayleigh_mean, 0.158114, 1e-6);
  EXPECT_NEAR(first.mean / rayleigh_mean, 1.0, 0.01);
  EXPECT_LT(first.z_score(rayleigh_mean), 4.0);
  EXPECT_LT(second.z_score(1.0 / (pi * lambda)), 4.0);
}

TEST(SampleGeometry, VoidPropertyAndInterfererCount) {
  McConfig cfg = base_config(UePlacement::voronoi, 3000);
  cfg.point.k = 2;
  cfg.window_radius = 0.6;
  RandomStream rng = substream(5, 0);
  for (int i = 0; i < 300; ++i) {
    const auto g = sim::sample_geometry(cfg, rng);
    for (const auto& cell : g.interferers) {
      ASSERT_GE(cell.bs_distance_to_origin, g.serving_distance);
      ASSERT_LE(cell.bs_distance_to_origin, cfg.window_radius);
      ASSERT_EQ(cell.ues.size(), 2u);
      for (const auto& ue : cell.ues) {
        // Voronoi UEs are never closer to the typical BS than to their own.
        EXPECT_LE(ue.own_cell_distance, ue.distance_to_typical_bs + 1e-12);
      }
    }
  }
  const auto s = sim::run_monte_carlo(cfg, {.signal_level = false});
  EXPECT_TRUE(s.void_property_held);
  const double expected = cfg.point.lambda * pi * cfg.window_radius * cfg.window_radius - 1.0;
  EXPECT_LT(s.interferer_count.z_score(expected), 4.0) << s.interferer_count.mean << " vs " << expected;
}

TEST(SampleGeometry, CollisionFlagsAreBernoulli) {
  McConfig cfg = base_config(UePlacement::poisson, 1);
  cfg.point.k = 1;
  cfg.point.beta = 4.0;
  cfg.window_radius = 1.0;
  RandomStream rng = substream(9, 0);
  double hits = 0.0;
  double total = 0.0;
  for (int i = 0; i < 300; ++i) {
    for (const auto& cell : sim::sample_geometry(cfg, rng).interferers) {
      hits += cell.pilot_collision;
      total += 1.0;
    }
  }
  const double p = hits / total;
  EXPECT_NEAR(p, 0.25, 4.0 * std::sqrt(0.25 * 0.75 / total));
}

TEST(SampleGeometry, TinyWindowThrows) {
  McConfig cfg = base_config(UePlacement::poisson, 1);
  cfg.window_radius = 0.02;
  RandomStream rng = substream(1, 0);
  bool threw = false;
  for (int i = 0; i < 1000 && !threw; ++i) {
    try {
      sim::sample_geometry(cfg, rng);
    } catch (const parameter_error&) {
      threw = true;
    }
  }
  EXPECT_TRUE(threw);
}

TEST(McConfig, Validation) {
  McConfig cfg = base_config(UePlacement::poisson, 10);
  EXPECT_NO_THROW(cfg.validate());
  auto expect_bad = [](McConfig c) { EXPECT_THROW(c.validate(), parameter_error); };
  McConfig c = cfg;
  c.point.lambda = infinity;
  expect_bad(c);
  c = cfg;
  c.point.k = 2.5;
  expect_bad(c);
  c = cfg;
  c.point.beta = 0.5;
  expect_bad(c);
  c = cfg;
  c.realization_count = 0;
  expect_bad(c);
}

// -- estimators --------------------------------------------------------------

TEST(Power, ClosedFormScalesWithDensity) {
  const double a = detail::mean_pathloss_power(3.76, 10.0);
  const double b = detail::mean_pathloss_power(3.76, 40.0);
  EXPECT_NEAR(b / a, std::pow(4.0, -1.88), 1e-12);
}

TEST(Power, PoissonPlacementMatchesClosedFormAndScales) {
  McConfig cfg = base_config(UePlacement::poisson, 20000);
  cfg.point.rho = 1e-19;
  cfg.window_radius = 0.6;
  const auto p10 = sim::estimate_average_power(cfg);
  EXPECT_LT(p10.z_score(), 3.0);
  EXPECT_NEAR(p10.relative_error(), 0.0, 0.02);
  const double closed = average_uplink_power(OperatingPoint{10.0, 89.0, 10.0, 7.24, 1e-19, 3.0}, PropagationModel{});
  EXPECT_NEAR(p10.closed_form_power() / closed, 1.0, 1e-12);

  cfg.point.lambda = 40.0;
  cfg.window_radius = 0.3;
  const auto p40 = sim::estimate_average_power(cfg);
  EXPECT_NEAR(p40.mean_power() / p10.mean_power(), std::pow(4.0, -1.88), 0.05 * std::pow(4.0, -1.88));
}

TEST(Terms, PoissonPlacementMatchesClosedForms) {
  McConfig cfg = base_config(UePlacement::poisson, 20000);
  const auto t = sim::estimate_sinr_denominator_terms(cfg);
  EXPECT_NEAR(t.collision.closed_form, 2.0 / (7.24 * 1.76), 1e-12);
  EXPECT_NEAR(t.all_ue.closed_form, 20.0 / 1.76, 1e-12);
  EXPECT_NEAR(t.coherent.closed_form, 1.0 / (7.24 * 2.76), 1e-12);
  EXPECT_LT(t.collision.z_score(), 3.0);
  EXPECT_LT(t.all_ue.z_score(), 3.0);
  EXPECT_LT(t.coherent.z_score(), 3.0);
}

TEST(Terms, CollisionTermsVanishForHugeReuse) {
  McConfig cfg = base_config(UePlacement::poisson, 1);
  cfg.point.beta = 1e9;
  cfg.window_radius = 1.0;
  RandomStream rng = substream(4, 0);
  double collision = 0.0;
  double coherent = 0.0;
  double all_ue = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto s = sim::denominator_sample(sim::sample_geometry(cfg, rng), cfg.propagation.alpha);
    collision += s.collision_sum;
    coherent += s.coherent_sum;
    all_ue += s.all_ue_sum;
  }
  EXPECT_EQ(collision, 0.0);
  EXPECT_EQ(coherent, 0.0);
  EXPECT_GT(all_ue / 200, 1.0);
}

TEST(Terms, DenominatorSampleSums) {
  sim::GeometryRealization g;
  g.serving_distance = 0.1;
  sim::InterfererRecord a;
  a.ues = {{0.1, 0.2, true}, {0.1, 0.4, true}};
  a.pilot_collision = true;
  sim::InterfererRecord b;
  b.ues = {{0.2, 0.2, true}, {0.1, 0.1, false}};
  g.interferers = {a, b};
  const double alpha = 3.0;
  const auto s = sim::denominator_sample(g, alpha);
  EXPECT_NEAR(s.collision_sum, 0.125, 1e-15);
  EXPECT_NEAR(s.pilot_sum, 0.125 + 1.0, 1e-15);
  EXPECT_NEAR(s.all_ue_sum, 0.125 + 1.0 / 64 + 1.0, 1e-15);
  EXPECT_NEAR(s.coherent_sum, 0.125 * 0.125, 1e-15);
}

TEST(EmpiricalSe, JensenDirectionOnEveryRun) {
  struct Case {
    UePlacement placement;
    double m, k, beta, rho, lambda;
  };
  const std::vector<Case> cases{{UePlacement::poisson, 89, 10, 7.24, infinity, 10},
                                {UePlacement::poisson, 20, 2, 3.0, 1e-19, 3},
                                {UePlacement::poisson, 200, 5, 12.0, infinity, 30},
                                {UePlacement::voronoi, 89, 10, 7.24, infinity, 10},
                                {UePlacement::voronoi, 50, 4, 5.0, 1e-19, 5}};
  for (const auto& c : cases) {
    McConfig cfg = base_config(c.placement, 300);
    cfg.point = {c.lambda, c.m, c.k, c.beta, c.rho, 3.0};
    cfg.window_radius = 1.5 / std::sqrt(c.lambda / 10.0);
    const auto se = sim::simulate_empirical_se(cfg);
    EXPECT_GE(se.se.mean, se.closed_form) << sim::to_string(c.placement) << " M=" << c.m;
    EXPECT_LE(se.ci_low, se.se.mean);
    EXPECT_GE(se.ci_high, se.se.mean);
  }
}

TEST(EmpiricalSe, DegenerateRealizationExceedsClosedForm) {
  const OperatingPoint pt{10.0, 89.0, 10.0, 7.24, infinity, 3.0};
  const PropagationModel prop;
  const double sinr = sim::conditional_sinr({}, pt, prop);
  EXPECT_NEAR(sinr, 8.9, 1e-12);
  EXPECT_GT(sinr, sinr_lower_bound(pt, prop));
}

// -- link level ----------------------------------------------------------------

TEST(SignalLevel, PerfectEstimationWithoutInterference) {
  McConfig cfg = base_config(UePlacement::poisson, 1);
  cfg.point.m = 64;
  sim::GeometryRealization g;
  g.serving_distance = 0.1;
  sim::detail::RealizationSample out;
  RandomStream rng = substream(2, 0);
  sim::detail::link_level(cfg, g, {}, rng, out);
  EXPECT_NEAR(out.error_variance, 0.0, 1e-15);
  EXPECT_NEAR(out.predicted_error_variance, 0.0, 1e-15);
}

TEST(SignalLevel, SymmetricContaminatorHalvesTheEstimate) {
  McConfig cfg = base_config(UePlacement::poisson, 1);
  cfg.point.m = 200000;
  sim::GeometryRealization g;
  g.serving_distance = 0.1;
  sim::InterfererRecord rec;
  rec.ues = {{0.15, 0.15, true}};
  rec.pilot_collision = true;
  g.interferers = {rec};
  const auto sums = sim::denominator_sample(g, cfg.propagation.alpha);
  EXPECT_NEAR(sums.collision_sum, 1.0, 1e-15);
  sim::detail::RealizationSample out;
  RandomStream rng = substream(3, 0);
  sim::detail::link_level(cfg, g, sums, rng, out);
  EXPECT_NEAR(out.predicted_error_variance, 0.5, 1e-15);
  EXPECT_NEAR(out.error_variance, 0.5, 0.01);
  EXPECT_NEAR(out.correlation_re, 0.0, 0.01);
  EXPECT_NEAR(out.correlation_im, 0.0, 0.01);
  EXPECT_NEAR(out.gain, 1.0, 0.01);
}

TEST(SignalLevel, MonteCarloStatistics) {
  McConfig cfg = base_config(UePlacement::poisson, 3000);
  cfg.point.rho = 1e-19;
  cfg.window_radius = 1.0;
  const auto sl = sim::simulate_signal_level(cfg);
  EXPECT_EQ(sl.realizations, 3000u);
  EXPECT_FALSE(sl.budget_exhausted);
  EXPECT_NEAR(sl.gain_ratio.mean, 1.0, 0.01);
  EXPECT_LT(sl.error_deviation.z_score(0.0), 3.0);
  EXPECT_LT(sl.correlation_re.z_score(0.0), 3.0);
  EXPECT_LT(sl.correlation_im.z_score(0.0), 3.0);
}

TEST(SignalLevel, BudgetCapsLinkLevelRealizations) {
  McConfig cfg = base_config(UePlacement::poisson, 200);
  cfg.window_radius = 1.0;
  cfg.signal_budget = 89.0 * 50;
  const auto s = sim::run_monte_carlo(cfg);
  EXPECT_EQ(s.signal.realizations, 50u);
  EXPECT_TRUE(s.signal.budget_exhausted);
  EXPECT_FALSE(s.warnings.empty());
}

// -- determinism ---------------------------------------------------------------

TEST(Determinism, IdenticalAcrossThreadCounts) {
  for (UePlacement placement : {UePlacement::poisson, UePlacement::voronoi}) {
    McConfig cfg = base_config(placement, 400);
    cfg.window_radius = 1.0;
    cfg.threads = 1;
    const auto a = sim::run_monte_carlo(cfg);
    cfg.threads = 3;
    const auto b = sim::run_monte_carlo(cfg);
    EXPECT_EQ(a.serving_distances, b.serving_distances);
    EXPECT_EQ(a.terms.collision.windowed.mean, b.terms.collision.windowed.mean);
    EXPECT_EQ(a.terms.all_ue.windowed.std_error, b.terms.all_ue.windowed.std_error);
    EXPECT_EQ(a.power.distance_moment.mean, b.power.distance_moment.mean);
    EXPECT_EQ(a.se.se.mean, b.se.se.mean);
    EXPECT_EQ(a.signal.error_variance.mean, b.signal.error_variance.mean);
  }
}

TEST(Determinism, SeedChangesResults) {
  McConfig cfg = base_config(UePlacement::poisson, 100);
  cfg.window_radius = 1.0;
  const auto a = sim::run_monte_carlo(cfg, {.signal_level = false});
  cfg.seed = 43;
  const auto b = sim::run_monte_carlo(cfg, {.signal_level = false});
  EXPECT_NE(a.serving_distances, b.serving_distances);
}

TEST(Determinism, SmallRunsWarn) {
  McConfig cfg = base_config(UePlacement::poisson, 10);
  cfg.window_radius = 1.0;
  const auto s = sim::run_monte_carlo(cfg);
  EXPECT_EQ(s.realizations, 10u);
  EXPECT_FALSE(s.warnings.empty());
}

}  // namespace
}  // namespace eedeploy
