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

/**
 * \file include/eedeploy/simulator.hpp
 *
 * \brief Monte Carlo engine for the uplink of a Poisson cellular network.
 *
 * Every realization places a typical UE at the origin, draws its serving
 * distance from Rayleigh(1/sqrt(2 pi lambda)), scatters the other BSs as a
 * PPP outside that radius, and puts K UEs into every interfering cell. The
 * realized geometry sums are compared against the constants used by the
 * closed-form SINR bound, and an optional link-level pass draws Rayleigh
 * fading, pilot contamination and noise to check the MMSE estimator.
 *
 * Two UE placements are available:
 *  - voronoi: UEs uniform in the realized Poisson-Voronoi cells (exact
 *    tessellation inside the window, with a guard ring of extra BSs);
 *  - poisson: the interfering UEs of each pilot form a PPP of density lambda
 *    around the typical BS, each with an independent Rayleigh own-cell
 *    distance, and only UEs closer to their own BS than to the typical BS
 *    count. This is the model whose expectations the closed forms evaluate.
 *
 * Realization i uses the random stream substream(seed, i), so results are
 * identical for any worker count.
 */

#ifndef EEDEPLOY_SIMULATOR_HPP
#define EEDEPLOY_SIMULATOR_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "eedeploy/error.hpp"
#include "eedeploy/geometry.hpp"
#include "eedeploy/model.hpp"
#include "eedeploy/parallel.hpp"
#include "eedeploy/rng.hpp"
#include "eedeploy/stats.hpp"

namespace eedeploy::sim {

enum class UePlacement { voronoi, poisson };

inline const char* to_string(UePlacement p) { return p == UePlacement::voronoi ? "voronoi" : "poisson"; }

/// Statistical checks with fewer realizations than this are inconclusive.
inline constexpr std::size_t min_conclusive_realizations = 1000;

struct McConfig {
  std::size_t realization_count = 100000;
  double window_radius = 0.0;  ///< km; 0 selects default_window_radius()
  std::uint64_t seed = 42;
  OperatingPoint point{10.0, 89.0, 10.0, 7.24, infinity, 3.0};
  PropagationModel propagation;
  UePlacement placement = UePlacement::voronoi;
  double signal_budget = 1e8;  ///< antenna-realizations for the link-level pass
  unsigned threads = 0;        ///< 0 resolves through resolve_thread_count()

  int antenna_count() const { return static_cast<int>(std::lround(point.m)); }
  int ue_count() const { return static_cast<int>(std::lround(point.k)); }
  double window() const;
  void validate() const;
};

/// Ratio of the interference beyond radius R to the full closed-form
/// interference sum: Gamma(alpha/2+1) (pi lambda R^2)^(1-alpha/2).
inline double truncation_ratio(double alpha, double lambda, double radius) {
  return std::tgamma(alpha / 2.0 + 1.0) * std::pow(std::numbers::pi * lambda * radius * radius, 1.0 - alpha / 2.0);
}

/// Smallest window whose truncation_ratio() is `ratio`.
inline double default_window_radius(double alpha, double lambda, double ratio = 0.01) {
  const double cells = std::pow(std::tgamma(alpha / 2.0 + 1.0) / ratio, 1.0 / (alpha / 2.0 - 1.0));
  return std::sqrt(cells / (std::numbers::pi * lambda));
}

/// Expected sum_j (d_jj/d_0j)^alpha over one UE per cell beyond radius R.
inline double interference_tail(double alpha, double lambda, double radius) {
  return 2.0 * std::numbers::pi * lambda * detail::mean_pathloss_power(alpha, lambda) *
         std::pow(radius, 2.0 - alpha) / (alpha - 2.0);
}

/// Expected sum_j (d_jj/d_0j)^(2 alpha) over one UE per cell beyond radius R.
inline double coherent_tail(double alpha, double lambda, double radius) {
  const double second_moment = std::tgamma(alpha + 1.0) / std::pow(std::numbers::pi * lambda, alpha);
  return 2.0 * std::numbers::pi * lambda * second_moment * std::pow(radius, 2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0);
}

inline double McConfig::window() const {
  return window_radius > 0.0 ? window_radius : default_window_radius(propagation.alpha, point.lambda);
}

inline void McConfig::validate() const {
  propagation.validate();
  if (realization_count < 1) throw parameter_error("realization_count must be positive");
  if (!(point.lambda > 0.0) || std::isinf(point.lambda)) {
    throw parameter_error("Monte Carlo needs a finite positive BS density");
  }
  if (point.k < 1.0 || std::abs(point.k - ue_count()) > 1e-9) throw parameter_error("K must be a positive integer");
  if (point.m < 1.0 || std::abs(point.m - antenna_count()) > 1e-9) {
    throw parameter_error("M must be a positive integer");
  }
  if (!(point.beta >= 1.0)) throw parameter_error("pilot reuse factor beta must be >= 1");
  if (!(point.rho > 0.0)) throw parameter_error("rho must be positive (use inf for the noiseless limit)");
  if (window_radius < 0.0) throw parameter_error("window_radius must be positive");
}

// ---------------------------------------------------------------------------
// Geometry

struct UeRecord {
  double own_cell_distance = 0.0;        ///< d_jji, km
  double distance_to_typical_bs = 0.0;   ///< d_0ji, km
  bool counted = true;                   ///< false when excluded by the placement rule
};

struct InterfererRecord {
  double bs_distance_to_origin = 0.0;  ///< ||x_j||, km
  std::vector<UeRecord> ues;           ///< ues[0] uses the typical UE's pilot index
  bool pilot_collision = false;        ///< cell j reuses the typical UE's pilot
};

struct GeometryRealization {
  double serving_distance = 0.0;  ///< d_00k, km
  geometry::Point typical_bs;
  std::vector<InterfererRecord> interferers;
};

namespace detail {

inline double uniform(RandomStream& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double rayleigh(RandomStream& rng, double scale) {
  return scale * std::sqrt(-2.0 * std::log1p(-uniform(rng)));
}

inline geometry::Point polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

inline void sample_voronoi(const McConfig& cfg, RandomStream& rng, GeometryRealization& g) {
  const double lambda = cfg.point.lambda;
  const double window = cfg.window();
  const double guard = 3.0 / std::sqrt(lambda);
  const double outer = window + guard;
  const double d0 = g.serving_distance;
  const int k = cfg.ue_count();

  std::vector<geometry::Point> sites;
  sites.push_back(g.typical_bs);
  const double annulus = outer * outer - d0 * d0;
  const int n = std::poisson_distribution<int>(lambda * std::numbers::pi * annulus)(rng);
  sites.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) {
    const double r = std::sqrt(d0 * d0 + uniform(rng) * annulus);
    sites.push_back(polar(r, 2.0 * std::numbers::pi * uniform(rng)));
  }

  geometry::SiteGrid grid(sites, outer, 1.0 / std::sqrt(lambda));
  std::bernoulli_distribution collide(1.0 / cfg.point.beta);
  geometry::Polygon cell;
  geometry::Polygon scratch;
  for (std::size_t j = 1; j < sites.size(); ++j) {
    const double rj = std::hypot(sites[j].x, sites[j].y);
    if (rj > window) continue;
    geometry::voronoi_cell(grid, j, outer, cell, scratch);
    if (cell.size() < 3) continue;
    geometry::ConvexSampler sampler(cell);
    InterfererRecord rec;
    rec.bs_distance_to_origin = rj;
    rec.ues.reserve(k);
    for (int i = 0; i < k; ++i) {
      const geometry::Point u = sampler(rng);
      rec.ues.push_back({geometry::distance(u, sites[j]), geometry::distance(u, g.typical_bs), true});
    }
    rec.pilot_collision = collide(rng);
    g.interferers.push_back(std::move(rec));
  }
}

inline void sample_poisson(const McConfig& cfg, RandomStream& rng, GeometryRealization& g) {
  const double lambda = cfg.point.lambda;
  const double window = cfg.window();
  const double scale = 1.0 / std::sqrt(2.0 * std::numbers::pi * lambda);
  const int k = cfg.ue_count();
  const int n = std::poisson_distribution<int>(lambda * std::numbers::pi * window * window)(rng);
  std::bernoulli_distribution collide(1.0 / cfg.point.beta);
  g.interferers.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    // Anchor UE of the typical pilot, uniform in the disk around the typical BS.
    const geometry::Point offset = polar(window * std::sqrt(uniform(rng)), 2.0 * std::numbers::pi * uniform(rng));
    const geometry::Point anchor{g.typical_bs.x + offset.x, g.typical_bs.y + offset.y};
    const geometry::Point to_bs = polar(rayleigh(rng, scale), 2.0 * std::numbers::pi * uniform(rng));
    const geometry::Point bs{anchor.x + to_bs.x, anchor.y + to_bs.y};
    InterfererRecord rec;
    rec.bs_distance_to_origin = std::hypot(bs.x, bs.y);
    rec.ues.reserve(k);
    for (int i = 0; i < k; ++i) {
      geometry::Point u = anchor;
      if (i > 0) {
        const geometry::Point v = polar(rayleigh(rng, scale), 2.0 * std::numbers::pi * uniform(rng));
        u = {bs.x + v.x, bs.y + v.y};
      }
      UeRecord ue{geometry::distance(u, bs), geometry::distance(u, g.typical_bs), true};
      ue.counted = ue.distance_to_typical_bs >= ue.own_cell_distance;
      rec.ues.push_back(ue);
    }
    rec.pilot_collision = collide(rng);
    g.interferers.push_back(std::move(rec));
  }
}

}  // namespace detail

/// One geometry draw. Throws parameter_error when the serving distance
/// reaches the window radius (enlarge the window).
inline GeometryRealization sample_geometry(const McConfig& cfg, RandomStream& rng) {
  const double lambda = cfg.point.lambda;
  GeometryRealization g;
  g.serving_distance = detail::rayleigh(rng, 1.0 / std::sqrt(2.0 * std::numbers::pi * lambda));
  if (g.serving_distance >= cfg.window()) {
    throw parameter_error("serving distance exceeds the simulation window; enlarge window_radius");
  }
  g.typical_bs = detail::polar(g.serving_distance, 2.0 * std::numbers::pi * detail::uniform(rng));
  if (cfg.placement == UePlacement::voronoi) {
    detail::sample_voronoi(cfg, rng, g);
  } else {
    detail::sample_poisson(cfg, rng, g);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Per-realization sums

/// Realized versions of the geometry expectations in the SINR bound.
struct DenominatorSample {
  double collision_sum = 0.0;  ///< sum_j chi_j (d_jjk/d_0jk)^alpha
  double pilot_sum = 0.0;      ///< sum_j (d_jjk/d_0jk)^alpha, typical pilot index, all cells
  double all_ue_sum = 0.0;     ///< sum_j sum_i (d_jji/d_0ji)^alpha
  double coherent_sum = 0.0;   ///< sum_j chi_j (d_jjk/d_0jk)^(2 alpha)
};

inline DenominatorSample denominator_sample(const GeometryRealization& g, double alpha) {
  DenominatorSample s;
  for (const auto& cell : g.interferers) {
    for (std::size_t i = 0; i < cell.ues.size(); ++i) {
      const UeRecord& ue = cell.ues[i];
      if (!ue.counted) continue;
      const double a = std::pow(ue.own_cell_distance / ue.distance_to_typical_bs, alpha);
      s.all_ue_sum += a;
      if (i == 0) {
        s.pilot_sum += a;
        if (cell.pilot_collision) {
          s.collision_sum += a;
          s.coherent_sum += a * a;
        }
      }
    }
  }
  return s;
}

/// Conditional SINR obtained by putting one realization's sums into the
/// slots of the closed-form denominator. The K/beta second-moment slot takes
/// collision_sum * pilot_sum, whose mean under the Poisson model is
/// (1/beta)(4/(alpha-2)^2 + 1/(alpha-1)).
inline double conditional_sinr(const DenominatorSample& s, const OperatingPoint& pt, const PropagationModel& prop) {
  const double x = noise_to_power(pt, prop);
  const double k = pt.k;
  const double denom = (k + x) * (1.0 + s.collision_sum + x) + s.all_ue_sum * (1.0 + x) +
                       k * s.collision_sum * s.pilot_sum + pt.m * s.coherent_sum;
  return pt.m / denom;
}

// ---------------------------------------------------------------------------
// Summaries

struct TermEstimate {
  stats::Estimate windowed;  ///< realized sum inside the window
  double tail = 0.0;         ///< analytic expectation beyond the window
  double closed_form = 0.0;

  double corrected() const { return windowed.mean + tail; }
  double z_score() const {
    stats::Estimate e = windowed;
    e.mean = corrected();
    return e.z_score(closed_form);
  }
  double relative_error() const { return (corrected() - closed_form) / closed_form; }
};

struct DenominatorTerms {
  TermEstimate collision;  ///< closed form 2/(beta(alpha-2))
  TermEstimate all_ue;     ///< closed form 2K/(alpha-2)
  TermEstimate coherent;   ///< closed form 1/(beta(alpha-1))
};

struct PowerEstimate {
  stats::Estimate distance_moment;  ///< own-cell E{d^alpha}, km^alpha
  double closed_form_moment = 0.0;  ///< Gamma(alpha/2+1)/(pi lambda)^(alpha/2)
  double rho_omega = 0.0;           ///< scale to J/symbol; infinite in the noiseless limit

  double mean_power() const { return rho_omega * distance_moment.mean; }
  double closed_form_power() const { return rho_omega * closed_form_moment; }
  double z_score() const { return distance_moment.z_score(closed_form_moment); }
  double relative_error() const { return distance_moment.mean / closed_form_moment - 1.0; }
};

struct EmpiricalSe {
  stats::Estimate se;  ///< bit/symbol/user
  double ci_low = 0.0;
  double ci_high = 0.0;
  double closed_form = 0.0;

  double gap() const { return (se.mean - closed_form) / closed_form; }
};

struct SignalLevel {
  stats::Estimate error_variance;           ///< normalized per-antenna MMSE error variance
  stats::Estimate predicted_error_variance; ///< 1 - 1/(1 + collision_sum + sigma^2/rho)
  stats::Estimate error_deviation;          ///< per-realization difference of the two
  stats::Estimate correlation_re;           ///< Re E{conj(hhat) * err} per entry, normalized
  stats::Estimate correlation_im;
  stats::Estimate gain_ratio;               ///< p ||h||^2 / (M rho)
  std::size_t realizations = 0;
  bool budget_exhausted = false;
};

struct McSummary {
  std::size_t realizations = 0;
  double window_radius = 0.0;
  double truncation = 0.0;  ///< truncation_ratio() of the window
  std::vector<double> serving_distances;
  double ks_statistic = 0.0;
  double ks_p_value = 0.0;
  stats::Estimate interferer_count;
  bool void_property_held = true;
  PowerEstimate power;
  DenominatorTerms terms;
  EmpiricalSe se;
  SignalLevel signal;
  std::vector<std::string> warnings;
};

struct RunOptions {
  bool signal_level = true;
};

namespace detail {

struct RealizationSample {
  double serving_distance = 0.0;
  double interferers = 0.0;
  bool void_ok = true;
  DenominatorSample sums;
  double distance_moment = 0.0;  // mean own-cell d^alpha, NaN when no UE counted
  double se = 0.0;
  // link level
  double error_variance = 0.0;
  double predicted_error_variance = 0.0;
  double correlation_re = 0.0;
  double correlation_im = 0.0;
  double gain = 0.0;
};

inline void link_level(const McConfig& cfg, const GeometryRealization& g, const DenominatorSample& sums,
                       RandomStream& rng, RealizationSample& out) {
  using cd = std::complex<double>;
  const int m = cfg.antenna_count();
  const double alpha = cfg.propagation.alpha;
  const double x = noise_to_power(cfg.point, cfg.propagation);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  auto cn = [&] { return cd(normal(rng), normal(rng)); };

  // Channels are normalized by sqrt(rho) and the serving-link pathloss, so
  // the typical UE's received pilot has unit power per antenna.
  std::vector<cd> h(m);
  std::vector<cd> z(m);
  for (int a = 0; a < m; ++a) {
    h[a] = cn();
    z[a] = h[a];
  }
  for (const auto& cell : g.interferers) {
    if (!cell.pilot_collision || !cell.ues[0].counted) continue;
    const UeRecord& ue = cell.ues[0];
    const double amp = std::pow(ue.own_cell_distance / ue.distance_to_typical_bs, alpha / 2.0);
    for (int a = 0; a < m; ++a) z[a] += amp * cn();
  }
  const double noise_amp = std::sqrt(x);
  if (noise_amp > 0.0) {
    for (int a = 0; a < m; ++a) z[a] += noise_amp * cn();
  }
  const double shrink = 1.0 / (1.0 + sums.collision_sum + x);
  double err = 0.0;
  double gain = 0.0;
  cd corr{};
  for (int a = 0; a < m; ++a) {
    const cd est = shrink * z[a];
    const cd e = h[a] - est;
    err += std::norm(e);
    gain += std::norm(h[a]);
    corr += std::conj(est) * e;
  }
  out.error_variance = err / m;
  out.predicted_error_variance = 1.0 - shrink;
  out.correlation_re = corr.real() / m;
  out.correlation_im = corr.imag() / m;
  out.gain = gain / m;
}

}  // namespace detail

/// Runs `cfg.realization_count` realizations and summarizes every
/// estimator. Deterministic for a given (seed, config).
inline McSummary run_monte_carlo(const McConfig& cfg, RunOptions options = {}) {
  cfg.validate();
  const std::size_t n = cfg.realization_count;
  const double alpha = cfg.propagation.alpha;
  const double lambda = cfg.point.lambda;
  const double window = cfg.window();
  const OperatingPoint& pt = cfg.point;
  const double prelog = pilot_prelog(pt, cfg.propagation);

  std::size_t signal_n = 0;
  if (options.signal_level) {
    const double affordable = std::floor(cfg.signal_budget / std::max(1, cfg.antenna_count()));
    signal_n = static_cast<std::size_t>(std::min<double>(static_cast<double>(n), std::max(0.0, affordable)));
  }

  std::vector<detail::RealizationSample> samples(n);
  parallel_for(n, resolve_thread_count(cfg.threads), [&](std::size_t i) {
    RandomStream rng = substream(cfg.seed, i);
    const GeometryRealization g = sample_geometry(cfg, rng);
    detail::RealizationSample& s = samples[i];
    s.serving_distance = g.serving_distance;
    s.interferers = static_cast<double>(g.interferers.size());
    s.sums = denominator_sample(g, alpha);
    double moment = 0.0;
    std::size_t counted = 0;
    for (const auto& cell : g.interferers) {
      if (cfg.placement == UePlacement::voronoi && cell.bs_distance_to_origin < g.serving_distance) s.void_ok = false;
      // Own-cell distances are recorded for every UE, including those the
      // Poisson placement leaves out of the interference sums.
      for (const auto& ue : cell.ues) {
        moment += std::pow(ue.own_cell_distance, alpha);
        ++counted;
      }
    }
    s.distance_moment = counted ? moment / static_cast<double>(counted) : std::nan("");
    s.se = prelog * std::log2(1.0 + conditional_sinr(s.sums, pt, cfg.propagation));
    if (i < signal_n) {
      RandomStream link = substream(cfg.seed ^ 0x5bd1e995ULL, i);
      detail::link_level(cfg, g, s.sums, link, s);
    }
  });

  McSummary out;
  out.realizations = n;
  out.window_radius = window;
  out.truncation = truncation_ratio(alpha, lambda, window);

  auto column = [&](auto&& get, std::size_t count) {
    std::vector<double> v;
    v.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double x = get(samples[i]);
      if (!std::isnan(x)) v.push_back(x);
    }
    return v;
  };

  out.serving_distances = column([](const auto& s) { return s.serving_distance; }, n);
  const double two_pi_lambda = 2.0 * std::numbers::pi * lambda;
  out.ks_statistic = stats::ks_statistic(out.serving_distances,
                                         [&](double d) { return 1.0 - std::exp(-0.5 * two_pi_lambda * d * d); });
  out.ks_p_value = stats::ks_p_value(out.ks_statistic, n);
  out.interferer_count = stats::estimate(column([](const auto& s) { return s.interferers; }, n));
  for (const auto& s : samples) out.void_property_held = out.void_property_held && s.void_ok;

  out.power.distance_moment = stats::estimate(column([](const auto& s) { return s.distance_moment; }, n));
  out.power.closed_form_moment = eedeploy::detail::mean_pathloss_power(alpha, lambda);
  out.power.rho_omega = pt.rho * cfg.propagation.omega;

  const double beta = pt.beta;
  const double k = pt.k;
  const double tail = interference_tail(alpha, lambda, window);
  out.terms.collision = {stats::estimate(column([](const auto& s) { return s.sums.collision_sum; }, n)), tail / beta,
                         PathlossMoments::interference_sum(alpha) / beta};
  out.terms.all_ue = {stats::estimate(column([](const auto& s) { return s.sums.all_ue_sum; }, n)), k * tail,
                      k * PathlossMoments::interference_sum(alpha)};
  out.terms.coherent = {stats::estimate(column([](const auto& s) { return s.sums.coherent_sum; }, n)),
                        coherent_tail(alpha, lambda, window) / beta, PathlossMoments::coherent_sum(alpha) / beta};

  out.se.se = stats::estimate(column([](const auto& s) { return s.se; }, n));
  out.se.ci_low = out.se.se.mean - 1.96 * out.se.se.std_error;
  out.se.ci_high = out.se.se.mean + 1.96 * out.se.se.std_error;
  out.se.closed_form = se_lower_bound(pt, cfg.propagation);

  if (signal_n > 0) {
    SignalLevel& sl = out.signal;
    sl.realizations = signal_n;
    sl.budget_exhausted = signal_n < n;
    sl.error_variance = stats::estimate(column([](const auto& s) { return s.error_variance; }, signal_n));
    sl.predicted_error_variance =
        stats::estimate(column([](const auto& s) { return s.predicted_error_variance; }, signal_n));
    sl.error_deviation = stats::estimate(
        column([](const auto& s) { return s.error_variance - s.predicted_error_variance; }, signal_n));
    sl.correlation_re = stats::estimate(column([](const auto& s) { return s.correlation_re; }, signal_n));
    sl.correlation_im = stats::estimate(column([](const auto& s) { return s.correlation_im; }, signal_n));
    sl.gain_ratio = stats::estimate(column([](const auto& s) { return s.gain; }, signal_n));
    if (sl.budget_exhausted) {
      out.warnings.push_back("link-level pass stopped at " + std::to_string(signal_n) +
                             " realizations (compute budget)");
    }
  }
  if (n < min_conclusive_realizations) {
    out.warnings.push_back("only " + std::to_string(n) + " realizations; standard errors are wide");
  }
  return out;
}

/// Own-cell transmit power p = rho omega d^alpha, averaged over UEs.
inline PowerEstimate estimate_average_power(const McConfig& cfg) {
  return run_monte_carlo(cfg, {.signal_level = false}).power;
}

inline DenominatorTerms estimate_sinr_denominator_terms(const McConfig& cfg) {
  return run_monte_carlo(cfg, {.signal_level = false}).terms;
}

inline EmpiricalSe simulate_empirical_se(const McConfig& cfg) {
  return run_monte_carlo(cfg, {.signal_level = false}).se;
}

inline SignalLevel simulate_signal_level(const McConfig& cfg) { return run_monte_carlo(cfg).signal; }

}  // namespace eedeploy::sim

#endif  // EEDEPLOY_SIMULATOR_HPP
