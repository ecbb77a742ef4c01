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
 * \file include/eedeploy/optimizer.hpp
 *
 * \brief Energy-efficiency maximization: optimal pilot reuse, the
 *  dense-network optimum over (M, K) by alternating closed-form steps,
 *  integer refinement, and numerical searches at finite BS density.
 */

#ifndef EEDEPLOY_OPTIMIZER_HPP
#define EEDEPLOY_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "eedeploy/error.hpp"
#include "eedeploy/model.hpp"

namespace eedeploy {

/// Reuse factor that meets the SINR target with equality.
struct PilotSolution {
  double beta_star = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  bool feasible = false;  ///< beta* >= 1 and beta* K <= S
};

/// beta* = B1 gamma / (M - B2 gamma) with
///   B1 = 4K/(a-2)^2 + (K+M)/(a-1) + 2(K + s2/rho)/(a-2),
///   B2 = (K + s2/rho + 2K/(a-2)) (1 + s2/rho).
/// rho = infinity gives the dense-network coefficients.
inline PilotSolution optimal_pilot_reuse(double m, double k, double rho, double gamma, const PropagationModel& prop) {
  prop.validate();
  detail::require_positive(m, "antenna count M");
  detail::require_positive(k, "UE count K");
  detail::require_positive(rho, "power-control coefficient rho");
  detail::require_positive(gamma, "SINR target gamma");
  const double a = prop.alpha;
  const double x = std::isinf(rho) ? 0.0 : prop.noise / rho;
  PilotSolution p;
  p.b1 = 4.0 * k / ((a - 2.0) * (a - 2.0)) + (k + m) / (a - 1.0) + 2.0 * (k + x) / (a - 2.0);
  p.b2 = (k + x + 2.0 * k / (a - 2.0)) * (1.0 + x);
  if (!(m > p.b2 * gamma)) throw infeasible_error("infeasible: SINR target unreachable with M <= B2 gamma");
  p.beta_star = p.b1 * gamma / (m - p.b2 * gamma);
  p.feasible = p.beta_star >= 1.0 - feasibility_slack && detail::pilots_fit(p.beta_star, k, prop.block_len);
  return p;
}

/// Per-cell constants of the reduced dense-network problem.
struct ReducedConstants {
  double a0 = 0.0;  ///< gamma / (S (a-1))
  double a1 = 0.0;  ///< (4g/(a-2)^2 + g/(a-1) + 2g/(a-2)) / S
  double a2 = 0.0;  ///< (1 + 2/(a-2)) g
};

inline ReducedConstants reduced_constants(double gamma, const PropagationModel& prop) {
  const double a = prop.alpha;
  const double s = prop.block_len;
  return {gamma / (s * (a - 1.0)),
          (4.0 * gamma / ((a - 2.0) * (a - 2.0)) + gamma / (a - 1.0) + 2.0 * gamma / (a - 2.0)) / s,
          (1.0 + 2.0 / (a - 2.0)) * gamma};
}

/// Optimal K along the ray M = c_bar K in the dense-network limit.
inline double optimal_k_fixed_ratio(double c_bar, double gamma, const PropagationModel& prop, const HardwareModel& hw) {
  prop.validate();
  hw.validate();
  detail::require_positive(c_bar, "antenna/UE ratio");
  detail::require_positive(gamma, "SINR target gamma");
  const auto [a0, a1, a2] = reduced_constants(gamma, prop);
  if (!(c_bar > a2)) throw infeasible_error("infeasible: antenna/UE ratio too small for the SINR target");
  const double g = (a1 + a0 * c_bar) / (c_bar - a2);
  const double c0 = hw.c0;
  const double root = std::sqrt(g * c0 * g * c0 + c0 * hw.d1 * c_bar + c0 * g * (hw.c1 + hw.d0 * c_bar));
  return (root - g * c0) / (hw.d1 * c_bar + g * (hw.c1 + hw.d0 * c_bar));
}

/// M at which the reuse constraint beta >= 1 becomes active, or infinity
/// when gamma >= a - 1 (then beta* >= 1 for every M).
inline double reuse_limited_antennas(double k, double gamma, const PropagationModel& prop) {
  const double a = prop.alpha;
  if (gamma >= a - 1.0) return infinity;
  return k * gamma * (1.0 + 4.0 / ((a - 2.0) * (a - 2.0)) + 1.0 / (a - 1.0) + 4.0 / (a - 2.0)) /
         (1.0 - gamma / (a - 1.0));
}

/// Optimal M for fixed K in the dense-network limit. The stationary point
/// is used unless it needs beta < 1; then M sits on the reuse boundary.
inline double optimal_m_fixed_k(double k, double gamma, const PropagationModel& prop, const HardwareModel& hw) {
  prop.validate();
  hw.validate();
  detail::require_positive(k, "UE count K");
  detail::require_positive(gamma, "SINR target gamma");
  const auto [a0, a1, a2] = reduced_constants(gamma, prop);
  if (!(a0 * k < 1.0)) throw infeasible_error("infeasible: K too large for the coherence block");
  const double circuit = (hw.c0 + hw.c1 * k) / (hw.d0 * k + hw.d1 * k * k);
  const double disc = a1 * a2 * k + a1 * a1 * k * k + (1.0 - a0 * k) * (a1 * k + a0 * a2 * k) * circuit +
                      a0 * a1 * a2 * k * k + a0 * a2 * a2 * k;
  const double m = k * (a1 * k + a2 + std::sqrt(disc)) / (1.0 - a0 * k);
  return std::min(m, reuse_limited_antennas(k, gamma, prop));
}

struct TrajectoryPoint {
  double m = 0.0;
  double k = 0.0;
  double ee = 0.0;
};

struct RelaxedOptimum {
  double m_star = 0.0;
  double k_star = 0.0;
  double ee = 0.0;
  int iterations = 0;
  std::vector<TrajectoryPoint> trajectory;  ///< starting point first
};

inline constexpr double alternating_tolerance = 1e-10;
inline constexpr int alternating_max_iterations = 100;
inline constexpr int default_max_antennas = 512;

/// Alternates the optimal-K (fixed M/K) and optimal-M (fixed K) steps until
/// the relative EE change drops below 1e-10 or 100 rounds have run.
inline RelaxedOptimum alternating_optimize(double start_m, double start_k, double gamma, const PropagationModel& prop,
                                           const HardwareModel& hw) {
  AsymptoticValue v;
  try {
    v = asymptotic_objective(start_m, start_k, gamma, prop, hw);
  } catch (const infeasible_error&) {
    v.feasible = false;
  }
  if (!v.feasible) {
    std::ostringstream os;
    os << "infeasible start (M,K) = (" << start_m << ", " << start_k
       << "); use default_start_point to find a feasible one";
    throw infeasible_error(os.str());
  }
  RelaxedOptimum r;
  double m = start_m;
  double k = start_k;
  double ee = v.ee;
  r.trajectory.push_back({m, k, ee});
  for (int it = 1; it <= alternating_max_iterations; ++it) {
    const double c_bar = m / k;
    k = optimal_k_fixed_ratio(c_bar, gamma, prop, hw);
    m = optimal_m_fixed_k(k, gamma, prop, hw);
    const double next = asymptotic_objective(m, k, gamma, prop, hw).ee;
    r.trajectory.push_back({m, k, next});
    r.iterations = it;
    const double change = std::abs(next - ee) / std::abs(next);
    ee = next;
    if (change < alternating_tolerance) break;
  }
  r.m_star = m;
  r.k_star = k;
  r.ee = ee;
  return r;
}

/// K = 1 and M = ceil(2 a2), doubled until feasible or above max_antennas.
inline std::pair<double, double> default_start_point(double gamma, const PropagationModel& prop,
                                                     const HardwareModel& hw,
                                                     int max_antennas = default_max_antennas) {
  const double a2 = reduced_constants(gamma, prop).a2;
  for (double m = std::max(1.0, std::ceil(2.0 * a2)); m <= max_antennas; m *= 2.0) {
    try {
      if (asymptotic_objective(m, 1.0, gamma, prop, hw).feasible) return {m, 1.0};
    } catch (const infeasible_error&) {
    }
  }
  throw infeasible_error("infeasible: no feasible starting point with K = 1 and M <= M_max");
}

inline RelaxedOptimum alternating_optimize(double gamma, const PropagationModel& prop, const HardwareModel& hw) {
  const auto [m, k] = default_start_point(gamma, prop, hw);
  return alternating_optimize(m, k, gamma, prop, hw);
}

struct IntegerOptimum {
  int m = 0;
  int k = 0;
  double beta = 0.0;
  double ee = 0.0;
  int neighborhood_radius_used = 0;
};

namespace detail {

/// Strict weak "better" order: higher EE, then smaller M, then smaller K.
inline bool better(double ee, int m, int k, double best_ee, int best_m, int best_k) {
  if (ee != best_ee) return ee > best_ee;
  return std::tie(m, k) < std::tie(best_m, best_k);
}

inline constexpr int integer_search_radius_limit = 256;

}  // namespace detail

/// Best feasible integer (M, K) near the relaxed optimum. The square of
/// radius 2 around the rounded point is searched, then rings are added while
/// a ring still improves the incumbent.
inline IntegerOptimum integer_refine(const RelaxedOptimum& relaxed, double gamma, const PropagationModel& prop,
                                     const HardwareModel& hw) {
  const int cm = std::max(1, static_cast<int>(std::lround(relaxed.m_star)));
  const int ck = std::max(1, static_cast<int>(std::lround(relaxed.k_star)));
  IntegerOptimum best;
  bool found = false;
  auto visit = [&](int m, int k) -> bool {
    if (m < 1 || k < 1) return false;
    AsymptoticValue v;
    try {
      v = asymptotic_objective(m, k, gamma, prop, hw);
    } catch (const infeasible_error&) {
      return false;
    }
    if (!v.feasible) return false;
    if (found && !detail::better(v.ee, m, k, best.ee, best.m, best.k)) return false;
    const bool improves = !found || v.ee > best.ee;
    best.m = m;
    best.k = k;
    best.beta = v.beta;
    best.ee = v.ee;
    found = true;
    return improves;
  };
  for (int dm = -2; dm <= 2; ++dm) {
    for (int dk = -2; dk <= 2; ++dk) visit(cm + dm, ck + dk);
  }
  int radius = 2;
  while (radius < detail::integer_search_radius_limit) {
    const int r = radius + 1;
    bool improved = false;
    for (int d = -r; d <= r; ++d) {
      improved |= visit(cm + d, ck - r);
      improved |= visit(cm + d, ck + r);
    }
    for (int d = -r + 1; d <= r - 1; ++d) {
      improved |= visit(cm - r, ck + d);
      improved |= visit(cm + r, ck + d);
    }
    if (!improved && found) break;
    radius = r;
  }
  if (!found) throw infeasible_error("infeasible: no feasible integer (M, K) near the relaxed optimum");
  best.neighborhood_radius_used = radius;
  return best;
}

/// Operating point at finite density with beta chosen from the pilot rule.
struct FiniteEvaluation {
  double rho = 0.0;
  double beta = 0.0;
  EEReport report;
};

/// EE at (lambda, M, K, rho) with beta = max(1, beta*). Infeasible points
/// (no beta reaches gamma, or the pilots overflow the block) report
/// feasible = false and ee = 0.
inline FiniteEvaluation evaluate_with_optimal_pilots(double lambda, double m, double k, double rho, double gamma,
                                                     const PropagationModel& prop, const HardwareModel& hw) {
  FiniteEvaluation e;
  e.rho = rho;
  PilotSolution p;
  try {
    p = optimal_pilot_reuse(m, k, rho, gamma, prop);
  } catch (const infeasible_error&) {
    return e;
  }
  e.beta = std::max(1.0, p.beta_star);
  if (!detail::pilots_fit(e.beta, k, prop.block_len)) return e;
  e.report = energy_efficiency({lambda, m, k, e.beta, rho, gamma}, prop, hw);
  if (!e.report.feasible) e.report.ee = 0.0;
  return e;
}

inline constexpr double rho_bracket_low = 1e-4;    ///< times sigma^2
inline constexpr double rho_bracket_high = 1e12;   ///< times sigma^2
inline constexpr int rho_grid_per_decade = 8;
inline constexpr int rho_search_bits = 21;         ///< relative tolerance ~1e-6

/// Maximizes EE over rho at fixed (lambda, M, K): a log-spaced scan over
/// [1e-4, 1e12] sigma^2 followed by Brent's method on log rho around the
/// best grid point.
inline FiniteEvaluation optimize_rho_finite_lambda(double lambda, double m, double k, double gamma,
                                                   const PropagationModel& prop, const HardwareModel& hw) {
  prop.validate();
  hw.validate();
  detail::require_positive(lambda, "BS density lambda");
  if (std::isinf(lambda)) throw parameter_error("BS density must be finite");
  const double lo = std::log(prop.noise * rho_bracket_low);
  const double hi = std::log(prop.noise * rho_bracket_high);
  const int n = static_cast<int>(std::lround(std::log10(rho_bracket_high / rho_bracket_low))) * rho_grid_per_decade;
  const double step = (hi - lo) / n;
  auto eval = [&](double t) { return evaluate_with_optimal_pilots(lambda, m, k, std::exp(t), gamma, prop, hw); };

  FiniteEvaluation best;
  int best_i = -1;
  for (int i = 0; i <= n; ++i) {
    FiniteEvaluation e = eval(lo + i * step);
    if (e.report.feasible && (best_i < 0 || e.report.ee > best.report.ee)) {
      best = e;
      best_i = i;
    }
  }
  if (best_i < 0) throw infeasible_error("infeasible: no power-control coefficient meets the SINR target");

  const double a = lo + std::max(0, best_i - 1) * step;
  const double b = lo + std::min(n, best_i + 1) * step;
  auto cost = [&](double t) {
    const FiniteEvaluation e = eval(t);
    return e.report.feasible ? -e.report.ee : 1.0;
  };
  const auto [t_star, c_star] = boost::math::tools::brent_find_minima(cost, a, b, rho_search_bits);
  if (-c_star > best.report.ee) best = eval(t_star);
  return best;
}

/// EE at increasing densities with rho = lambda * rho_tilde and beta from the
/// pilot rule.
inline std::vector<EEReport> ee_vs_density(double rho_tilde, double m, double k, double gamma,
                                           const PropagationModel& prop, const HardwareModel& hw,
                                           std::span<const double> lambda_grid) {
  if (!asymptotic_objective(m, k, gamma, prop, hw).feasible) {
    throw infeasible_error("infeasible: (M, K) cannot meet the SINR target");
  }
  std::vector<EEReport> out;
  out.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    detail::require_positive(lambda, "BS density lambda");
    out.push_back(evaluate_with_optimal_pilots(lambda, m, k, lambda * rho_tilde, gamma, prop, hw).report);
  }
  return out;
}

/// Optimum over integer (M, K) and rho at a finite density.
struct FiniteOptimum {
  int m = 0;
  int k = 0;
  double lambda = 0.0;
  double rho = 0.0;
  double beta = 0.0;
  EEReport report;
};

namespace detail {

/// Exhaustive search over integer K in [1, S], M in [K, max_antennas] with
/// rho optimized, where lambda_of(K) gives the density. Candidates are
/// visited in decreasing order of an upper bound on their EE and the scan
/// stops once the bound falls below the incumbent.
template <typename LambdaOf>
FiniteOptimum pruned_integer_search(LambdaOf&& lambda_of, double gamma, const PropagationModel& prop,
                                    const HardwareModel& hw, int max_antennas) {
  prop.validate();
  hw.validate();
  detail::require_positive(gamma, "SINR target gamma");
  struct Candidate {
    double bound;
    int m;
    int k;
  };
  std::vector<Candidate> cands;
  const double s = prop.block_len;
  for (int k = 1; k <= prop.block_len; ++k) {
    for (int m = k; m <= max_antennas; ++m) {
      const auto [b1, b2] = limit_coefficients(m, k, prop);
      if (!(m > b2 * gamma)) continue;
      // The finite-density reuse factor is at least the dense-network one
      // and the SINR never exceeds M/K.
      const double beta = b1 * gamma / (m - b2 * gamma);
      const double se = beta >= 1.0 ? (1.0 - beta * k / s) * std::log2(1.0 + gamma)
                                     : (1.0 - k / s) * std::log2(1.0 + static_cast<double>(m) / k);
      if (!(se > 0.0)) continue;
      cands.push_back({k * se / circuit_energy_per_cell(m, k, hw), m, k});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    return std::tie(a.m, a.k) < std::tie(b.m, b.k);
  });
  FiniteOptimum best;
  bool found = false;
  for (const Candidate& c : cands) {
    if (found && c.bound < best.report.ee) break;
    const double lambda = lambda_of(c.k);
    FiniteEvaluation e;
    try {
      e = optimize_rho_finite_lambda(lambda, c.m, c.k, gamma, prop, hw);
    } catch (const infeasible_error&) {
      continue;
    }
    if (!found || better(e.report.ee, c.m, c.k, best.report.ee, best.m, best.k)) {
      best = {c.m, c.k, lambda, e.rho, e.beta, e.report};
      found = true;
    }
  }
  if (!found) throw infeasible_error("infeasible: no (M, K) meets the SINR target");
  return best;
}

}  // namespace detail

/// Maximizes EE over integer (M, K) and rho at a fixed finite density.
inline FiniteOptimum optimize_at_density(double lambda, double gamma, const PropagationModel& prop,
                                         const HardwareModel& hw, int max_antennas = default_max_antennas) {
  detail::require_positive(lambda, "BS density lambda");
  return detail::pruned_integer_search([&](int) { return lambda; }, gamma, prop, hw, max_antennas);
}

/// Fixed (M, K) at UE density mu: lambda = mu / K, rho optimized.
inline FiniteOptimum reference_for_ue_density(double mu, int m, int k, double gamma, const PropagationModel& prop,
                                              const HardwareModel& hw) {
  detail::require_positive(mu, "UE density mu");
  const double lambda = mu / k;
  const FiniteEvaluation e = optimize_rho_finite_lambda(lambda, m, k, gamma, prop, hw);
  return {m, k, lambda, e.rho, e.beta, e.report};
}

/// Maximizes EE over integer K in [1, S], M in [K, max_antennas] and rho
/// subject to mu = K lambda.
inline FiniteOptimum optimize_for_ue_density(double mu, double gamma, const PropagationModel& prop,
                                             const HardwareModel& hw, int max_antennas = default_max_antennas) {
  detail::require_positive(mu, "UE density mu");
  return detail::pruned_integer_search([&](int k) { return mu / k; }, gamma, prop, hw, max_antennas);
}

}  // namespace eedeploy

#endif  // EEDEPLOY_OPTIMIZER_HPP
