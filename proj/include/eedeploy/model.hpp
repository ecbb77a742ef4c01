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
 * \file include/eedeploy/model.hpp
 *
 * \brief Closed-form uplink SINR, spectral efficiency, area energy
 *  consumption and energy efficiency of a Poisson cellular network with
 *  massive MIMO base stations.
 *
 * Base stations form a homogeneous PPP of density lambda [BS/km^2]; each has
 * M antennas and serves K single-antenna UEs placed uniformly in its
 * Poisson-Voronoi cell. UEs use statistical channel inversion
 * p = rho * omega * d^alpha, pilots are reused with factor beta, and the BS
 * detects with MRC on MMSE channel estimates.
 *
 * All energies are Joule per symbol. Energy efficiency is bit/Joule.
 *
 * Two evaluation modes exist. A finite operating point carries a finite
 * lambda and rho. The dense-network limit is requested with
 * lambda = +infinity; rho is then irrelevant (the noise term sigma^2/rho and
 * the radiated energy both vanish) and ASE/AEC are reported per cell.
 */

#ifndef EEDEPLOY_MODEL_HPP
#define EEDEPLOY_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "eedeploy/error.hpp"

namespace eedeploy {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Relative slack used when comparing beta*K against S and SINR against gamma.
inline constexpr double feasibility_slack = 1e-9;

struct PropagationModel {
  double alpha = 3.76;   ///< pathloss exponent, > 2
  double omega = 1e13;   ///< propagation loss at 1 km, linear
  double noise = 1e-20;  ///< sigma^2, J/symbol
  int block_len = 400;   ///< S, symbols per coherence block

  void validate() const {
    if (!(alpha > 2.0) || !std::isfinite(alpha)) {
      throw parameter_error("pathloss exponent alpha must be finite and > 2");
    }
    if (!(omega > 0.0)) throw parameter_error("omega must be positive");
    if (!(noise > 0.0)) throw parameter_error("noise variance must be positive");
    if (block_len < 1) throw parameter_error("coherence block length must be >= 1");
  }
};

struct HardwareModel {
  double eta = 0.39;     ///< amplifier efficiency in (0,1]
  double c0 = 5e-7;      ///< static energy per BS
  double c1 = 5e-9;      ///< circuit energy per UE
  double d0 = 1e-8;      ///< circuit energy per BS antenna
  double d1 = 1.56e-10;  ///< signal processing per antenna and UE

  void validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) throw parameter_error("amplifier efficiency must lie in (0,1]");
    if (c0 < 0.0 || c1 < 0.0 || d0 < 0.0 || d1 < 0.0) {
      throw parameter_error("circuit energy coefficients must be nonnegative");
    }
    if (!(c0 > 0.0 || c1 > 0.0 || d0 > 0.0 || d1 > 0.0)) {
      throw parameter_error("at least one circuit energy coefficient must be positive");
    }
  }
};

struct OperatingPoint {
  double lambda = infinity;  ///< BS density, BS/km^2
  double m = 1.0;            ///< antennas per BS
  double k = 1.0;            ///< UEs per cell
  double beta = 1.0;         ///< pilot reuse factor
  double rho = infinity;     ///< power-control coefficient, J/symbol
  double gamma = 1.0;        ///< SINR target

  bool asymptotic() const { return std::isinf(lambda); }
};

struct EEReport {
  double sinr = 0.0;
  double se_per_ue = 0.0;  ///< bit/symbol/user
  double ase = 0.0;        ///< bit/symbol/km^2 (bit/symbol/cell when asymptotic)
  double aec = 0.0;        ///< J/symbol/km^2 (J/symbol/cell when asymptotic)
  double ee = 0.0;         ///< bit/Joule
  bool feasible = false;
  bool asymptotic = false;
};

/// Geometry expectations that the SINR bound aggregates.
struct PathlossMoments {
  /// E{sum_j (d_jj/d_0j)^alpha} over one UE per interfering cell.
  static double interference_sum(double alpha) { return 2.0 / (alpha - 2.0); }
  /// E{sum_j (d_jj/d_0j)^(2 alpha)} over one UE per interfering cell.
  static double coherent_sum(double alpha) { return 1.0 / (alpha - 1.0); }
};

namespace detail {

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << name << " must be positive (got " << v << ")";
    throw parameter_error(os.str());
  }
}

inline void validate_point(const OperatingPoint& pt) {
  require_positive(pt.m, "antenna count M");
  require_positive(pt.k, "UE count K");
  require_positive(pt.rho, "power-control coefficient rho");
  if (!(pt.beta >= 1.0)) throw parameter_error("pilot reuse factor beta must be >= 1");
}

inline bool pilots_fit(double beta, double k, int block_len) {
  return beta * k <= block_len * (1.0 + feasibility_slack);
}

/// Gamma(alpha/2 + 1) / (pi lambda)^(alpha/2), the mean of d^alpha for a
/// Rayleigh(1/sqrt(2 pi lambda)) distance.
inline double mean_pathloss_power(double alpha, double lambda) {
  return std::tgamma(alpha / 2.0 + 1.0) / std::pow(std::numbers::pi * lambda, alpha / 2.0);
}

}  // namespace detail

/// sigma^2 / rho, exactly zero in the dense-network limit or for rho = inf.
inline double noise_to_power(const OperatingPoint& pt, const PropagationModel& prop) {
  if (pt.asymptotic() || std::isinf(pt.rho)) return 0.0;
  return prop.noise / pt.rho;
}

/// Lower bound on the average uplink SINR with MRC and MMSE estimation.
inline double sinr_lower_bound(const OperatingPoint& pt, const PropagationModel& prop) {
  prop.validate();
  detail::validate_point(pt);
  const double a = prop.alpha;
  const double x = noise_to_power(pt, prop);
  const double k = pt.k;
  const double b = pt.beta;
  const double denom = (k + x) * (1.0 + 2.0 / (b * (a - 2.0)) + x) + (2.0 * k / (a - 2.0)) * (1.0 + x) +
                       (k / b) * (4.0 / ((a - 2.0) * (a - 2.0)) + 1.0 / (a - 1.0)) + pt.m / (b * (a - 1.0));
  return pt.m / denom;
}

/// Prelog 1 - beta K / S; throws when the pilots do not fit the block.
inline double pilot_prelog(const OperatingPoint& pt, const PropagationModel& prop) {
  if (!detail::pilots_fit(pt.beta, pt.k, prop.block_len)) {
    throw infeasible_error("infeasible: pilots exceed coherence block");
  }
  return std::max(0.0, 1.0 - pt.beta * pt.k / prop.block_len);
}

/// (1 - beta K / S) log2(1 + SINR), bit/symbol/user.
inline double se_lower_bound(const OperatingPoint& pt, const PropagationModel& prop) {
  const double sinr = sinr_lower_bound(pt, prop);
  return pilot_prelog(pt, prop) * std::log2(1.0 + sinr);
}

/// lambda K SE, bit/symbol/km^2. Zero density gives zero.
inline double area_spectral_efficiency(const OperatingPoint& pt, const PropagationModel& prop) {
  if (pt.lambda < 0.0) throw parameter_error("BS density must be nonnegative");
  if (pt.lambda == 0.0) return 0.0;
  return pt.lambda * pt.k * se_lower_bound(pt, prop);
}

/// E{p} = rho omega Gamma(alpha/2+1) / (pi lambda)^(alpha/2), J/symbol.
inline double average_uplink_power(const OperatingPoint& pt, const PropagationModel& prop) {
  prop.validate();
  if (!(pt.lambda > 0.0)) throw parameter_error("BS density must be positive");
  if (pt.rho < 0.0) throw parameter_error("rho must be nonnegative");
  if (pt.asymptotic() || pt.rho == 0.0) return 0.0;
  return pt.rho * prop.omega * detail::mean_pathloss_power(prop.alpha, pt.lambda);
}

/// Circuit energy of one cell: C0 + C1 K + D0 M + D1 M K.
inline double circuit_energy_per_cell(double m, double k, const HardwareModel& hw) {
  return hw.c0 + hw.c1 * k + hw.d0 * m + hw.d1 * m * k;
}

/// Energy spent by one cell per symbol, radiated plus circuit.
inline double energy_per_cell(const OperatingPoint& pt, const PropagationModel& prop, const HardwareModel& hw) {
  hw.validate();
  const double s = prop.block_len;
  const double radiated = (s - pt.beta * pt.k + 1.0) / s * average_uplink_power(pt, prop) / hw.eta * pt.k;
  return radiated + circuit_energy_per_cell(pt.m, pt.k, hw);
}

/// lambda times energy_per_cell, J/symbol/km^2.
inline double area_energy_consumption(const OperatingPoint& pt, const PropagationModel& prop,
                                      const HardwareModel& hw) {
  if (pt.asymptotic()) throw parameter_error("area energy consumption needs a finite BS density");
  return pt.lambda * energy_per_cell(pt, prop, hw);
}

/// Assembles SINR, SE, ASE, AEC and EE at one operating point.
///
/// Pilots that exceed the block are reported as infeasible with zero
/// spectral efficiency rather than thrown. In the dense-network limit ASE and
/// AEC are per cell.
inline EEReport energy_efficiency(const OperatingPoint& pt, const PropagationModel& prop, const HardwareModel& hw) {
  EEReport r;
  r.asymptotic = pt.asymptotic();
  r.sinr = sinr_lower_bound(pt, prop);
  const bool fits = detail::pilots_fit(pt.beta, pt.k, prop.block_len);
  r.se_per_ue = fits ? se_lower_bound(pt, prop) : 0.0;

  const double cell_energy = energy_per_cell(pt, prop, hw);
  if (r.asymptotic) {
    r.ase = pt.k * r.se_per_ue;
    r.aec = cell_energy;
  } else {
    r.ase = pt.lambda * pt.k * r.se_per_ue;
    r.aec = pt.lambda * cell_energy;
  }
  if (!(r.aec > 0.0)) throw degenerate_model_error("area energy consumption is zero");
  r.ee = r.ase / r.aec;
  r.feasible = fits && pt.beta >= 1.0 && r.sinr >= pt.gamma * (1.0 - feasibility_slack);
  return r;
}

/// Pilot coefficients of the dense-network limit (rho -> infinity):
/// B1 = K(4/(a-2)^2 + 1/(a-1) + 2/(a-2)) + M/(a-1), B2 = K(1 + 2/(a-2)).
struct LimitCoefficients {
  double b1 = 0.0;
  double b2 = 0.0;
};

inline LimitCoefficients limit_coefficients(double m, double k, const PropagationModel& prop) {
  const double a = prop.alpha;
  return {k * (4.0 / ((a - 2.0) * (a - 2.0)) + 1.0 / (a - 1.0) + 2.0 / (a - 2.0)) + m / (a - 1.0),
          k * (1.0 + 2.0 / (a - 2.0))};
}

struct AsymptoticValue {
  double ee = 0.0;    ///< bit/Joule, negative when beta*K > S
  double beta = 0.0;  ///< reuse factor that meets the SINR target with equality
  bool feasible = false;
};

/// EE of the dense-network limit with beta chosen to meet gamma exactly:
///
///   K (1 - (K/S) B1 gamma / (M - B2 gamma)) log2(1 + gamma) / (C0 + C1 K + D0 M + D1 M K)
///
/// Throws infeasible_error when M <= B2 gamma. A negative value or a reuse
/// factor below one is returned with feasible = false.
inline AsymptoticValue asymptotic_objective(double m, double k, double gamma, const PropagationModel& prop,
                                            const HardwareModel& hw) {
  prop.validate();
  hw.validate();
  detail::require_positive(m, "antenna count M");
  detail::require_positive(k, "UE count K");
  detail::require_positive(gamma, "SINR target gamma");
  const auto [b1, b2] = limit_coefficients(m, k, prop);
  if (!(m > b2 * gamma)) {
    throw infeasible_error("infeasible: SINR target unreachable with M <= B2 gamma");
  }
  AsymptoticValue v;
  v.beta = b1 * gamma / (m - b2 * gamma);
  const double s = prop.block_len;
  v.ee = k * (1.0 - k / s * v.beta) * std::log2(1.0 + gamma) / circuit_energy_per_cell(m, k, hw);
  v.feasible = v.ee > 0.0 && v.beta >= 1.0 - feasibility_slack;
  return v;
}

}  // namespace eedeploy

#endif  // EEDEPLOY_MODEL_HPP
