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
 * \file include/eedeploy/commands.hpp
 *
 * \brief The evaluate / optimize / sweep / simulate commands behind the
 *  command-line tool. Each writes a human-readable report, optionally a
 *  CSV file, and returns the process exit code.
 *
 * Exit codes: 0 success, 1 usage or configuration error, 2 infeasible
 * model, 3 a simulation check failed, 4 no simulation check failed but at
 * least one was inconclusive.
 */

#ifndef EEDEPLOY_COMMANDS_HPP
#define EEDEPLOY_COMMANDS_HPP

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "eedeploy/config.hpp"
#include "eedeploy/csv.hpp"
#include "eedeploy/model.hpp"
#include "eedeploy/optimizer.hpp"
#include "eedeploy/parallel.hpp"
#include "eedeploy/simulator.hpp"

namespace eedeploy::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_infeasible = 2,
  exit_check_failed = 3,
  exit_inconclusive = 4,
};

struct CommandOptions {
  std::string axis = "lambda";
  std::string out;  ///< CSV path; empty uses [output] csv, then none
};

namespace detail {

inline std::string mbit(double bit_per_joule) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << bit_per_joule / 1e6 << " Mbit/J";
  return os.str();
}

/// Keys relevant to the model whose defaults were used.
inline std::string defaulted_keys(const RunConfig& c) {
  static const char* keys[] = {"propagation.alpha",  "propagation.omega_db",     "propagation.noise",
                               "propagation.block_len", "propagation.symbol_time", "hardware.eta",
                               "hardware.c0_watt",   "hardware.c1_watt",         "hardware.d0_watt",
                               "hardware.d1_joule_per_symbol", "scenario.gamma"};
  std::string s;
  for (const char* k : keys) {
    if (!c.is_set(k)) s += (s.empty() ? "" : ", ") + std::string(k);
  }
  return s.empty() ? "none" : s;
}

/// Opens the CSV destination, or returns nullptr when no CSV is wanted.
inline std::unique_ptr<std::ofstream> open_csv(const RunConfig& c, const CommandOptions& o) {
  const std::string path = o.out.empty() ? c.csv : o.out;
  if (path.empty()) return nullptr;
  auto f = std::make_unique<std::ofstream>(path);
  if (!*f) throw config_error("cannot open output file '" + path + "'");
  return f;
}

inline void write_sweep_header(CsvWriter& w, const std::string& command, const RunConfig& c) {
  w.comment("eedeploy " + command);
  w.comment("columns: " + std::string(sweep_column_doc));
  w.comment("defaults used: " + defaulted_keys(c));
  w.header(sweep_columns);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_evaluate(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const PropagationModel prop = c.propagation();
  const HardwareModel hw = c.hardware();
  prop.validate();
  hw.validate();
  OperatingPoint pt{c.lambda, c.m, c.k, c.beta, c.rho > 0.0 ? c.rho : infinity, c.gamma};
  std::string note;
  if (!pt.asymptotic() && !(c.rho > 0.0)) {
    const FiniteEvaluation e = optimize_rho_finite_lambda(pt.lambda, pt.m, pt.k, pt.gamma, prop, hw);
    pt.rho = e.rho;
    if (!(c.beta > 0.0)) pt.beta = e.beta;
    note = "rho optimized";
  }
  if (!(pt.beta > 0.0)) {
    const PilotSolution p = optimal_pilot_reuse(pt.m, pt.k, pt.rho, pt.gamma, prop);
    pt.beta = std::max(1.0, p.beta_star);
    note += std::string(note.empty() ? "" : "; ") + "beta from the optimal reuse rule";
  }

  out << "# eedeploy evaluate\n";
  out << "# defaults used: " << detail::defaulted_keys(c) << "\n";
  if (!note.empty()) out << "# " << note << "\n";
  if (!eedeploy::detail::pilots_fit(pt.beta, pt.k, prop.block_len)) {
    out << "infeasible: pilots exceed coherence block (beta K = " << pt.beta * pt.k << " > S = " << prop.block_len
        << ")\n";
    return exit_infeasible;
  }
  const EEReport r = energy_efficiency(pt, prop, hw);
  const char* per = r.asymptotic ? "/cell" : "/km^2";
  out << "mode        " << (r.asymptotic ? "dense-network limit" : "finite density") << "\n";
  out << "lambda      " << pt.lambda << " BS/km^2\n";
  out << "M, K        " << pt.m << ", " << pt.k << "\n";
  out << "beta        " << pt.beta << "\n";
  out << "rho         " << pt.rho << " J/symbol\n";
  out << "gamma       " << pt.gamma << "\n";
  out << "sinr        " << r.sinr << "\n";
  out << "se          " << r.se_per_ue << " bit/symbol/user\n";
  out << "ase         " << r.ase << " bit/symbol" << per << "\n";
  out << "aec         " << r.aec << " J/symbol" << per << "\n";
  out << "ee          " << detail::mbit(r.ee) << "\n";
  out << "feasible    " << (r.feasible ? "yes" : "no") << "\n";

  if (auto f = detail::open_csv(c, o)) {
    CsvWriter w(*f, c.precision);
    detail::write_sweep_header(w, "evaluate", c);
    w.row(make_row("evaluate", pt.gamma, pt.lambda, pt, r));
  }
  return r.feasible ? exit_ok : exit_infeasible;
}

// ---------------------------------------------------------------------------

inline int cmd_optimize(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const PropagationModel prop = c.propagation();
  const HardwareModel hw = c.hardware();
  prop.validate();
  hw.validate();
  const double gamma = c.gamma;
  out << "# eedeploy optimize\n";
  out << "# defaults used: " << detail::defaulted_keys(c) << "\n";
  std::vector<SweepRow> rows;

  if (c.mu > 0.0) {
    const FiniteOptimum best = optimize_for_ue_density(c.mu, gamma, prop, hw, c.max_antennas);
    out << "UE density mu       " << c.mu << " UE/km^2\n";
    out << "optimum (M, K)      (" << best.m << ", " << best.k << ")\n";
    out << "BS density lambda   " << best.lambda << " BS/km^2 (mu / K)\n";
    out << "beta                " << best.beta << "\n";
    out << "rho                 " << best.rho << " J/symbol\n";
    out << "sinr                " << best.report.sinr << "\n";
    out << "ee                  " << detail::mbit(best.report.ee) << "\n";
    rows.push_back(make_row("mu_optimum", gamma, c.mu,
                            {best.lambda, double(best.m), double(best.k), best.beta, best.rho, gamma}, best.report));
  } else {
    RelaxedOptimum relaxed;
    if (c.start_m > 0.0 && c.start_k > 0.0) {
      relaxed = alternating_optimize(c.start_m, c.start_k, gamma, prop, hw);
    } else {
      relaxed = alternating_optimize(gamma, prop, hw);
    }
    const IntegerOptimum best = integer_refine(relaxed, gamma, prop, hw);
    const OperatingPoint ip{infinity, double(best.m), double(best.k), best.beta, infinity, gamma};
    const EEReport ir = energy_efficiency(ip, prop, hw);

    out << "trajectory (M, K, EE):\n";
    for (std::size_t i = 0; i < relaxed.trajectory.size(); ++i) {
      const auto& t = relaxed.trajectory[i];
      out << "  " << i << ": (" << t.m << ", " << t.k << ")  " << detail::mbit(t.ee) << "\n";
      const double beta = optimal_pilot_reuse(t.m, t.k, infinity, gamma, prop).beta_star;
      const OperatingPoint tp{infinity, t.m, t.k, std::max(1.0, beta), infinity, gamma};
      rows.push_back(make_row("trajectory", gamma, double(i), tp, energy_efficiency(tp, prop, hw)));
    }
    out << "iterations          " << relaxed.iterations << "\n";
    out << "relaxed (M**, K**)  (" << relaxed.m_star << ", " << relaxed.k_star << ")  " << detail::mbit(relaxed.ee)
        << "\n";
    out << "integer (M*, K*)    (" << best.m << ", " << best.k << ")  " << detail::mbit(best.ee) << "\n";
    out << "beta*               " << best.beta << "\n";
    out << "sinr at beta*       " << ir.sinr << "\n";
    out << "search radius       " << best.neighborhood_radius_used << "\n";
    out << "relaxed gain        " << 100.0 * (relaxed.ee / best.ee - 1.0) << " %\n";
    const auto rb = optimal_pilot_reuse(relaxed.m_star, relaxed.k_star, infinity, gamma, prop);
    const OperatingPoint rp{infinity, relaxed.m_star, relaxed.k_star, std::max(1.0, rb.beta_star), infinity, gamma};
    rows.push_back(make_row("relaxed", gamma, 0.0, rp, energy_efficiency(rp, prop, hw)));
    rows.push_back(make_row("integer", gamma, 0.0, ip, ir));
  }
  if (auto f = detail::open_csv(c, o)) {
    CsvWriter w(*f, c.precision);
    detail::write_sweep_header(w, "optimize", c);
    for (const auto& r : rows) w.row(r);
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------

namespace detail {

inline SweepRow finite_row(std::string series, double gamma, double x, const FiniteOptimum& f) {
  return make_row(std::move(series), gamma, x, {f.lambda, double(f.m), double(f.k), f.beta, f.rho, gamma}, f.report);
}

inline SweepRow infeasible_row(std::string series, double gamma, double x, double lambda) {
  SweepRow r;
  r.series = std::move(series);
  r.gamma = gamma;
  r.x = x;
  r.lambda = lambda;
  return r;
}

inline std::string series_label(const char* prefix, double v) {
  std::ostringstream os;
  os << prefix << v;
  return os.str();
}

}  // namespace detail

/// Optimized EE against BS density for every gamma in gamma_grid, followed
/// by the dense-network integer optimum (lambda = inf) of each curve.
inline std::vector<SweepRow> sweep_lambda(const RunConfig& c) {
  const PropagationModel prop = c.propagation();
  const HardwareModel hw = c.hardware();
  const auto& gs = c.gamma_grid;
  const auto& ls = c.lambda_grid;
  const std::size_t per = ls.size() + 1;
  std::vector<SweepRow> rows(gs.size() * per);
  parallel_for(rows.size(), resolve_thread_count(c.threads), [&](std::size_t i) {
    const double g = gs[i / per];
    const std::size_t j = i % per;
    const std::string label = detail::series_label("gamma=", g);
    if (j == ls.size()) {
      try {
        const IntegerOptimum io = integer_refine(alternating_optimize(g, prop, hw), g, prop, hw);
        const OperatingPoint pt{infinity, double(io.m), double(io.k), io.beta, infinity, g};
        rows[i] = make_row(label, g, infinity, pt, energy_efficiency(pt, prop, hw));
      } catch (const infeasible_error&) {
        rows[i] = detail::infeasible_row(label, g, infinity, infinity);
      }
      return;
    }
    try {
      rows[i] = detail::finite_row(label, g, ls[j], optimize_at_density(ls[j], g, prop, hw, c.max_antennas));
    } catch (const infeasible_error&) {
      rows[i] = detail::infeasible_row(label, g, ls[j], ls[j]);
    }
  });
  return rows;
}

/// For every mu: the optimum over (M, K, lambda, beta, rho) with mu = K lambda,
/// and the fixed (10, 1) and (89, 10) references.
inline std::vector<SweepRow> sweep_mu(const RunConfig& c) {
  const PropagationModel prop = c.propagation();
  const HardwareModel hw = c.hardware();
  const auto& mus = c.mu_grid;
  const double g = c.gamma;
  std::vector<SweepRow> rows(mus.size() * 3);
  parallel_for(rows.size(), resolve_thread_count(c.threads), [&](std::size_t i) {
    const double mu = mus[i / 3];
    static const char* labels[] = {"optimized", "reference_10x1", "reference_89x10"};
    const int kind = static_cast<int>(i % 3);
    try {
      FiniteOptimum f;
      if (kind == 0) f = optimize_for_ue_density(mu, g, prop, hw, c.max_antennas);
      else if (kind == 1) f = reference_for_ue_density(mu, 10, 1, g, prop, hw);
      else f = reference_for_ue_density(mu, 89, 10, g, prop, hw);
      rows[i] = detail::finite_row(labels[kind], g, mu, f);
    } catch (const infeasible_error&) {
      rows[i] = detail::infeasible_row(labels[kind], g, mu, 0.0);
    }
  });
  return rows;
}

/// Dense-network EE over the (M, K) grid with beta = beta*.
inline std::vector<SweepRow> sweep_mk_surface(const RunConfig& c) {
  const PropagationModel prop = c.propagation();
  const HardwareModel hw = c.hardware();
  const auto& ms = c.m_grid;
  const auto& ks = c.k_grid;
  const double g = c.gamma;
  std::vector<SweepRow> rows(ms.size() * ks.size());
  parallel_for(rows.size(), resolve_thread_count(c.threads), [&](std::size_t i) {
    const double m = ms[i / ks.size()];
    const double k = ks[i % ks.size()];
    SweepRow r = detail::infeasible_row("surface", g, m, infinity);
    r.m = m;
    r.k = k;
    r.rho = infinity;
    try {
      const AsymptoticValue v = asymptotic_objective(m, k, g, prop, hw);
      if (v.feasible && eedeploy::detail::pilots_fit(v.beta, k, prop.block_len)) {
        const OperatingPoint pt{infinity, m, k, v.beta, infinity, g};
        r = make_row("surface", g, m, pt, energy_efficiency(pt, prop, hw));
      } else {
        r.beta = v.beta;
      }
    } catch (const infeasible_error&) {
    }
    rows[i] = r;
  });
  return rows;
}

inline int cmd_sweep(const RunConfig& c, const CommandOptions& o, std::ostream& out, std::ostream& report) {
  c.propagation().validate();
  c.hardware().validate();
  std::vector<SweepRow> rows;
  if (o.axis == "lambda") rows = sweep_lambda(c);
  else if (o.axis == "mu") rows = sweep_mu(c);
  else if (o.axis == "mk_surface") rows = sweep_mk_surface(c);
  else throw config_error("unknown sweep axis '" + o.axis + "' (expected lambda, mu or mk_surface)");
  if (rows.empty()) throw config_error("empty sweep grid");

  auto file = detail::open_csv(c, o);
  std::ostream& csv = file ? static_cast<std::ostream&>(*file) : out;
  CsvWriter w(csv, c.precision);
  detail::write_sweep_header(w, "sweep --axis " + o.axis, c);
  for (const auto& r : rows) w.row(r);

  const SweepRow* best = nullptr;
  for (const auto& r : rows) {
    if (r.feasible && (!best || r.ee > best->ee)) best = &r;
  }
  report << "# sweep " << o.axis << ": " << rows.size() << " points";
  if (best) {
    report << ", best " << best->series << " at x = " << best->x << " (M, K) = (" << best->m << ", " << best->k
           << "), " << detail::mbit(best->ee);
  }
  report << "\n";
  return exit_ok;
}

// ---------------------------------------------------------------------------

enum class CheckStatus { pass, fail, inconclusive };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "inconclusive";
  }
}

struct CheckResult {
  std::string check;     ///< distance, power, terms, jensen, signal, truncation
  std::string quantity;
  double estimate = 0.0;
  double reference = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  CheckStatus status = CheckStatus::pass;
};

inline constexpr double z_threshold = 3.0;
inline constexpr double ks_level = 0.01;
inline constexpr double se_gap_limit = 0.10;
inline constexpr double gain_tolerance = 0.01;
inline constexpr double truncation_limit = 0.01;

/// Pass/fail verdicts for every Monte Carlo estimate. Statistical checks
/// with fewer than sim::min_conclusive_realizations draws are inconclusive.
inline std::vector<CheckResult> simulation_checks(const sim::McSummary& s) {
  const bool conclusive = s.realizations >= sim::min_conclusive_realizations;
  auto stat = [&](bool ok) {
    if (!conclusive) return CheckStatus::inconclusive;
    return ok ? CheckStatus::pass : CheckStatus::fail;
  };
  std::vector<CheckResult> out;
  out.push_back({"distance", "ks_p_value", s.ks_p_value, ks_level, 0.0, s.ks_statistic, stat(s.ks_p_value >= ks_level)});
  out.push_back({"distance", "void_property", s.void_property_held ? 1.0 : 0.0, 1.0, 0.0, 0.0,
                 s.void_property_held ? CheckStatus::pass : CheckStatus::fail});
  const auto& p = s.power;
  out.push_back({"power", "mean_distance_moment", p.distance_moment.mean, p.closed_form_moment,
                 p.distance_moment.std_error, p.z_score(), stat(p.z_score() <= z_threshold)});
  auto term = [&](const char* name, const sim::TermEstimate& t) {
    out.push_back({"terms", name, t.corrected(), t.closed_form, t.windowed.std_error, t.z_score(),
                   stat(t.z_score() <= z_threshold)});
  };
  term("collision_sum", s.terms.collision);
  term("all_ue_sum", s.terms.all_ue);
  term("coherent_sum", s.terms.coherent);
  out.push_back({"jensen", "se_at_least_bound", s.se.se.mean, s.se.closed_form, s.se.se.std_error, 0.0,
                 s.se.se.mean >= s.se.closed_form ? CheckStatus::pass : CheckStatus::fail});
  out.push_back({"jensen", "relative_gap", s.se.gap(), se_gap_limit, s.se.se.std_error / s.se.closed_form, 0.0,
                 stat(s.se.gap() <= se_gap_limit)});
  const auto& sl = s.signal;
  if (sl.realizations > 0) {
    const bool sig_conclusive = sl.realizations >= sim::min_conclusive_realizations;
    auto sig = [&](bool ok) {
      if (!sig_conclusive) return CheckStatus::inconclusive;
      return ok ? CheckStatus::pass : CheckStatus::fail;
    };
    const double gain_dev = std::abs(sl.gain_ratio.mean - 1.0);
    out.push_back({"signal", "gain_ratio", sl.gain_ratio.mean, 1.0, sl.gain_ratio.std_error,
                   sl.gain_ratio.z_score(1.0), sig(gain_dev <= gain_tolerance)});
    out.push_back({"signal", "error_variance", sl.error_variance.mean, sl.predicted_error_variance.mean,
                   sl.error_deviation.std_error, sl.error_deviation.z_score(0.0),
                   sig(sl.error_deviation.z_score(0.0) <= z_threshold)});
    out.push_back({"signal", "correlation_re", sl.correlation_re.mean, 0.0, sl.correlation_re.std_error,
                   sl.correlation_re.z_score(0.0), sig(sl.correlation_re.z_score(0.0) <= z_threshold)});
    out.push_back({"signal", "correlation_im", sl.correlation_im.mean, 0.0, sl.correlation_im.std_error,
                   sl.correlation_im.z_score(0.0), sig(sl.correlation_im.z_score(0.0) <= z_threshold)});
  } else {
    out.push_back({"signal", "link_level", 0.0, 0.0, 0.0, 0.0, CheckStatus::inconclusive});
  }
  out.push_back({"truncation", "tail_ratio", s.truncation, truncation_limit, 0.0, 0.0,
                 s.truncation <= truncation_limit * (1.0 + 1e-9) ? CheckStatus::pass : CheckStatus::fail});
  return out;
}

inline constexpr const char* check_columns = "check,quantity,estimate,reference,std_error,z,status";

/// Writes the check table. The body depends only on the configuration and
/// seed, never on the worker count.
inline void write_check_csv(std::ostream& os, const sim::McConfig& mc, const sim::McSummary& s,
                            const std::vector<CheckResult>& checks, int precision) {
  CsvWriter w(os, precision);
  w.comment("eedeploy simulate");
  w.comment("seed " + std::to_string(mc.seed) + ", realizations " + std::to_string(s.realizations) +
            ", placement " + sim::to_string(mc.placement) + ", window " + w.num(s.window_radius) + " km");
  w.comment("columns: z = |estimate - reference| / std_error where applicable; status pass|fail|inconclusive");
  w.header(check_columns);
  for (const auto& c : checks) {
    w.fields({c.check, c.quantity, w.num(c.estimate), w.num(c.reference), w.num(c.std_error), w.num(c.z),
              to_string(c.status)});
  }
}

inline int cmd_simulate(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const sim::McConfig mc = c.monte_carlo();
  const auto t0 = std::chrono::steady_clock::now();
  const sim::McSummary s = sim::run_monte_carlo(mc);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto checks = simulation_checks(s);

  const OperatingPoint& pt = mc.point;
  out << "# eedeploy simulate\n";
  out << "# seed " << mc.seed << (c.is_set("simulation.seed") ? "" : " (default)") << ", " << s.realizations
      << " realizations, placement " << sim::to_string(mc.placement) << "\n";
  out << "# point lambda " << pt.lambda << ", (M, K) = (" << pt.m << ", " << pt.k << "), beta " << pt.beta
      << ", rho " << pt.rho << "\n";
  out << "# window " << s.window_radius << " km, truncation ratio " << s.truncation << ", " << std::fixed
      << std::setprecision(1) << seconds << " s\n" << std::defaultfloat << std::setprecision(6);
  for (const auto& w : s.warnings) out << "# warning: " << w << "\n";
  bool failed = false;
  bool inconclusive = false;
  for (const auto& ch : checks) {
    out << std::left << std::setw(12) << ch.check << std::setw(22) << ch.quantity << std::right << std::setw(14)
        << ch.estimate << std::setw(14) << ch.reference << "  z " << std::setw(8) << std::setprecision(3) << ch.z
        << std::setprecision(6) << "  " << to_string(ch.status) << "\n";
    failed |= ch.status == CheckStatus::fail;
    inconclusive |= ch.status == CheckStatus::inconclusive;
  }
  if (auto f = detail::open_csv(c, o)) write_check_csv(*f, mc, s, checks, c.precision);
  if (failed) return exit_check_failed;
  return inconclusive ? exit_inconclusive : exit_ok;
}

}  // namespace eedeploy::cli

#endif  // EEDEPLOY_COMMANDS_HPP
