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
 * \file include/eedeploy/config.hpp
 *
 * \brief Run configuration: a sectioned `key = value` text format with
 *  '#' comments. Every key is optional; omitted keys take the reference
 *  deployment values listed in default_config_text().
 *
 * Watt-denominated hardware figures are converted to J/symbol by the symbol
 * time, and omega is given in dB.
 */

#ifndef EEDEPLOY_CONFIG_HPP
#define EEDEPLOY_CONFIG_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eedeploy/model.hpp"
#include "eedeploy/optimizer.hpp"
#include "eedeploy/simulator.hpp"

namespace eedeploy {

/// Malformed configuration text. what() carries "line N: ..." when the
/// problem is tied to a line.
class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // [propagation]
  double alpha = 3.76;
  double omega_db = 130.0;
  double noise = 1e-20;  ///< J/symbol
  int block_len = 400;
  double symbol_time = 5e-8;  ///< s/symbol

  // [hardware]
  double eta = 0.39;
  double c0_watt = 10.0;
  double c1_watt = 0.1;
  double d0_watt = 0.2;
  double d1_joule_per_symbol = 1.56e-10;

  // [scenario]
  double gamma = 3.0;
  std::vector<double> gamma_grid{1.0, 3.0, 7.0};
  double lambda = infinity;
  double m = 89.0;
  double k = 10.0;
  double beta = 0.0;  ///< 0 selects the optimal reuse factor
  double rho = 0.0;   ///< 0 selects inf (dense limit) or the optimized value
  double mu = 0.0;    ///< UE density for optimize; 0 disables
  double start_m = 0.0;
  double start_k = 0.0;
  int max_antennas = 512;
  std::vector<double> lambda_grid;
  std::vector<double> mu_grid;
  std::vector<double> m_grid;
  std::vector<double> k_grid;

  // [simulation]
  std::size_t realizations = 100000;
  double window_radius = 0.0;
  std::uint64_t seed = 42;
  sim::UePlacement placement = sim::UePlacement::voronoi;
  double signal_budget = 1e8;
  unsigned threads = 0;
  double sim_lambda = 10.0;  ///< BS/km^2; the simulator needs a finite density

  // [output]
  std::string csv;
  int precision = 6;

  /// "section.key" names that were set explicitly.
  std::set<std::string> explicit_keys;

  bool is_set(const std::string& key) const { return explicit_keys.count(key) > 0; }

  PropagationModel propagation() const {
    return {alpha, std::pow(10.0, omega_db / 10.0), noise, block_len};
  }

  HardwareModel hardware() const {
    return {eta, c0_watt * symbol_time, c1_watt * symbol_time, d0_watt * symbol_time, d1_joule_per_symbol};
  }

  sim::McConfig monte_carlo() const {
    sim::McConfig mc;
    mc.realization_count = realizations;
    mc.window_radius = window_radius;
    mc.seed = seed;
    const double r = rho > 0.0 ? rho : infinity;
    const double b = beta > 0.0 ? beta : std::max(1.0, optimal_pilot_reuse(m, k, r, gamma, propagation()).beta_star);
    mc.point = {sim_lambda, m, k, b, r, gamma};
    mc.propagation = propagation();
    mc.placement = placement;
    mc.signal_budget = signal_budget;
    mc.threads = threads;
    return mc;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& v) {
  if (v == "inf" || v == "+inf" || v == "infinity") return infinity;
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw config_error("expected a number, got '" + v + "'");
  }
  if (used != v.size()) throw config_error("expected a number, got '" + v + "'");
  return x;
}

inline long long parse_integer(const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw config_error("expected an integer, got '" + v + "'");
  return x;
}

inline std::uint64_t parse_unsigned(const std::string& v) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw config_error("expected a nonnegative integer, got '" + v + "'");
  }
  return x;
}

}  // namespace detail

/// Parses a grid specification, "log:a:b:n", "lin:a:b:n" or a comma list.
/// Throws config_error on malformed input or
/// an empty grid.
inline std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  const std::string s = detail::trim(spec);
  auto split = [](const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(detail::trim(item));
    return parts;
  };
  if (s.rfind("log:", 0) == 0 || s.rfind("lin:", 0) == 0) {
    const auto parts = split(s, ':');
    if (parts.size() != 4) throw config_error("grid '" + s + "' must look like log:a:b:n or lin:a:b:n");
    const double a = detail::parse_double(parts[1]);
    const double b = detail::parse_double(parts[2]);
    const long long n = detail::parse_integer(parts[3]);
    if (n < 1) throw config_error("grid '" + s + "' is empty");
    const bool log = parts[0] == "log";
    if (log && !(a > 0.0 && b > 0.0)) throw config_error("log grid '" + s + "' needs positive end points");
    for (long long i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      out.push_back(log ? std::pow(10.0, std::log10(a) + t * (std::log10(b) - std::log10(a))) : a + t * (b - a));
    }
    out.back() = n == 1 ? a : b;
  } else {
    for (const auto& p : split(s, ',')) {
      if (!p.empty()) out.push_back(detail::parse_double(p));
    }
  }
  if (out.empty()) throw config_error("grid '" + s + "' is empty");
  return out;
}

inline constexpr const char* default_lambda_grid = "log:0.1:100:13";
inline constexpr const char* default_mu_grid = "log:100:100000:13";
inline constexpr const char* default_m_grid = "lin:10:200:191";
inline constexpr const char* default_k_grid = "lin:1:20:20";

/// Reference configuration with every key at its default value.
inline std::string default_config_text() {
  return R"(# eedeploy run configuration; every key is optional.
[propagation]
alpha = 3.76          # pathloss exponent
omega_db = 130        # propagation loss at 1 km, dB
noise = 1e-20         # sigma^2, J/symbol
block_len = 400       # S, symbols per coherence block
symbol_time = 5e-8    # s/symbol

[hardware]
eta = 0.39                    # amplifier efficiency
c0_watt = 10                  # static power per BS
c1_watt = 0.1                 # circuit power per UE
d0_watt = 0.2                 # circuit power per BS antenna
d1_joule_per_symbol = 1.56e-10

[scenario]
gamma = 3
gamma_grid = 1,3,7            # lambda sweep curves
lambda = inf                  # BS/km^2; inf = dense-network limit
m = 89
k = 10
# beta = 7.24                 # omitted: optimal reuse factor
# rho = 1e-19                 # omitted: inf in the limit, optimized otherwise
# mu = 1e4                    # UE/km^2; enables the UE-density optimum
# start_m = 20                # alternating optimization start
# start_k = 1
max_antennas = 512
lambda_grid = log:0.1:100:13
mu_grid = log:100:100000:13
m_grid = lin:10:200:191
k_grid = lin:1:20:20

[simulation]
realizations = 100000
window_radius = 0             # km; 0 = automatic (1% truncation)
seed = 42
placement = voronoi           # voronoi | poisson
signal_budget = 1e8           # antenna-realizations for the link-level pass
threads = 0                   # 0 = $EEDEPLOY_THREADS or all cores
lambda = 10                   # BS/km^2

[output]
csv =
precision = 6
)";
}

/// Parses configuration text. `origin` prefixes diagnostics.
inline RunConfig parse_config(std::istream& in, const std::string& origin = "config") {
  RunConfig c;
  std::string section;
  std::string line;
  int line_no = 0;
  std::string lambda_grid = default_lambda_grid;
  std::string mu_grid = default_mu_grid;
  std::string m_grid = default_m_grid;
  std::string k_grid = default_k_grid;

  auto fail = [&](const std::string& msg) {
    throw config_error(origin + ": line " + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string text = detail::trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') fail("unterminated section header '" + text + "'");
      section = detail::trim(text.substr(1, text.size() - 2));
      static const std::set<std::string> known{"propagation", "hardware", "scenario", "simulation", "output"};
      if (!known.count(section)) fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail("expected 'key = value', got '" + text + "'");
    if (section.empty()) fail("key outside of any section");
    const std::string key = detail::trim(text.substr(0, eq));
    const std::string value = detail::trim(text.substr(eq + 1));
    const std::string name = section + "." + key;
    if (value.empty() && name != "output.csv") fail("missing value for '" + key + "'");

    try {
      auto num = [&] { return detail::parse_double(value); };
      if (name == "propagation.alpha") c.alpha = num();
      else if (name == "propagation.omega_db") c.omega_db = num();
      else if (name == "propagation.noise") c.noise = num();
      else if (name == "propagation.block_len") c.block_len = static_cast<int>(detail::parse_integer(value));
      else if (name == "propagation.symbol_time") c.symbol_time = num();
      else if (name == "hardware.eta") c.eta = num();
      else if (name == "hardware.c0_watt") c.c0_watt = num();
      else if (name == "hardware.c1_watt") c.c1_watt = num();
      else if (name == "hardware.d0_watt") c.d0_watt = num();
      else if (name == "hardware.d1_joule_per_symbol") c.d1_joule_per_symbol = num();
      else if (name == "scenario.gamma") c.gamma = num();
      else if (name == "scenario.gamma_grid") c.gamma_grid = parse_grid(value);
      else if (name == "scenario.lambda") c.lambda = num();
      else if (name == "scenario.m") c.m = num();
      else if (name == "scenario.k") c.k = num();
      else if (name == "scenario.beta") c.beta = num();
      else if (name == "scenario.rho") c.rho = num();
      else if (name == "scenario.mu") c.mu = num();
      else if (name == "scenario.start_m") c.start_m = num();
      else if (name == "scenario.start_k") c.start_k = num();
      else if (name == "scenario.max_antennas") c.max_antennas = static_cast<int>(detail::parse_integer(value));
      else if (name == "scenario.lambda_grid") lambda_grid = value;
      else if (name == "scenario.mu_grid") mu_grid = value;
      else if (name == "scenario.m_grid") m_grid = value;
      else if (name == "scenario.k_grid") k_grid = value;
      else if (name == "simulation.realizations") c.realizations = detail::parse_unsigned(value);
      else if (name == "simulation.window_radius") c.window_radius = num();
      else if (name == "simulation.seed") c.seed = detail::parse_unsigned(value);
      else if (name == "simulation.placement") {
        if (value == "voronoi") c.placement = sim::UePlacement::voronoi;
        else if (value == "poisson") c.placement = sim::UePlacement::poisson;
        else fail("placement must be 'voronoi' or 'poisson', got '" + value + "'");
      }
      else if (name == "simulation.signal_budget") c.signal_budget = num();
      else if (name == "simulation.threads") c.threads = static_cast<unsigned>(detail::parse_unsigned(value));
      else if (name == "simulation.lambda") c.sim_lambda = num();
      else if (name == "output.csv") c.csv = value;
      else if (name == "output.precision") c.precision = static_cast<int>(detail::parse_integer(value));
      else fail("unknown key '" + key + "' in [" + section + "]");
    } catch (const config_error& e) {
      const std::string what = e.what();
      if (what.rfind(origin + ": line ", 0) == 0) throw;
      fail(what);
    }
    c.explicit_keys.insert(name);
  }

  auto grid = [&](const std::string& spec, const char* key) {
    try {
      return parse_grid(spec);
    } catch (const config_error& e) {
      throw config_error(origin + ": " + key + ": " + e.what());
    }
  };
  c.lambda_grid = grid(lambda_grid, "lambda_grid");
  c.mu_grid = grid(mu_grid, "mu_grid");
  c.m_grid = grid(m_grid, "m_grid");
  c.k_grid = grid(k_grid, "k_grid");
  if (c.precision < 1 || c.precision > 17) throw config_error(origin + ": precision must lie in [1, 17]");
  return c;
}

inline RunConfig parse_config_text(const std::string& text, const std::string& origin = "config") {
  std::istringstream in(text);
  return parse_config(in, origin);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace eedeploy

#endif  // EEDEPLOY_CONFIG_HPP
