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
 * \file include/eedeploy/csv.hpp
 *
 * \brief Sweep rows and their CSV form: '#'-prefixed metadata lines, one
 *  header row, comma separators, '.' decimals, fixed significant digits.
 */

#ifndef EEDEPLOY_CSV_HPP
#define EEDEPLOY_CSV_HPP

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eedeploy/model.hpp"

namespace eedeploy {

/// One evaluated grid point.
struct SweepRow {
  std::string series;  ///< curve label, e.g. "gamma=3" or "reference_10x1"
  double gamma = 0.0;
  double x = 0.0;  ///< value of the swept variable
  double m = 0.0;
  double k = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double lambda = 0.0;
  double sinr = 0.0;
  double se = 0.0;
  double ase = 0.0;
  double aec = 0.0;
  double ee = 0.0;  ///< bit/Joule
  bool feasible = false;
};

inline constexpr const char* sweep_columns =
    "series,gamma,x,m,k,beta,rho,lambda,sinr,se,ase,aec,ee,feasible";

inline constexpr const char* sweep_column_doc =
    "x = swept value; m, k per cell; beta pilot reuse; rho J/symbol; lambda BS/km^2 (inf = dense limit); "
    "sinr; se bit/symbol/user; ase bit/symbol/km^2 and aec J/symbol/km^2 (per cell when lambda = inf); "
    "ee bit/J; feasible 0/1";

inline SweepRow make_row(std::string series, double gamma, double x, const OperatingPoint& pt, const EEReport& r) {
  return {std::move(series), gamma, x, pt.m, pt.k, pt.beta, pt.rho, pt.lambda, r.sinr, r.se_per_ue,
          r.ase, r.aec, r.ee, r.feasible};
}

/// `precision` significant digits, "inf"/"-inf"/"nan" for non-finite values.
inline std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

class CsvWriter {
public:
  CsvWriter(std::ostream& out, int precision) : out_(out), precision_(precision) {}

  void comment(const std::string& text) { out_ << "# " << text << '\n'; }

  void header(const std::string& columns) { out_ << columns << '\n'; }

  /// Writes one row of already-formatted fields.
  void fields(const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) out_ << (i ? "," : "") << f[i];
    out_ << '\n';
  }

  std::string num(double v) const { return format_number(v, precision_); }

  void row(const SweepRow& r) {
    fields({r.series, num(r.gamma), num(r.x), num(r.m), num(r.k), num(r.beta), num(r.rho), num(r.lambda),
            num(r.sinr), num(r.se), num(r.ase), num(r.aec), num(r.ee), r.feasible ? "1" : "0"});
  }

private:
  std::ostream& out_;
  int precision_;
};

/// Splits a CSV body into rows of fields, skipping '#' lines and the header.
inline std::vector<std::vector<std::string>> read_csv_body(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    rows.push_back(std::move(f));
  }
  return rows;
}

/// Parses rows written by CsvWriter::row.
inline std::vector<SweepRow> read_sweep_rows(std::istream& in) {
  std::vector<SweepRow> out;
  for (const auto& f : read_csv_body(in)) {
    if (f.size() != 14) throw std::runtime_error("sweep CSV row has " + std::to_string(f.size()) + " fields");
    auto d = [&](int i) { return std::stod(f[i]); };
    out.push_back({f[0], d(1), d(2), d(3), d(4), d(5), d(6), d(7), d(8), d(9), d(10), d(11), d(12), f[13] == "1"});
  }
  return out;
}

}  // namespace eedeploy

#endif  // EEDEPLOY_CSV_HPP
