// Copyright 2026 The eeopt Authors
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

#pragma once

// Experiment configuration (JSON), CSV tables and JSON report mirrors.

#include "eeopt/experiments.hpp"

#include "json.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace eeopt {

using Json = nlohmann::json;

/// Raised for malformed or inconsistent configuration files and flags.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// ---------------------------------------------------------------------------
// CSV.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw InvalidInput("csv: no column '" + std::string(name) + "'");
  }
};

/// Decimal with 17 significant digits (round-trips every double).
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  // from_chars keeps subnormals that strtod-based parsing reports as range errors.
  if (ec != std::errc() || ptr != end) throw InvalidInput("csv: bad number '" + s + "'");
  return v;
}

inline std::string emit_csv(const CsvTable& t) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out.str();
}

inline CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw InvalidInput("csv: row width differs from header");
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw InvalidInput("csv: missing header");
  return t;
}

namespace detail {

inline void append_indexed(std::vector<std::string>& header, const char* prefix, std::size_t k) {
  for (std::size_t i = 1; i <= k; ++i) header.push_back(std::string(prefix) + std::to_string(i));
}

inline void append_vec(std::vector<std::string>& row, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(format_number(v(i)));
}

}  // namespace detail

/// metric,solver,value,status,iterations,wall_ms,p_1..p_K,rate_1..rate_K,ee_1..ee_K
inline CsvTable solve_table(const std::vector<SolveReport>& reports) {
  require(!reports.empty(), "solve_table: no reports");
  const auto k = static_cast<std::size_t>(reports.front().powers.size());
  CsvTable t;
  t.header = {"metric", "solver", "value", "status", "iterations", "wall_ms"};
  detail::append_indexed(t.header, "p_", k);
  detail::append_indexed(t.header, "rate_", k);
  detail::append_indexed(t.header, "ee_", k);
  for (const auto& r : reports) {
    require(static_cast<std::size_t>(r.powers.size()) == k, "solve_table: reports differ in K");
    std::vector<std::string> row{std::string(to_string(r.metric)), r.solver, format_number(r.value),
                                 std::string(to_string(r.status)), std::to_string(r.iterations),
                                 format_number(r.wall_ms)};
    detail::append_vec(row, r.powers);
    detail::append_vec(row, r.rates);
    detail::append_vec(row, r.ee);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline SolveStatus parse_status(std::string_view s) {
  for (SolveStatus v : {SolveStatus::kOptimal, SolveStatus::kInfeasible, SolveStatus::kIterationCap}) {
    if (s == to_string(v)) return v;
  }
  throw InvalidInput("unknown status '" + std::string(s) + "'");
}

/// Inverse of solve_table (traces are not part of the CSV).
inline std::vector<SolveReport> parse_solve_table(const CsvTable& t) {
  const std::size_t fixed = 6;
  require(t.header.size() >= fixed + 3 && (t.header.size() - fixed) % 3 == 0, "solve csv: unexpected columns");
  const auto k = static_cast<Eigen::Index>((t.header.size() - fixed) / 3);
  std::vector<SolveReport> out;
  for (const auto& row : t.rows) {
    SolveReport r;
    r.metric = parse_metric(row[0]);
    r.solver = row[1];
    r.value = parse_number(row[2]);
    r.status = parse_status(row[3]);
    r.iterations = std::stoi(row[4]);
    r.wall_ms = parse_number(row[5]);
    r.powers.resize(k);
    r.rates.resize(k);
    r.ee.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      r.powers(i) = parse_number(row[fixed + static_cast<std::size_t>(i)]);
      r.rates(i) = parse_number(row[fixed + static_cast<std::size_t>(k + i)]);
      r.ee(i) = parse_number(row[fixed + static_cast<std::size_t>(2 * k + i)]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// pmax_dbw,solver,metric,value,iterations,wall_ms (value nan marks a failed cell).
inline CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t;
  t.header = {"pmax_dbw", "solver", "metric", "value", "iterations", "wall_ms"};
  for (const auto& r : rows) {
    const bool ok = r.error.empty() && r.report.status != SolveStatus::kInfeasible;
    t.rows.push_back({format_number(r.p_max_dbw), std::string(to_string(r.solver)),
                      std::string(to_string(r.report.metric)),
                      format_number(ok ? r.report.value : std::numeric_limits<double>::quiet_NaN()),
                      std::to_string(r.report.iterations), format_number(r.report.wall_ms)});
  }
  return t;
}

/// w_1..w_K,ee_1..ee_K
inline CsvTable pareto_table(const std::vector<ParetoPoint>& points) {
  require(!points.empty(), "pareto_table: no points");
  const auto k = static_cast<std::size_t>(points.front().weights.size());
  CsvTable t;
  detail::append_indexed(t.header, "w_", k);
  detail::append_indexed(t.header, "ee_", k);
  for (const auto& p : points) {
    std::vector<std::string> row;
    detail::append_vec(row, p.weights);
    if (p.error.empty() && p.report.status != SolveStatus::kInfeasible) {
      detail::append_vec(row, p.report.ee);
    } else {
      for (std::size_t i = 0; i < k; ++i) row.push_back("nan");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// pmax_dbw,solver,mean_iters,trials
inline CsvTable benchmark_table(const std::vector<BenchmarkRow>& rows) {
  CsvTable t;
  t.header = {"pmax_dbw", "solver", "mean_iters", "trials"};
  for (const auto& r : rows) {
    t.rows.push_back({format_number(r.p_max_dbw), std::string(to_string(r.solver)), format_number(r.mean_iterations),
                      std::to_string(r.iterations.size())});
  }
  return t;
}

// ---------------------------------------------------------------------------
// JSON mirrors.

namespace detail {

inline Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json number_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace detail

inline Json report_json(const SolveReport& r) {
  Json j;
  j["solver"] = r.solver;
  j["metric"] = std::string(to_string(r.metric));
  j["status"] = std::string(to_string(r.status));
  j["value"] = detail::number_json(r.value);
  j["powers"] = detail::vec_json(r.powers);
  j["rates"] = detail::vec_json(r.rates);
  j["ee"] = detail::vec_json(r.ee);
  j["iterations"] = r.iterations;
  j["wall_ms"] = r.wall_ms;
  j["lambda_trace"] = r.lambda_trace;
  j["objective_trace"] = r.objective_trace;
  Json runs = Json::array();
  for (const auto& b : r.brb_runs) {
    runs.push_back({{"lambda", b.lambda},
                    {"upper", b.upper},
                    {"lower", b.lower},
                    {"boxes", b.boxes},
                    {"rel_gap", b.rel_gap},
                    {"status", std::string(to_string(b.status))}});
  }
  j["brb_runs"] = runs;
  Json trace = Json::array();
  for (const auto& b : r.brb_trace) trace.push_back({detail::number_json(b.upper), detail::number_json(b.lower)});
  j["brb_trace"] = trace;
  return j;
}

inline Json sweep_json(const std::vector<SweepRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    Json j = report_json(r.report);
    j["pmax_dbw"] = r.p_max_dbw;
    if (!r.error.empty()) j["error"] = r.error;
    a.push_back(j);
  }
  return a;
}

inline Json pareto_json(const std::vector<ParetoPoint>& points) {
  Json a = Json::array();
  for (const auto& p : points) {
    Json j = report_json(p.report);
    j["weights"] = detail::vec_json(p.weights);
    if (!p.error.empty()) j["error"] = p.error;
    a.push_back(j);
  }
  return a;
}

inline Json benchmark_json(const std::vector<BenchmarkRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    a.push_back({{"pmax_dbw", r.p_max_dbw},
                 {"solver", std::string(to_string(r.solver))},
                 {"mean_iters", r.mean_iterations},
                 {"iterations", r.iterations},
                 {"values", r.values}});
  }
  return a;
}

// ---------------------------------------------------------------------------
// Configuration.

struct ExperimentConfig {
  ScenarioSpec scenario = MassiveMimoScenarioConfig{};
  EeMetric metric = EeMetric::kGee;
  SolverKind solver = SolverKind::kMonotonic;
  std::uint64_t seed = 1;
  std::size_t trials = 20;
  std::vector<double> sweep_dbw = {-50, -46, -42, -38, -34, -30, -26, -22, -18, -14, -10};
  std::vector<SolverKind> sweep_solvers = {SolverKind::kMonotonic, SolverKind::kSequential, SolverKind::kSumRate,
                                           SolverKind::kFullPower};
  std::size_t pareto_directions = 200;
  SolverKind pareto_solver = SolverKind::kMonotonic;
  std::vector<double> benchmark_dbw = {-50, -45, -40, -35, -30, -25, -20, -15, -10};
  double benchmark_rel_sq_tol = 1e-4;
  SolverSettings settings;
  std::string output;
};

namespace detail {

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

inline Vec read_vec(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + ": expected numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline Mat read_mat(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty matrix");
  Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vec row = read_vec(j[r], where);
    if (row.size() != m.cols()) throw ConfigError(where + ": ragged matrix");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

inline CVec read_cvec(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of [re, im] pairs");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (e.is_number()) {
      v(static_cast<Eigen::Index>(i)) = Complex(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      v(static_cast<Eigen::Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
    } else {
      throw ConfigError(where + ": complex entries are numbers or [re, im]");
    }
  }
  return v;
}

inline std::vector<Point2> read_points(const Json& j, const std::string& where) {
  std::vector<Point2> out;
  if (!j.is_array()) throw ConfigError(where + ": expected a list of [x, y]");
  for (const auto& p : j) {
    const Vec v = read_vec(p, where);
    if (v.size() != 2) throw ConfigError(where + ": points have two coordinates");
    out.push_back({{v(0), v(1)}});
  }
  return out;
}

inline RadioConfig read_radio(const Json& j) {
  check_keys(j,
             {"preset", "bandwidth_hz", "noise_figure_db", "n0_dbm_hz", "p_max_dbw", "psi_dbw", "mu",
              "pathloss_exponent", "reference_gain_db", "min_distance_km", "area_half_width_km"},
             "radio");
  RadioConfig r;
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "180khz") {
      r = radio_preset_180khz();
    } else if (preset != "default") {
      throw ConfigError("radio: unknown preset '" + preset + "'");
    }
  }
  read(j, "bandwidth_hz", r.bandwidth_hz);
  read(j, "noise_figure_db", r.noise_figure_db);
  read(j, "n0_dbm_hz", r.n0_dbm_hz);
  read(j, "p_max_dbw", r.p_max_dbw);
  read(j, "psi_dbw", r.psi_dbw);
  read(j, "mu", r.mu);
  read(j, "pathloss_exponent", r.pathloss_exponent);
  read(j, "reference_gain_db", r.reference_gain_db);
  read(j, "min_distance_km", r.min_distance_km);
  read(j, "area_half_width_km", r.area_half_width_km);
  if (!(r.bandwidth_hz > 0.0)) throw ConfigError("radio: bandwidth_hz must be positive");
  if (!(r.mu >= 1.0)) throw ConfigError("radio: mu must be >= 1");
  return r;
}

inline ConstraintKind read_constraint(const Json& j) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("constraint: missing 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "min-rate") {
    check_keys(j, {"type", "link", "r_min"}, "min-rate constraint");
    MinRate c;
    read(j, "link", c.link);
    read(j, "r_min", c.r_min);
    return c;
  }
  if (type == "interference-temperature") {
    check_keys(j, {"type", "coeffs", "i_max"}, "interference-temperature constraint");
    InterferenceTemperature c;
    c.coeffs = read_vec(j.at("coeffs"), "coeffs");
    read(j, "i_max", c.i_max);
    return c;
  }
  if (type == "total-power") {
    check_keys(j, {"type", "p_tot"}, "total-power constraint");
    TotalPower c;
    read(j, "p_tot", c.p_tot);
    return c;
  }
  throw ConfigError("constraint: unknown type '" + type + "'");
}

inline NetworkInstance read_explicit(const Json& j) {
  check_keys(j, {"type", "bandwidth", "sigma2", "links", "sinr", "constraints"}, "explicit scenario");
  double bandwidth = 1.0;
  double sigma2 = 1.0;
  read(j, "bandwidth", bandwidth);
  read(j, "sigma2", sigma2);
  if (!j.contains("links") || !j.at("links").is_array()) throw ConfigError("explicit scenario: 'links' list required");
  std::vector<LinkParams> links;
  for (const auto& l : j.at("links")) {
    check_keys(l, {"mu", "psi", "p_max", "weight"}, "link");
    LinkParams p;
    read(l, "mu", p.mu);
    read(l, "psi", p.psi);
    read(l, "p_max", p.p_max);
    read(l, "weight", p.weight);
    links.push_back(p);
  }
  if (!j.contains("sinr")) throw ConfigError("explicit scenario: 'sinr' required");
  const Json& s = j.at("sinr");
  if (!s.is_object() || !s.contains("model")) throw ConfigError("sinr: missing 'model'");
  const std::string model = s.at("model").get<std::string>();
  SinrModel::Params params;
  if (model == "scalar") {
    check_keys(s, {"model", "alpha", "beta"}, "scalar sinr");
    params = ScalarSinr{read_vec(s.at("alpha"), "alpha"), read_mat(s.at("beta"), "beta")};
  } else if (model == "self-interference") {
    check_keys(s, {"model", "alpha", "phi", "beta"}, "self-interference sinr");
    params = SelfInterferenceSinr{read_vec(s.at("alpha"), "alpha"), read_vec(s.at("phi"), "phi"),
                                  read_mat(s.at("beta"), "beta")};
  } else if (model == "vector-lmmse") {
    check_keys(s, {"model", "r", "v", "u"}, "vector-lmmse sinr");
    VectorLmmseSinr m;
    read(s, "r", m.r);
    const Json& v = s.at("v");
    if (!v.is_array()) throw ConfigError("v: expected v[k][i] lists");
    for (const auto& row : v) {
      std::vector<CVec> r;
      for (const auto& e : row) r.push_back(read_cvec(e, "v"));
      m.v.push_back(std::move(r));
    }
    if (s.contains("u")) {
      for (const auto& e : s.at("u")) m.u.push_back(read_cvec(e, "u"));
    } else {
      m.u.assign(m.v.size(), CVec::Zero(m.r));
    }
    params = std::move(m);
  } else {
    throw ConfigError("sinr: unknown model '" + model + "'");
  }
  std::vector<ConstraintKind> constraints;
  if (j.contains("constraints")) {
    for (const auto& c : j.at("constraints")) constraints.push_back(read_constraint(c));
  }
  return NetworkInstance(bandwidth, std::move(links), SinrModel(std::move(params), sigma2), std::move(constraints));
}

inline ScenarioSpec read_scenario(const Json& j) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("scenario: missing 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "massive-mimo") {
    check_keys(j,
               {"type", "k", "small_cells", "small_cell_antennas", "macro_position", "macro_antennas", "tau", "evm",
                "squared_estimate_numerator", "radio"},
               "massive-mimo scenario");
    MassiveMimoScenarioConfig c;
    read(j, "k", c.k);
    if (j.contains("small_cells")) c.small_cells = read_points(j.at("small_cells"), "small_cells");
    read(j, "small_cell_antennas", c.small_cell_antennas);
    if (j.contains("macro_position")) c.macro_position = read_points(Json::array({j.at("macro_position")}), "macro")[0];
    read(j, "macro_antennas", c.macro_antennas);
    read(j, "tau", c.tau);
    read(j, "evm", c.evm);
    read(j, "squared_estimate_numerator", c.squared_estimate_numerator);
    if (j.contains("radio")) c.radio = read_radio(j.at("radio"));
    if (c.k < 1) throw ConfigError("scenario: k must be >= 1");
    if (!(c.tau > 0.0)) throw ConfigError("scenario: tau must be positive");
    if (!(c.evm >= 0.0 && c.evm < 1.0)) throw ConfigError("scenario: evm must lie in [0, 1)");
    return c;
  }
  if (type == "lte") {
    check_keys(j, {"type", "k", "n_t", "n_r", "bs_positions", "beamformer", "radio"}, "lte scenario");
    LteScenarioConfig c;
    read(j, "k", c.k);
    read(j, "n_t", c.n_t);
    read(j, "n_r", c.n_r);
    if (j.contains("bs_positions")) c.bs_positions = read_points(j.at("bs_positions"), "bs_positions");
    if (j.contains("beamformer")) {
      const std::string b = j.at("beamformer").get<std::string>();
      if (b == "dominant-singular") {
        c.beamformer = BeamformerRule::kDominantSingular;
      } else if (b == "first-basis") {
        c.beamformer = BeamformerRule::kFirstBasis;
      } else {
        throw ConfigError("lte scenario: unknown beamformer '" + b + "'");
      }
    }
    if (j.contains("radio")) c.radio = read_radio(j.at("radio"));
    if (c.k < 1 || c.n_t < 1 || c.n_r < 1) throw ConfigError("lte scenario: k, n_t, n_r must be >= 1");
    return c;
  }
  if (type == "explicit") return read_explicit(j);
  throw ConfigError("scenario: unknown type '" + type + "'");
}

inline std::vector<double> read_sorted(const Json& j, const std::string& where) {
  const Vec v = read_vec(j, where);
  std::vector<double> out(v.data(), v.data() + v.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) throw ConfigError(where + ": values must be finite");
    if (i > 0 && !(out[i] > out[i - 1])) throw ConfigError(where + ": values must be strictly increasing");
  }
  return out;
}

inline void read_tolerances(const Json& j, SolverSettings& s) {
  check_keys(j,
             {"dinkelbach_epsilon", "dinkelbach_max_iter", "brb_rel_gap", "brb_max_boxes", "brb_reduction_steps",
              "warp_powers", "ratio_bounds", "sca_outer_tol", "sca_max_outer", "inner_grad_tol", "inner_max_iters",
              "barrier_weight0", "barrier_shrink", "barrier_stages", "polish"},
             "tolerances");
  read(j, "dinkelbach_epsilon", s.dinkelbach.epsilon);
  read(j, "dinkelbach_max_iter", s.dinkelbach.max_iter);
  read(j, "brb_rel_gap", s.brb.rel_gap);
  read(j, "brb_max_boxes", s.brb.max_boxes);
  read(j, "brb_reduction_steps", s.brb.reduction_steps);
  read(j, "warp_powers", s.global.warp_powers);
  read(j, "ratio_bounds", s.global.ratio_bounds);
  read(j, "sca_outer_tol", s.sca.outer_tol);
  read(j, "sca_max_outer", s.sca.max_outer);
  read(j, "inner_grad_tol", s.sca.inner.grad_tol);
  read(j, "inner_max_iters", s.sca.inner.max_iters);
  read(j, "barrier_weight0", s.sca.inner.barrier_weight0);
  read(j, "barrier_shrink", s.sca.inner.barrier_shrink);
  read(j, "barrier_stages", s.sca.inner.barrier_stages);
  read(j, "polish", s.polish);
  if (!(s.dinkelbach.epsilon > 0.0)) throw ConfigError("tolerances: dinkelbach_epsilon must be positive");
  if (!(s.brb.rel_gap > 0.0)) throw ConfigError("tolerances: brb_rel_gap must be positive");
  if (s.brb.max_boxes < 1) throw ConfigError("tolerances: brb_max_boxes must be >= 1");
  try {
    validate(s.sca);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace detail

inline ExperimentConfig parse_config(const Json& j) {
  detail::check_keys(j,
                     {"scenario", "metric", "solver", "seed", "trials", "sweep", "pareto", "benchmark", "grid",
                      "tolerances", "output"},
                     "config");
  ExperimentConfig c;
  try {
    if (j.contains("scenario")) c.scenario = detail::read_scenario(j.at("scenario"));
    if (j.contains("metric")) c.metric = parse_metric(j.at("metric").get<std::string>());
    if (j.contains("solver")) c.solver = parse_solver(j.at("solver").get<std::string>());
    detail::read(j, "seed", c.seed);
    detail::read(j, "trials", c.trials);
    detail::read(j, "output", c.output);
    if (j.contains("sweep")) {
      const Json& s = j.at("sweep");
      detail::check_keys(s, {"parameter", "values_dbw", "solvers"}, "sweep");
      if (s.contains("parameter") && s.at("parameter").get<std::string>() != "p_max") {
        throw ConfigError("sweep: only parameter 'p_max' is supported");
      }
      if (s.contains("values_dbw")) c.sweep_dbw = detail::read_sorted(s.at("values_dbw"), "sweep.values_dbw");
      if (s.contains("solvers")) {
        c.sweep_solvers.clear();
        for (const auto& n : s.at("solvers")) c.sweep_solvers.push_back(parse_solver(n.get<std::string>()));
      }
    }
    if (j.contains("pareto")) {
      const Json& p = j.at("pareto");
      detail::check_keys(p, {"directions", "solver"}, "pareto");
      detail::read(p, "directions", c.pareto_directions);
      if (p.contains("solver")) c.pareto_solver = parse_solver(p.at("solver").get<std::string>());
    }
    if (j.contains("benchmark")) {
      const Json& b = j.at("benchmark");
      detail::check_keys(b, {"values_dbw", "rel_sq_tol"}, "benchmark");
      if (b.contains("values_dbw")) c.benchmark_dbw = detail::read_sorted(b.at("values_dbw"), "benchmark.values_dbw");
      detail::read(b, "rel_sq_tol", c.benchmark_rel_sq_tol);
    }
    if (j.contains("grid")) {
      detail::check_keys(j.at("grid"), {"points_per_axis"}, "grid");
      detail::read(j.at("grid"), "points_per_axis", c.settings.grid_points);
    }
    if (j.contains("tolerances")) detail::read_tolerances(j.at("tolerances"), c.settings);
  } catch (const ConfigError&) {
    throw;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (c.trials < 1) throw ConfigError("config: trials must be >= 1");
  if (c.pareto_directions < 1) throw ConfigError("config: pareto.directions must be >= 1");
  if (c.settings.grid_points < 2) throw ConfigError("config: grid.points_per_axis must be >= 2");
  if (c.benchmark_rel_sq_tol <= 0.0) throw ConfigError("config: benchmark.rel_sq_tol must be positive");
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in, nullptr, true, true);
  } catch (const Json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace eeopt
