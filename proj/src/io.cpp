// Copyright 2026 The Cosserat Observer Authors
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

#include "cosserat/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cosserat/errors.hpp"

namespace cosserat {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kTrajectoryColumns = {
    "t",   "node", "px",  "py",  "pz",  "R11", "R12", "R13", "R21", "R22", "R23", "R31",
    "R32", "R33",  "u1",  "u2",  "u3",  "q1",  "q2",  "q3",  "w1",  "w2",  "w3",  "v1",
    "v2",  "v3"};
const std::vector<std::string> kErrorColumns = {
    "t",         "linf_pos",       "linf_rot",       "linf_linvel", "linf_angvel",
    "linf_angstrain", "linf_linstrain", "l2_state", "h1_state",    "error_energy"};
const std::vector<std::string> kLogColumns = {"t",   "w1",  "w2",  "w3",  "v1",  "v2",  "v3",
                                              "R11", "R12", "R13", "R21", "R22", "R23", "R31",
                                              "R32", "R33"};
const std::vector<std::string> kStudyColumns = {
    "kind", "amplitude", "seed", "initial_error", "final_error", "steady_state_error",
    "convergence_time"};

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& field) {
  if (field.empty()) throw ConfigError("empty numeric field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || errno == ERANGE) {
    throw ConfigError("malformed number '" + field + "'");
  }
  return v;
}

// Table of doubles as CSV or as JSON {"columns": [...], "data": {col: [...]}}.
std::string table(const std::vector<std::string>& columns,
                  const std::vector<std::vector<double>>& rows, Format format,
                  const Json* extra = nullptr) {
  if (format == Format::kCsv) {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        out += number(row[c]);
      }
      out += '\n';
    }
    return out;
  }
  Json j;
  j["columns"] = columns;
  if (extra) j["metadata"] = *extra;
  Json data = Json::object();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    Json col = Json::array();
    for (const auto& row : rows) col.push_back(row[c]);
    data[columns[c]] = std::move(col);
  }
  j["data"] = std::move(data);
  return j.dump(1) + "\n";
}

std::vector<std::vector<double>> read_table(const std::string& text, Format format,
                                            const std::vector<std::string>& columns,
                                            Json* metadata = nullptr) {
  std::vector<std::vector<double>> rows;
  if (format == Format::kCsv) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("missing CSV header");
    std::string expected;
    for (std::size_t c = 0; c < columns.size(); ++c) expected += (c ? "," : "") + columns[c];
    if (line != expected) throw ConfigError("unexpected CSV header '" + line + "'");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      std::istringstream fields(line);
      std::string f;
      while (std::getline(fields, f, ',')) row.push_back(parse_number(f));
      if (row.size() != columns.size()) throw ConfigError("CSV row has wrong field count");
      rows.push_back(std::move(row));
    }
    return rows;
  }
  Json j;
  try {
    j = Json::parse(text);
    if (metadata && j.contains("metadata")) *metadata = j["metadata"];
    const Json& data = j.at("data");
    const std::size_t n = data.at(columns.front()).size();
    rows.assign(n, std::vector<double>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const Json& col = data.at(columns[c]);
      if (col.size() != n) throw ConfigError("JSON columns differ in length");
      for (std::size_t r = 0; r < n; ++r) rows[r][c] = col[r].get<double>();
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed JSON table: ") + e.what());
  }
  return rows;
}

Vec3 vec3(const Json& j, const char* name) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(std::string(name) + " needs 3 numbers");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

void check_keys(const Json& j, const char* section, std::set<std::string> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(section) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown field '" + key + "' in " + section);
    }
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string tip_name(TipCondition c) { return c == TipCondition::kStrong ? "strong" : "penalty"; }

std::string schedule_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::kPaper: return "paper";
    case ScheduleKind::kConstant: return "constant";
    case ScheduleKind::kNone: return "none";
  }
  return "paper";
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw ConfigError("unknown format '" + name + "' (csv|json)");
}

std::string extension(Format format) { return format == Format::kCsv ? ".csv" : ".json"; }

ExperimentConfig config_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    check_keys(j, "config",
               {"preset", "rod", "grid", "integrator", "loads", "observer", "initial", "study",
                "seed", "output"});
    const std::string preset = j.value("preset", std::string("paper"));
    if (preset == "soft") {
      c = ExperimentConfig::soft();
    } else if (preset != "paper") {
      throw ConfigError("unknown preset '" + preset + "' (paper|soft)");
    }
    if (j.contains("rod")) {
      const Json& r = j["rod"];
      check_keys(r, "rod",
                 {"length_m", "radius_m", "density_kg_m3", "youngs_modulus_pa",
                  "shear_modulus_pa", "axial_shear_stiffness_scale", "rotary_inertia_scale",
                  "damping_ratio_s"});
      RodMaterial& m = c.material;
      read(r, "length_m", m.length_m);
      read(r, "radius_m", m.radius_m);
      read(r, "density_kg_m3", m.density_kg_m3);
      read(r, "youngs_modulus_pa", m.youngs_modulus_pa);
      read(r, "shear_modulus_pa", m.shear_modulus_pa);
      read(r, "axial_shear_stiffness_scale", m.axial_shear_stiffness_scale);
      read(r, "rotary_inertia_scale", m.rotary_inertia_scale);
      read(r, "damping_ratio_s", m.damping_ratio_s);
    }
    if (j.contains("grid")) {
      const Json& g = j["grid"];
      check_keys(g, "grid", {"nodes", "observer_nodes"});
      read(g, "nodes", c.nodes);
      read(g, "observer_nodes", c.observer_nodes);
    }
    if (j.contains("integrator")) {
      const Json& g = j["integrator"];
      check_keys(g, "integrator",
                 {"dt_s", "cfl_safety", "end_time_s", "reorthonormalize_every", "tip_condition",
                  "dissipation"});
      read(g, "dt_s", c.dt_s);
      read(g, "cfl_safety", c.cfl_safety);
      read(g, "end_time_s", c.end_time_s);
      read(g, "reorthonormalize_every", c.reorthonormalize_every);
      read(g, "dissipation", c.dissipation);
      if (g.contains("tip_condition")) {
        const std::string t = g["tip_condition"].get<std::string>();
        if (t == "penalty") {
          c.tip_condition = TipCondition::kPenalty;
        } else if (t == "strong") {
          c.tip_condition = TipCondition::kStrong;
        } else {
          throw ConfigError("tip_condition must be penalty or strong");
        }
      }
    }
    if (j.contains("loads")) {
      const Json& l = j["loads"];
      check_keys(l, "loads",
                 {"gravity_m_s2", "tip_force_n", "tendons", "schedule", "constant_tensions_n"});
      if (l.contains("gravity_m_s2")) c.gravity_m_s2 = vec3(l["gravity_m_s2"], "gravity_m_s2");
      if (l.contains("tip_force_n")) c.tip_force_n = vec3(l["tip_force_n"], "tip_force_n");
      read(l, "tendons", c.tendons);
      if (l.contains("schedule")) {
        const std::string s = l["schedule"].get<std::string>();
        if (s == "paper") {
          c.schedule = ScheduleKind::kPaper;
        } else if (s == "constant") {
          c.schedule = ScheduleKind::kConstant;
        } else if (s == "none") {
          c.schedule = ScheduleKind::kNone;
        } else {
          throw ConfigError("schedule must be paper, constant or none");
        }
      }
      read(l, "constant_tensions_n", c.constant_tensions_n);
    }
    if (j.contains("observer")) {
      const Json& o = j["observer"];
      check_keys(o, "observer", {"gain", "initial_estimate"});
      read(o, "gain", c.gain);
      if (o.value("initial_estimate", std::string("straight")) != "straight") {
        throw ConfigError("initial_estimate supports only 'straight'");
      }
    }
    if (j.contains("initial")) {
      const Json& i = j["initial"];
      check_keys(i, "initial",
                 {"configuration", "strain", "relax_damping_per_s", "relax_kinetic_energy_j",
                  "relax_max_time_s"});
      read(i, "configuration", c.initial_configuration);
      read(i, "relax_damping_per_s", c.relax_damping_per_s);
      read(i, "relax_kinetic_energy_j", c.relax_kinetic_energy_j);
      read(i, "relax_max_time_s", c.relax_max_time_s);
      if (i.contains("strain")) {
        std::vector<Twist> strain;
        for (const Json& row : i["strain"]) {
          if (!row.is_array() || row.size() != 6) throw ConfigError("strain rows need 6 numbers");
          Twist x;
          for (int k = 0; k < 6; ++k) x[k] = row[k].get<double>();
          strain.push_back(x);
        }
        c.initial_strain = std::move(strain);
      }
    }
    if (j.contains("study")) {
      const Json& s = j["study"];
      check_keys(s, "study", {"kind", "amplitude"});
      if (s.contains("kind")) c.study.kind = parse_study_kind(s["kind"].get<std::string>());
      read(s, "amplitude", c.study.amplitude);
    }
    read(j, "seed", c.seed);
    if (j.contains("output")) {
      const Json& o = j["output"];
      check_keys(o, "output", {"directory", "snapshot_stride"});
      read(o, "directory", c.output_dir);
      read(o, "snapshot_stride", c.snapshot_stride);
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) { return config_from_json(read_file(path)); }

std::string config_to_json(const ExperimentConfig& c) {
  Json j;
  const RodMaterial& m = c.material;
  j["rod"] = {{"length_m", m.length_m},
              {"radius_m", m.radius_m},
              {"density_kg_m3", m.density_kg_m3},
              {"youngs_modulus_pa", m.youngs_modulus_pa},
              {"shear_modulus_pa", m.shear_modulus_pa},
              {"axial_shear_stiffness_scale", m.axial_shear_stiffness_scale},
              {"rotary_inertia_scale", m.rotary_inertia_scale},
              {"damping_ratio_s", m.damping_ratio_s}};
  j["grid"] = {{"nodes", c.nodes}, {"observer_nodes", c.observer_nodes}};
  j["integrator"] = {{"dt_s", c.dt_s},
                     {"cfl_safety", c.cfl_safety},
                     {"end_time_s", c.end_time_s},
                     {"reorthonormalize_every", c.reorthonormalize_every},
                     {"tip_condition", tip_name(c.tip_condition)},
                     {"dissipation", c.dissipation}};
  j["loads"] = {{"gravity_m_s2", {c.gravity_m_s2.x(), c.gravity_m_s2.y(), c.gravity_m_s2.z()}},
                {"tip_force_n", {c.tip_force_n.x(), c.tip_force_n.y(), c.tip_force_n.z()}},
                {"tendons", c.tendons},
                {"schedule", schedule_name(c.schedule)},
                {"constant_tensions_n", c.constant_tensions_n}};
  j["observer"] = {{"gain", c.gain}, {"initial_estimate", "straight"}};
  Json initial = {{"configuration", c.initial_configuration},
                  {"relax_damping_per_s", c.relax_damping_per_s},
                  {"relax_kinetic_energy_j", c.relax_kinetic_energy_j},
                  {"relax_max_time_s", c.relax_max_time_s}};
  if (c.initial_strain) {
    Json rows = Json::array();
    for (const Twist& x : *c.initial_strain) rows.push_back({x[0], x[1], x[2], x[3], x[4], x[5]});
    initial["strain"] = std::move(rows);
  }
  j["initial"] = std::move(initial);
  j["study"] = {{"kind", to_string(c.study.kind)}, {"amplitude", c.study.amplitude}};
  j["seed"] = c.seed;
  j["output"] = {{"directory", c.output_dir}, {"snapshot_stride", c.snapshot_stride}};
  return j.dump(2) + "\n";
}

std::string trajectory_to_string(const Trajectory& trajectory, Format format) {
  std::vector<std::vector<double>> rows;
  for (const SimulationState& s : trajectory.snapshots) {
    for (int i = 0; i < s.size(); ++i) {
      std::vector<double> row = {s.time, static_cast<double>(i)};
      const Pose& g = s.poses[i];
      for (int k = 0; k < 3; ++k) row.push_back(g.position[k]);
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) row.push_back(g.rotation(r, c));
      }
      for (int k = 0; k < 6; ++k) row.push_back(s.strain[i][k]);
      for (int k = 0; k < 6; ++k) row.push_back(s.velocity[i][k]);
      rows.push_back(std::move(row));
    }
  }
  return table(kTrajectoryColumns, rows, format);
}

std::string errors_to_string(const std::vector<ErrorRecord>& errors, Format format) {
  std::vector<std::vector<double>> rows;
  for (const ErrorRecord& r : errors) {
    rows.push_back({r.time, r.linf_position, r.linf_rotation, r.linf_linear_velocity,
                    r.linf_angular_velocity, r.linf_angular_strain, r.linf_linear_strain,
                    r.l2_state, r.h1_state, r.error_energy});
  }
  return table(kErrorColumns, rows, format);
}

std::string log_to_string(const MeasurementLog& log, Format format) {
  std::vector<std::vector<double>> rows;
  for (const auto& s : log.samples()) {
    std::vector<double> row = {s.time};
    for (int k = 0; k < 6; ++k) row.push_back(s.tip_velocity[k]);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) row.push_back(s.tip_rotation(r, c));
    }
    rows.push_back(std::move(row));
  }
  const Json meta = {{"dt", log.metadata.dt},
                     {"seed", log.metadata.seed},
                     {"noise", log.metadata.noise}};
  return table(kLogColumns, rows, format, &meta);
}

std::string study_to_string(const std::vector<StudyCell>& cells, Format format) {
  if (format == Format::kCsv) {
    std::string out;
    for (std::size_t c = 0; c < kStudyColumns.size(); ++c) out += (c ? "," : "") + kStudyColumns[c];
    out += '\n';
    for (const StudyCell& cell : cells) {
      out += to_string(cell.kind) + "," + number(cell.amplitude) + "," + std::to_string(cell.seed) +
             "," + number(cell.initial_error) + "," + number(cell.final_error) + "," +
             number(cell.steady_state_error) + "," +
             (cell.convergence_time ? number(*cell.convergence_time) : std::string()) + "\n";
    }
    return out;
  }
  Json j;
  j["columns"] = kStudyColumns;
  Json data = Json::object();
  for (const std::string& col : kStudyColumns) data[col] = Json::array();
  for (const StudyCell& cell : cells) {
    data["kind"].push_back(to_string(cell.kind));
    data["amplitude"].push_back(cell.amplitude);
    data["seed"].push_back(cell.seed);
    data["initial_error"].push_back(cell.initial_error);
    data["final_error"].push_back(cell.final_error);
    data["steady_state_error"].push_back(cell.steady_state_error);
    data["convergence_time"].push_back(cell.convergence_time ? Json(*cell.convergence_time)
                                                             : Json(nullptr));
  }
  j["data"] = std::move(data);
  return j.dump(1) + "\n";
}

std::vector<ErrorRecord> errors_from_string(const std::string& text, Format format) {
  std::vector<ErrorRecord> out;
  for (const auto& row : read_table(text, format, kErrorColumns)) {
    ErrorRecord r;
    r.time = row[0];
    r.linf_position = row[1];
    r.linf_rotation = row[2];
    r.linf_linear_velocity = row[3];
    r.linf_angular_velocity = row[4];
    r.linf_angular_strain = row[5];
    r.linf_linear_strain = row[6];
    r.l2_state = row[7];
    r.h1_state = row[8];
    r.error_energy = row[9];
    out.push_back(r);
  }
  return out;
}

MeasurementLog log_from_string(const std::string& text, Format format) {
  Json meta;
  const auto rows = read_table(text, format, kLogColumns, &meta);
  MeasurementLog log;
  for (const auto& row : rows) {
    Twist eta;
    for (int k = 0; k < 6; ++k) eta[k] = row[1 + k];
    Mat3 r;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) r(a, b) = row[7 + 3 * a + b];
    }
    log.append(row[0], eta, r);
  }
  if (meta.is_object()) {
    log.metadata.dt = meta.value("dt", 0.0);
    log.metadata.seed = meta.value("seed", std::uint64_t{0});
    log.metadata.noise = meta.value("noise", std::string("none"));
  } else if (rows.size() > 1) {
    log.metadata.dt = (rows.back()[0] - rows.front()[0]) / static_cast<double>(rows.size() - 1);
  }
  return log;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cosserat
