#include "psdo/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace psdo {

json to_json(const Witness& w) {
  json j;
  j["kind"] = w.kind == Witness::Cartesian ? "cartesian" : "polar";
  j["x"] = w.x;
  if (w.kind == Witness::Cartesian) {
    j["xi"] = w.xi;
    j["tau"] = w.tau;
  } else {
    j["phi"] = w.phi;
    j["rho"] = w.rho;
  }
  j["theta"] = w.theta;
  j["min_singular_value"] = w.min_singular_value;
  return j;
}

json to_json(const Sigma3Certificate& c) {
  return json{{"K", c.K},
              {"sv_K", c.sv_K},
              {"sv_2K", c.sv_2K},
              {"drift", c.drift},
              {"pass", c.pass}};
}

json to_json(const EllipticityReport& r) {
  json j;
  j["verdicts"] = r.verdicts;
  j["pass"] = r.pass();
  j["constant"] = r.constant;
  j["sigma3"] = to_json(r.sigma3);
  if (r.witness) j["witness"] = to_json(*r.witness);
  return j;
}

json to_json(const DecayMeasurement& d) {
  return json{
      {"taus", d.taus}, {"distances", d.distances}, {"slope", d.slope}};
}

json to_json(const MembershipVerdict& v) {
  return json{{"pass", v.pass},
              {"measured_bound", v.measured_bound},
              {"slope", v.slope},
              {"quad_error", v.quad_error}};
}

json to_json(const Check& c) {
  return json{{"name", c.name},
              {"pass", c.pass},
              {"value", c.value},
              {"threshold", c.threshold},
              {"comparison", c.comparison}};
}

json ReportEnvelope::to_envelope_json() const {
  json j;
  j["artifact_version"] = artifact_version;
  j["experiment"] = experiment;
  j["config"] = config;
  j["checks"] = json::array();
  for (const auto& c : checks) j["checks"].push_back(to_json(c));
  j["results"] = results;
  j["pass"] = pass();
  j["wall_clock_seconds"] = wall_clock_seconds;
  return j;
}

std::string CsvTable::to_string() const {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    out += header[i];
    out += (i + 1 < header.size()) ? ',' : '\n';
  }
  char buf[64];
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out += buf;
      out += (i + 1 < row.size()) ? ',' : '\n';
    }
  }
  return out;
}

CsvTable residual_table(const std::vector<Lambda>& lambdas,
                        const std::vector<double>& inverse_norm,
                        const std::vector<double>& residual_left,
                        const std::vector<double>& residual_right,
                        const std::vector<double>& oracle_gap) {
  CsvTable t;
  t.header = {"tau",           "theta",          "inverse_norm",
              "residual_left", "residual_right", "oracle_gap"};
  auto at = [](const std::vector<double>& v, size_t i) {
    return i < v.size() ? v[i] : std::numeric_limits<double>::quiet_NaN();
  };
  for (size_t i = 0; i < lambdas.size(); ++i)
    t.rows.push_back({lambdas[i].tau, lambdas[i].theta, at(inverse_norm, i),
                      at(residual_left, i), at(residual_right, i),
                      at(oracle_gap, i)});
  return t;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) fail(Err::ConfigInvalid, "cannot open output file " + path);
  f << content;
}

}  // namespace psdo
