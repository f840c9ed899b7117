#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "psdo/calculus.hpp"
#include "psdo/ellipticity.hpp"
#include "psdo/toeplitz.hpp"

namespace psdo {

using json = nlohmann::json;

json to_json(const Witness& w);
json to_json(const Sigma3Certificate& c);
json to_json(const EllipticityReport& r);
json to_json(const DecayMeasurement& d);
json to_json(const MembershipVerdict& v);

// one named invariant check with its measured value
struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparison = "<=";
};

json to_json(const Check& c);

struct ReportEnvelope {
  std::string artifact_version = "0.1.0";
  json config;
  std::string experiment;
  std::vector<Check> checks;
  json results;
  double wall_clock_seconds = 0.0;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  json to_envelope_json() const;
};

// CSV with '.' decimal, comma separator, header row; rows tagged (tau, theta)
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::string to_string() const;
};

// residual table in the standard column layout
CsvTable residual_table(const std::vector<Lambda>& lambdas,
                        const std::vector<double>& inverse_norm,
                        const std::vector<double>& residual_left,
                        const std::vector<double>& residual_right,
                        const std::vector<double>& oracle_gap);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace psdo
