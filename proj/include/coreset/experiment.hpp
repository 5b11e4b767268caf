#pragma once

#include "coreset/io.hpp"

namespace coreset {

/// Everything a run needs; serialized verbatim into every output so a run can
/// be reproduced from its own artifacts.
struct RunConfig {
  std::string input_path;  // file instance, or
  std::string generator;   // generator spec, e.g. "gauss n=20000 d=10 k=10 sep=20 sigma=1 seed=1"
  FileFormat format = FileFormat::Auto;
  int k = 2;
  PowerParams params;
  SamplerConfig sampler;
  std::vector<SuiteSpec> suites;
  std::string out_dir = "out";
  std::uint64_t master_seed = 1;
  int threads = 0;
  bool write_rows_csv = false;
  bool gate_distortion = true;  // pass requires max error <= eps
  bool gate_weight = true;      // pass requires w(Omega) in (1 +- 2 eps) N

  void validate() const;
};

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

/// "gauss n=.. d=.. k=.. sep=.. sigma=.. seed=.." | "basis k=.. eps=.. z=.." |
/// "uniform n=.. d=.. seed=..".
RawPoints generate_from_spec(const std::string& spec);

struct ResultBundle {
  nlohmann::json config_echo;
  std::string coreset_csv_path;
  std::string sidecar_path;
  std::string report_path;
  DistortionReport report;
  BuildInfo build_info;
  double seconds = 0.0;
  bool passed = true;
};

/// preprocess -> build_coreset -> audit -> persist. Pure function of the
/// config including the master seed; no partial outputs on failure.
ResultBundle run_experiment(const RunConfig& cfg);

}  // namespace coreset
