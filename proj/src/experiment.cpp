#include "coreset/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <sstream>

#include "coreset/gen.hpp"
#include "coreset/lb_instances.hpp"
#include "coreset/parallel.hpp"
#include "coreset/rng.hpp"

namespace coreset {

using nlohmann::json;

void RunConfig::validate() const {
  params.validate();
  if (k < 1) fail(errc::invalid_argument, "k must be >= 1");
  if (input_path.empty() == generator.empty())
    fail(errc::invalid_argument, "exactly one of input_path / generator must be set");
  if (out_dir.empty()) fail(errc::invalid_argument, "out_dir must be set");
}

json config_to_json(const RunConfig& cfg) {
  json suites = json::array();
  for (const SuiteSpec& s : cfg.suites)
    suites.push_back(
        {{"kind", SuiteSpec::kind_name(s.kind)}, {"count", s.count}, {"seed", s.seed}});
  json sampler{{"delta", cfg.sampler.delta},
               {"c_delta", cfg.sampler.c_delta},
               {"use_min_factor", cfg.sampler.use_min_factor},
               {"refine_sweeps", cfg.sampler.refine_sweeps},
               {"exact_real_weights", cfg.sampler.exact_real_weights}};
  if (cfg.sampler.project_dim) sampler["project_dim"] = *cfg.sampler.project_dim;
  if (cfg.sampler.precoreset_bound) sampler["precoreset_bound"] = *cfg.sampler.precoreset_bound;
  if (cfg.sampler.weight_scale) sampler["weight_scale"] = *cfg.sampler.weight_scale;
  const char* fmt = cfg.format == FileFormat::Csv      ? "csv"
                    : cfg.format == FileFormat::Binary ? "binary"
                                                       : "auto";
  return json{{"schema", "run-config/1"},
              {"input_path", cfg.input_path},
              {"generator", cfg.generator},
              {"format", fmt},
              {"k", cfg.k},
              {"z", cfg.params.z},
              {"eps", cfg.params.epsilon},
              {"sampler", sampler},
              {"suites", suites},
              {"out_dir", cfg.out_dir},
              {"master_seed", cfg.master_seed},
              {"threads", cfg.threads},
              {"write_rows_csv", cfg.write_rows_csv},
              {"gate_distortion", cfg.gate_distortion},
              {"gate_weight", cfg.gate_weight}};
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  cfg.input_path = j.value("input_path", "");
  cfg.generator = j.value("generator", "");
  cfg.format = format_from_name(j.value("format", "auto"));
  cfg.k = j.at("k").get<int>();
  cfg.params.z = j.at("z").get<int>();
  cfg.params.epsilon = j.at("eps").get<double>();
  cfg.out_dir = j.value("out_dir", "out");
  cfg.master_seed = j.value("master_seed", std::uint64_t{1});
  cfg.threads = j.value("threads", 0);
  cfg.write_rows_csv = j.value("write_rows_csv", false);
  cfg.gate_distortion = j.value("gate_distortion", true);
  cfg.gate_weight = j.value("gate_weight", true);
  if (j.contains("sampler")) {
    const json& s = j["sampler"];
    cfg.sampler.delta = s.value("delta", std::int64_t{0});
    cfg.sampler.c_delta = s.value("c_delta", 200.0);
    cfg.sampler.use_min_factor = s.value("use_min_factor", false);
    cfg.sampler.refine_sweeps = s.value("refine_sweeps", 1);
    cfg.sampler.exact_real_weights = s.value("exact_real_weights", false);
    if (s.contains("project_dim")) cfg.sampler.project_dim = s["project_dim"].get<std::size_t>();
    if (s.contains("precoreset_bound"))
      cfg.sampler.precoreset_bound = s["precoreset_bound"].get<std::size_t>();
    if (s.contains("weight_scale")) cfg.sampler.weight_scale = s["weight_scale"].get<double>();
  }
  for (const json& s : j.value("suites", json::array()))
    cfg.suites.push_back({SuiteSpec::kind_from_name(s.at("kind").get<std::string>()),
                          s.value("count", 0), s.value("seed", std::uint64_t{0})});
  return cfg;
}

namespace {

std::map<std::string, std::string> parse_kv(std::istringstream& in) {
  std::map<std::string, std::string> kv;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      fail(errc::invalid_argument, "generator spec: expected key=value, got " + token);
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return kv;
}

double want(const std::map<std::string, std::string>& kv, const std::string& key, double dflt,
            bool required = false) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    if (required) fail(errc::invalid_argument, "generator spec: missing " + key);
    return dflt;
  }
  return std::stod(it->second);
}

}  // namespace

RawPoints generate_from_spec(const std::string& spec) {
  std::istringstream in(spec);
  std::string kind;
  in >> kind;
  const auto kv = parse_kv(in);
  if (kind == "gauss") {
    const auto mix = gen_gaussian_mixture(
        static_cast<std::size_t>(want(kv, "n", 0, true)),
        static_cast<std::size_t>(want(kv, "d", 0, true)), static_cast<int>(want(kv, "k", 0, true)),
        want(kv, "sep", 20.0), want(kv, "sigma", 1.0),
        static_cast<std::uint64_t>(want(kv, "seed", 1)));
    return RawPoints::from_point_set(mix.points);
  }
  if (kind == "basis") {
    const auto inst =
        gen_basis_instance(static_cast<int>(want(kv, "k", 0, true)), want(kv, "eps", 0, true),
                           static_cast<int>(want(kv, "z", 2)));
    return RawPoints::from_point_set(inst.points);
  }
  if (kind == "uniform") {
    return RawPoints::from_point_set(
        gen_uniform_points(static_cast<std::size_t>(want(kv, "n", 0, true)),
                           static_cast<std::size_t>(want(kv, "d", 0, true)),
                           static_cast<std::uint64_t>(want(kv, "seed", 1))));
  }
  fail(errc::invalid_argument, "unknown generator kind: " + kind);
}

ResultBundle run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  set_thread_count(cfg.threads);

  // Load everything before creating any output.
  RawPoints raw =
      cfg.generator.empty() ? load_points(cfg.input_path, cfg.format) : generate_from_spec(cfg.generator);

  SamplerConfig sampler = cfg.sampler;
  sampler.seed = cfg.master_seed;
  BuildResult build = build_coreset(raw, cfg.k, cfg.params, sampler);

  std::vector<SuiteSpec> suites = cfg.suites;
  for (std::size_t i = 0; i < suites.size(); ++i)
    if (suites[i].seed == 0)
      suites[i].seed = substream_seed(cfg.master_seed, 0xa0d17ULL + i);

  ResultBundle bundle;
  bundle.build_info = build.info;
  if (!suites.empty())
    bundle.report = audit(build.points, build.coreset, suites, cfg.k, cfg.params, &build.info);

  std::filesystem::create_directories(cfg.out_dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
  };
  bundle.coreset_csv_path = path("coreset.csv");
  bundle.sidecar_path = path("coreset.json");
  bundle.report_path = path("report.json");
  save_coreset_csv(bundle.coreset_csv_path, build.coreset);

  bundle.config_echo = config_to_json(cfg);
  json sidecar = coreset_sidecar(build.info, cfg.k, cfg.params);
  sidecar["config"] = bundle.config_echo;
  write_text_file(bundle.sidecar_path, sidecar.dump(2) + "\n");

  bundle.passed = true;
  if (!suites.empty()) {
    if (cfg.gate_distortion && bundle.report.max_error > cfg.params.epsilon)
      bundle.passed = false;
    if (cfg.gate_weight && !bundle.report.weight_within_2eps) bundle.passed = false;
    json report = report_to_json(bundle.report);
    report["config"] = bundle.config_echo;
    report["passed"] = bundle.passed;
    write_text_file(bundle.report_path, report.dump(2) + "\n");
    if (cfg.write_rows_csv) save_report_rows_csv(path("report_rows.csv"), bundle.report);
  }

  bundle.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json summary{{"schema", "result-bundle/1"},
               {"config", bundle.config_echo},
               {"coreset_csv", bundle.coreset_csv_path},
               {"sidecar", bundle.sidecar_path},
               {"passed", bundle.passed},
               {"seconds", bundle.seconds},
               {"total_weight", build.info.total_weight},
               {"delta", build.info.delta}};
  if (!suites.empty()) {
    summary["report"] = bundle.report_path;
    summary["max_error"] = bundle.report.max_error;
    summary["weight_within_2eps"] = bundle.report.weight_within_2eps;
  }
  write_text_file(path("experiment.json"), summary.dump(2) + "\n");
  return bundle;
}

}  // namespace coreset
