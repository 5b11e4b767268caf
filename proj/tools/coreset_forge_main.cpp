// coreset-forge: build and audit (k,z)-clustering coresets, generate
// lower-bound instances, and run the sampling Monte Carlos.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

#include "coreset/experiment.hpp"
#include "coreset/gen.hpp"
#include "coreset/metric.hpp"
#include "coreset/parallel.hpp"
#include "coreset/rng.hpp"
#include "coreset/stats.hpp"

using namespace coreset;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOperational = 1;
constexpr int kExitCriterionFailed = 2;

struct GlobalOpts {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string json_out;
  std::string config_path;
};

void apply_threads(const GlobalOpts& g) {
  if (g.threads > 0) {
    set_thread_count(g.threads);
    return;
  }
  if (const char* env = std::getenv("CORESET_FORGE_THREADS"))
    set_thread_count(std::atoi(env));
}

void emit(const GlobalOpts& g, const json& out) {
  if (!g.json_out.empty())
    write_text_file(g.json_out, out.dump(2) + "\n");
  else
    std::cout << out.dump(2) << "\n";
}

std::vector<SuiteSpec> parse_suites(const std::string& spec, std::uint64_t seed) {
  // "RandomBox:200,SubsetOfP:100,..."; seeds derived from the master seed.
  std::vector<SuiteSpec> suites;
  std::istringstream in(spec);
  std::string item;
  std::size_t idx = 0;
  while (std::getline(in, item, ',')) {
    const auto sep = item.find(':');
    const std::string name = sep == std::string::npos ? item : item.substr(0, sep);
    const int count = sep == std::string::npos ? 0 : std::stoi(item.substr(sep + 1));
    suites.push_back({SuiteSpec::kind_from_name(name), count,
                      substream_seed(seed, 0xa0d17ULL + idx)});
    ++idx;
  }
  return suites;
}

RawPoints load_instance(const std::string& input, const std::string& generator,
                        const std::string& format) {
  if (!generator.empty()) return generate_from_spec(generator);
  return load_points(input, format_from_name(format));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coreset-forge: (k,z)-clustering coreset construction and auditing"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master RNG seed");
  app.add_option("--threads", g.threads,
                 "worker threads (default: CORESET_FORGE_THREADS or all cores)");
  app.add_option("--json-out", g.json_out, "write the summary JSON here instead of stdout");
  app.add_option("--config", g.config_path, "run config JSON (subcommand flags override it)");

  // ---- build ----------------------------------------------------------
  auto* build = app.add_subcommand("build", "construct a coreset (Algorithm-1 pipeline)");
  std::string b_input, b_generator, b_format = "auto", b_out = "out", b_suites;
  int b_k = 0, b_z = 2;
  double b_eps = 0.1;
  SamplerConfig b_sampler;
  std::size_t b_project_dim = 0, b_precoreset = 0;
  build->add_option("--input", b_input, "points file (csv or CSPS1 binary)");
  build->add_option("--generator", b_generator, "instance spec, e.g. 'gauss n=1000 d=10 k=5'");
  build->add_option("--format", b_format, "input format: auto|csv|binary");
  build->add_option("--k", b_k, "number of centers");
  build->add_option("--z", b_z, "cost power (1 = median, 2 = means)");
  build->add_option("--eps", b_eps, "target accuracy in (0, 1/2)");
  build->add_option("--delta", b_sampler.delta, "samples per group (0 = default formula)");
  build->add_option("--c-delta", b_sampler.c_delta, "constant in the default delta formula");
  build->add_flag("--min-factor", b_sampler.use_min_factor, "apply the min(eps^-z,k) factor");
  build->add_option("--refine-sweeps", b_sampler.refine_sweeps, "local-search sweeps");
  build->add_option("--project-dim", b_project_dim, "Gaussian projection target dimension");
  build->add_option("--precoreset-bound", b_precoreset, "distinct-point bound for the pre-pass");
  build->add_option("--suites", b_suites, "audit suites, e.g. 'RandomBox:200,DzSeeded:100'");
  build->add_option("--out-dir", b_out, "output directory");

  // ---- eval -----------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "audit an existing coreset against its instance");
  std::string e_points, e_coreset, e_format = "auto", e_suites = "RandomBox:100", e_rows_csv;
  int e_k = 0, e_z = 2;
  double e_eps = 0.1;
  eval->add_option("--points", e_points, "instance points file")->required();
  eval->add_option("--coreset", e_coreset, "coreset CSV")->required();
  eval->add_option("--format", e_format, "points format: auto|csv|binary");
  eval->add_option("--k", e_k, "number of centers")->required();
  eval->add_option("--z", e_z, "cost power");
  eval->add_option("--eps", e_eps, "accuracy for the pass/fail gates");
  eval->add_option("--suites", e_suites, "audit suites");
  eval->add_option("--rows-csv", e_rows_csv, "also write per-solution rows here");

  // ---- lb-gen ---------------------------------------------------------
  auto* lbgen = app.add_subcommand("lb-gen", "emit lower-bound instances");
  std::string l_kind = "basis", l_out = "lb";
  int l_k = 2, l_z = 2, l_clients = 0, l_centers = 64;
  double l_eps = 1.0 / 12.0;
  lbgen->add_option("--kind", l_kind, "basis | subinstance | star");
  lbgen->add_option("--k", l_k, "k (basis: even; star: copies)");
  lbgen->add_option("--z", l_z, "cost power");
  lbgen->add_option("--eps", l_eps, "epsilon");
  lbgen->add_option("--clients", l_clients, "clients per copy (0 = formula default)");
  lbgen->add_option("--centers", l_centers, "candidate centers per copy");
  lbgen->add_option("--out", l_out, "output path prefix");

  // ---- approx ---------------------------------------------------------
  auto* approx = app.add_subcommand("approx", "seeding only: D^z seed + local search");
  std::string a_input, a_generator, a_format = "auto", a_out;
  int a_k = 0, a_z = 2, a_sweeps = 1;
  approx->add_option("--input", a_input, "points file");
  approx->add_option("--generator", a_generator, "instance spec");
  approx->add_option("--format", a_format, "input format");
  approx->add_option("--k", a_k, "number of centers")->required();
  approx->add_option("--z", a_z, "cost power");
  approx->add_option("--refine-sweeps", a_sweeps, "local-search sweeps");
  approx->add_option("--out", a_out, "write centers CSV here");

  // ---- mc -------------------------------------------------------------
  auto* mc = app.add_subcommand("mc", "sampling Monte Carlos");
  std::string m_mode = "anticoncentration";
  int m_m = 100, m_reps = 10000, m_k = 3, m_z = 2, m_delta = 64;
  double m_p = 0.25, m_eps = 0.2;
  std::int64_t m_trials = 1000000;
  std::string m_input, m_generator = "gauss n=500 d=3 k=3 sep=10 sigma=1 seed=1";
  mc->add_option("--mode", m_mode, "anticoncentration | unbiasedness");
  mc->add_option("--m", m_m, "number of Bernoulli variables");
  mc->add_option("--p", m_p, "Bernoulli mean (<= 1/4)");
  mc->add_option("--eps", m_eps, "exceedance factor");
  mc->add_option("--trials", m_trials, "Monte Carlo trials");
  mc->add_option("--reps", m_reps, "repetitions for the unbiasedness check");
  mc->add_option("--delta", m_delta, "draws per repetition (unbiasedness)");
  mc->add_option("--k", m_k, "centers (unbiasedness)");
  mc->add_option("--z", m_z, "cost power (unbiasedness)");
  mc->add_option("--input", m_input, "points file (unbiasedness)");
  mc->add_option("--generator", m_generator, "instance spec (unbiasedness)");

  // ---- inspect --------------------------------------------------------
  auto* inspect = app.add_subcommand("inspect", "dump the group catalog for an instance");
  std::string i_input, i_generator, i_format = "auto";
  int i_k = 0, i_z = 2;
  double i_eps = 0.1;
  inspect->add_option("--input", i_input, "points file");
  inspect->add_option("--generator", i_generator, "instance spec");
  inspect->add_option("--format", i_format, "input format");
  inspect->add_option("--k", i_k, "number of centers")->required();
  inspect->add_option("--z", i_z, "cost power");
  inspect->add_option("--eps", i_eps, "epsilon");

  for (CLI::App* sub : {build, eval, lbgen, approx, mc, inspect}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    apply_threads(g);

    if (build->parsed()) {
      RunConfig cfg;
      if (!g.config_path.empty())
        cfg = config_from_json(json::parse(read_text_file(g.config_path)));
      if (!b_input.empty()) cfg.input_path = b_input;
      if (!b_generator.empty()) cfg.generator = b_generator;
      cfg.format = format_from_name(b_format);
      if (b_k > 0) cfg.k = b_k;
      if (build->count("--z")) cfg.params.z = b_z;
      if (build->count("--eps")) cfg.params.epsilon = b_eps;
      if (build->count("--delta")) cfg.sampler.delta = b_sampler.delta;
      if (build->count("--c-delta")) cfg.sampler.c_delta = b_sampler.c_delta;
      if (build->count("--min-factor")) cfg.sampler.use_min_factor = b_sampler.use_min_factor;
      if (build->count("--refine-sweeps")) cfg.sampler.refine_sweeps = b_sampler.refine_sweeps;
      if (b_project_dim > 0) cfg.sampler.project_dim = b_project_dim;
      if (b_precoreset > 0) cfg.sampler.precoreset_bound = b_precoreset;
      if (!b_suites.empty()) cfg.suites = parse_suites(b_suites, g.seed);
      if (build->count("--out-dir")) cfg.out_dir = b_out;
      if (app.count("--seed")) cfg.master_seed = g.seed;
      cfg.threads = g.threads;

      const ResultBundle bundle = run_experiment(cfg);
      json out{{"coreset", bundle.coreset_csv_path},
               {"sidecar", bundle.sidecar_path},
               {"total_weight", bundle.build_info.total_weight},
               {"delta", bundle.build_info.delta},
               {"seconds", bundle.seconds},
               {"passed", bundle.passed}};
      if (!cfg.suites.empty()) {
        out["report"] = bundle.report_path;
        out["max_error"] = bundle.report.max_error;
      }
      emit(g, out);
      return bundle.passed ? kExitOk : kExitCriterionFailed;
    }

    if (eval->parsed()) {
      const RawPoints raw = load_points(e_points, format_from_name(e_format));
      SamplerConfig pre_cfg;  // integer rounding only, no projection
      const PointSet p = preprocess(raw, e_k, {e_z, e_eps}, pre_cfg).points;
      const WeightedCoreset omega = load_coreset_csv(e_coreset);
      const auto suites = parse_suites(e_suites, g.seed);
      const DistortionReport rep = audit(p, omega, suites, e_k, {e_z, e_eps});
      if (!e_rows_csv.empty()) save_report_rows_csv(e_rows_csv, rep);
      json out = report_to_json(rep);
      const bool passed = rep.max_error <= e_eps && rep.weight_within_2eps;
      out["passed"] = passed;
      emit(g, out);
      return passed ? kExitOk : kExitCriterionFailed;
    }

    if (lbgen->parsed()) {
      if (l_kind == "basis") {
        const BasisInstance inst = gen_basis_instance(l_k, l_eps, l_z);
        save_points(l_out + ".csps", RawPoints::from_point_set(inst.points),
                    FileFormat::Binary);
        emit(g, json{{"kind", "basis"},
                     {"d", inst.d},
                     {"q", inst.q},
                     {"ambient_dim", 2 * inst.d},
                     {"q_exact", inst.q_exact},
                     {"q_deviation", inst.q_deviation},
                     {"points", l_out + ".csps"}});
        return kExitOk;
      }
      DiscreteInstance inst;
      if (l_kind == "subinstance") {
        const int clients = l_clients > 0 ? l_clients : default_star_clients(l_eps, l_centers);
        inst = gen_subinstance(clients, l_centers, l_z, g.seed);
      } else if (l_kind == "star") {
        const int clients = l_clients > 0 ? l_clients : default_star_clients(l_eps, l_centers);
        inst = gen_star_instance(l_k, l_eps, clients, l_centers, l_z, g.seed);
      } else {
        fail(errc::invalid_argument, "unknown lb kind: " + l_kind);
      }
      save_discrete_instance(l_out + ".bin", l_out + ".json", inst);
      emit(g, json{{"kind", l_kind},
                   {"clients_per_copy", inst.n_clients_per_copy},
                   {"centers_per_copy", inst.n_centers_per_copy},
                   {"copies", inst.copies},
                   {"asymptotic_regime_ok", inst.regime_ok},
                   {"binary", l_out + ".bin"},
                   {"manifest", l_out + ".json"}});
      return kExitOk;
    }

    if (approx->parsed()) {
      const RawPoints raw = load_instance(a_input, a_generator, a_format);
      SamplerConfig pre_cfg;
      const PointSet p = preprocess(raw, a_k, {a_z, 0.1}, pre_cfg).points;
      Solution s = dz_seed(p, a_k, a_z, g.seed);
      const double seed_cost = total_cost(p, s, a_z);
      s = local_search_refine(p, s, a_z, a_sweeps, substream_seed(g.seed, 1));
      const double final_cost = total_cost(p, s, a_z);
      if (!a_out.empty()) {
        RawPoints centers;
        centers.coords = s.centers;
        save_points(a_out, centers, FileFormat::Csv);
      }
      emit(g, json{{"k", a_k},
                   {"z", a_z},
                   {"seed_cost", seed_cost},
                   {"refined_cost", final_cost},
                   {"centers", a_out}});
      return kExitOk;
    }

    if (mc->parsed()) {
      if (m_mode == "anticoncentration") {
        const McEstimate est = anticoncentration_mc(m_m, m_p, m_eps, {}, m_trials, g.seed);
        const double rate = est.estimate > 0.0
                                ? -std::log(est.estimate) / (m_eps * m_eps * m_m * m_p)
                                : std::numeric_limits<double>::infinity();
        emit(g, json{{"mode", m_mode},
                     {"m", m_m},
                     {"p", m_p},
                     {"eps", m_eps},
                     {"trials", est.trials},
                     {"estimate", est.estimate},
                     {"wilson_lo", est.wilson_lo},
                     {"wilson_hi", est.wilson_hi},
                     {"fitted_rate_c", rate}});
        return kExitOk;
      }
      if (m_mode == "unbiasedness") {
        const RawPoints raw = load_instance(m_input, m_generator, "auto");
        SamplerConfig pre_cfg;
        const PowerParams params{m_z, m_eps};
        const PointSet p = preprocess(raw, m_k, params, pre_cfg).points;
        const Solution a = dz_seed(p, m_k, m_z, substream_seed(g.seed, 2));
        const Clustering clu = build_clustering(p, a, m_z);
        const GroupCatalog cat = build_groups(p, clu, ring_decompose(clu, params), params);
        const Solution s = dz_seed(p, m_k, m_z, substream_seed(g.seed, 3));
        json groups = json::array();
        for (std::size_t gi = 0; gi < cat.groups.size(); ++gi) {
          double truth = 0.0;
          std::vector<double> cost_s(p.n(), 0.0);
          for (std::size_t i : cat.groups[gi].members) {
            cost_s[i] = point_cost({p.coords.row(i), p.dim()}, s, m_z);
            truth += static_cast<double>(p.multiplicity[i]) * cost_s[i];
          }
          double mean = 0.0;
          SamplerConfig cfg;
          cfg.delta = m_delta;
          for (int r = 0; r < m_reps; ++r) {
            cfg.seed = substream_seed(g.seed, 1000 + r);
            double est = 0.0;
            for (const auto& [idx, w] : sample_group(p, clu, cat, gi, cfg))
              est += w * cost_s[idx];
            mean += est;
          }
          mean /= m_reps;
          groups.push_back({{"group", cat.groups[gi].key.to_string()},
                            {"true_cost", truth},
                            {"mc_mean", mean},
                            {"rel_error", std::abs(mean - truth) / truth}});
        }
        emit(g, json{{"mode", m_mode}, {"reps", m_reps}, {"delta", m_delta}, {"groups", groups}});
        return kExitOk;
      }
      fail(errc::invalid_argument, "unknown mc mode: " + m_mode);
    }

    if (inspect->parsed()) {
      const RawPoints raw = load_instance(i_input, i_generator, i_format);
      SamplerConfig pre_cfg;
      const PowerParams params{i_z, i_eps};
      const PointSet p = preprocess(raw, i_k, params, pre_cfg).points;
      const Solution a = dz_seed(p, i_k, i_z, g.seed);
      const Clustering clu = build_clustering(p, a, i_z);
      const GroupCatalog cat = build_groups(p, clu, ring_decompose(clu, params), params);
      emit(g, catalog_to_json(cat, clu, p));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOperational;
  }
  return kExitOperational;
}
