#include "doctest.h"

#include <cstring>
#include <filesystem>

#include "coreset/experiment.hpp"
#include "coreset/gen.hpp"
#include "coreset/io.hpp"
#include "coreset/rng.hpp"

using namespace coreset;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("coreset_io_" + name)).string();
}

RawPoints random_raw(std::size_t n, std::size_t d, bool weights, std::uint64_t seed) {
  Rng rng(seed);
  RawPoints raw;
  raw.coords = Matrix(n, d);
  for (double& v : raw.coords.data) v = rng.normal() * std::exp(rng.uniform(-20.0, 20.0));
  if (weights)
    for (std::size_t i = 0; i < n; ++i) raw.weights.push_back(rng.uniform() * 10.0);
  return raw;
}

}  // namespace

TEST_CASE("points CSV round-trips bit-exactly") {
  const RawPoints raw = random_raw(40, 3, true, 1);
  const std::string path = tmp_path("pts.csv");
  save_points(path, raw);
  const RawPoints back = load_points(path);
  REQUIRE(back.n() == raw.n());
  REQUIRE(back.dim() == raw.dim());
  for (std::size_t i = 0; i < raw.coords.data.size(); ++i)
    CHECK(std::memcmp(&back.coords.data[i], &raw.coords.data[i], sizeof(double)) == 0);
  for (std::size_t i = 0; i < raw.weights.size(); ++i)
    CHECK(back.weights[i] == raw.weights[i]);
}

TEST_CASE("binary and CSV load equal point sets") {
  const RawPoints raw = random_raw(25, 4, true, 2);
  const std::string csv = tmp_path("pts2.csv");
  const std::string bin = tmp_path("pts2.csps");
  save_points(csv, raw);
  save_points(bin, raw, FileFormat::Binary);
  const RawPoints a = load_points(csv);
  const RawPoints b = load_points(bin);
  CHECK(a.coords == b.coords);
  CHECK(a.weights == b.weights);
}

TEST_CASE("CSV validation errors carry distinct codes") {
  const std::string path = tmp_path("bad.csv");
  write_text_file(path, "x1,x2\nnan,1.0\n");
  try {
    load_points(path);
    FAIL("expected a parse error");
  } catch (const error& e) {
    CHECK(e.code() == errc::io_bad_value);
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }

  write_text_file(path, "x1,y\n1.0,2.0\n");
  try {
    load_points(path);
    FAIL("expected a header error");
  } catch (const error& e) {
    CHECK(e.code() == errc::io_malformed_header);
  }

  write_text_file(path, "x1,weight\n1.0,-2.0\n");
  try {
    load_points(path);
    FAIL("expected a weight error");
  } catch (const error& e) {
    CHECK(e.code() == errc::io_negative_weight);
  }

  try {
    load_points(tmp_path("does_not_exist.csv"));
    FAIL("expected a missing-file error");
  } catch (const error& e) {
    CHECK(e.code() == errc::io_missing_file);
  }
}

TEST_CASE("coreset CSV round-trips weights, points, and provenance bit-exactly") {
  const PointSet p = gen_uniform_points(150, 3, 5);
  SamplerConfig cfg;
  cfg.seed = 3;
  cfg.delta = 120;
  const BuildResult res = build_coreset(p, 4, {2, 0.15}, cfg);
  const std::string path = tmp_path("coreset.csv");
  save_coreset_csv(path, res.coreset);
  const WeightedCoreset back = load_coreset_csv(path);
  REQUIRE(back.size() == res.coreset.size());
  CHECK(back.points == res.coreset.points);
  CHECK(back.weights == res.coreset.weights);
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back.prov[i] == res.coreset.prov[i]);
}

TEST_CASE("discrete instance binary round-trip") {
  const DiscreteInstance star = gen_star_instance(3, 0.25, 16, 32, 2, 9);
  const std::string bin = tmp_path("star.bin");
  const std::string manifest = tmp_path("star.json");
  save_discrete_instance(bin, manifest, star);
  const DiscreteInstance back = load_discrete_instance(bin);
  CHECK(back.copies == star.copies);
  CHECK(back.n_clients_per_copy == star.n_clients_per_copy);
  CHECK(back.n_centers_per_copy == star.n_centers_per_copy);
  CHECK(back.z == star.z);
  CHECK(back.star == star.star);
  CHECK(back.d_inf == star.d_inf);
  CHECK(back.bits == star.bits);
  const auto manifest_json = nlohmann::json::parse(read_text_file(manifest));
  CHECK(manifest_json["copies"] == 3);
}

TEST_CASE("group catalog dump has the expected shape") {
  const PointSet p = gen_uniform_points(100, 2, 6);
  SamplerConfig cfg;
  cfg.delta = 50;
  const BuildResult res = build_coreset(p, 3, {2, 0.2}, cfg);
  const auto j = catalog_to_json(res.catalog, res.clustering, res.points);
  CHECK(j["schema"] == "group-catalog/1");
  CHECK(j["groups"].is_array());
  std::int64_t mass = j["proxied_mass"].get<std::int64_t>();
  for (const auto& g : j["groups"]) mass += g["mass"].get<std::int64_t>();
  CHECK(mass == static_cast<std::int64_t>(p.total_mass()));
}

TEST_CASE("run_experiment reproduces byte-identical artifacts") {
  RunConfig cfg;
  cfg.generator = "gauss n=400 d=3 k=3 sep=15 sigma=1 seed=4";
  cfg.k = 3;
  cfg.params = {2, 0.2};
  cfg.sampler.delta = 300;
  cfg.suites = {{SuiteSpec::Kind::RandomBox, 20, 0}, {SuiteSpec::Kind::DzSeeded, 5, 0}};
  cfg.master_seed = 42;
  cfg.out_dir = tmp_path("run_a");
  const ResultBundle a = run_experiment(cfg);
  cfg.out_dir = tmp_path("run_b");
  const ResultBundle b = run_experiment(cfg);
  CHECK(read_text_file(a.coreset_csv_path) == read_text_file(b.coreset_csv_path));
  CHECK(a.report.max_error == b.report.max_error);

  // Config echo can be re-parsed and round-trips.
  const RunConfig echoed = config_from_json(a.config_echo);
  CHECK(echoed.k == cfg.k);
  CHECK(echoed.master_seed == cfg.master_seed);
  CHECK(config_to_json(echoed) == a.config_echo);
}

TEST_CASE("run_experiment with a missing input leaves no partial outputs") {
  RunConfig cfg;
  cfg.input_path = tmp_path("missing_input.csv");
  cfg.k = 2;
  cfg.params = {2, 0.2};
  cfg.out_dir = tmp_path("never_created");
  std::filesystem::remove_all(cfg.out_dir);
  CHECK_THROWS_AS(run_experiment(cfg), error);
  CHECK_FALSE(std::filesystem::exists(cfg.out_dir));
}

TEST_CASE("generator specs build the documented instances") {
  const RawPoints basis = generate_from_spec("basis k=2 eps=0.08333333333333333 z=2");
  CHECK(basis.n() == 8);    // d = k * q = 2 * 4
  CHECK(basis.dim() == 16);  // ambient 2d

  const RawPoints gauss = generate_from_spec("gauss n=100 d=5 k=4 sep=10 sigma=1 seed=2");
  CHECK(gauss.n() == 100);
  CHECK(gauss.dim() == 5);

  CHECK_THROWS_AS(generate_from_spec("nope n=1"), error);
  CHECK_THROWS_AS(generate_from_spec("gauss d=5"), error);
}
