#include "coreset/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace coreset {

static_assert(std::endian::native == std::endian::little,
              "binary point format is little-endian");

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FileFormat format_from_name(const std::string& name) {
  if (name == "auto") return FileFormat::Auto;
  if (name == "csv") return FileFormat::Csv;
  if (name == "binary" || name == "f64le" || name == "bin") return FileFormat::Binary;
  fail(errc::invalid_argument, "unknown format: " + name);
}

namespace {

constexpr char kPointsMagic[5] = {'C', 'S', 'P', 'S', '1'};
constexpr char kDiscreteMagic[5] = {'C', 'S', 'D', 'I', '1'};

FileFormat resolve(const std::string& path, FileFormat fmt) {
  if (fmt != FileFormat::Auto) return fmt;
  return path.size() >= 4 && path.substr(path.size() - 4) == ".csv" ? FileFormat::Csv
                                                                    : FileFormat::Binary;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, std::size_t row) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    fail(errc::io_bad_value, "row " + std::to_string(row) + ": not a number: " + s);
  return v;
}

RawPoints load_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_missing_file, path);
  std::string line;
  if (!std::getline(in, line)) fail(errc::io_malformed_header, path + ": empty file");

  const std::vector<std::string> header = split_csv_line(line);
  bool has_weight = false;
  std::size_t d = header.size();
  if (!header.empty() && header.back() == "weight") {
    has_weight = true;
    --d;
  }
  if (d == 0) fail(errc::io_malformed_header, path + ": no coordinate columns");
  for (std::size_t c = 0; c < d; ++c)
    if (header[c] != "x" + std::to_string(c + 1))
      fail(errc::io_malformed_header, path + ": expected column x" + std::to_string(c + 1));

  RawPoints raw;
  raw.coords = Matrix(0, d);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      fail(errc::io_malformed_record,
           path + ": row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
               " fields, expected " + std::to_string(header.size()));
    std::vector<double> values(d);
    for (std::size_t c = 0; c < d; ++c) {
      values[c] = parse_double(fields[c], row);
      if (!std::isfinite(values[c]))
        fail(errc::io_bad_value, path + ": non-finite coordinate at row " + std::to_string(row));
    }
    raw.coords.append_row(values.data());
    if (has_weight) {
      const double w = parse_double(fields[d], row);
      if (!std::isfinite(w))
        fail(errc::io_bad_value, path + ": non-finite weight at row " + std::to_string(row));
      if (w < 0.0)
        fail(errc::io_negative_weight, path + ": row " + std::to_string(row));
      raw.weights.push_back(w);
    }
  }
  if (raw.coords.rows == 0) fail(errc::io_malformed_record, path + ": no data rows");
  return raw;
}

RawPoints load_points_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_missing_file, path);
  char magic[5];
  std::uint8_t flags = 0;
  std::uint32_t n = 0, d = 0;
  in.read(magic, 5);
  in.read(reinterpret_cast<char*>(&flags), 1);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&d), 4);
  if (!in || std::memcmp(magic, kPointsMagic, 5) != 0)
    fail(errc::io_malformed_header, path + ": bad magic");
  if (n == 0 || d == 0) fail(errc::io_malformed_header, path + ": empty dimensions");

  RawPoints raw;
  raw.coords = Matrix(n, d);
  in.read(reinterpret_cast<char*>(raw.coords.data.data()),
          static_cast<std::streamsize>(sizeof(double) * raw.coords.data.size()));
  if (flags & 1) {
    raw.weights.resize(n);
    in.read(reinterpret_cast<char*>(raw.weights.data()),
            static_cast<std::streamsize>(sizeof(double) * n));
  }
  if (!in) fail(errc::io_malformed_record, path + ": truncated payload");
  for (std::size_t i = 0; i < raw.coords.data.size(); ++i)
    if (!std::isfinite(raw.coords.data[i]))
      fail(errc::io_bad_value, path + ": non-finite coordinate at row " +
                                   std::to_string(i / raw.coords.cols));
  for (double w : raw.weights) {
    if (!std::isfinite(w)) fail(errc::io_bad_value, path + ": non-finite weight");
    if (w < 0.0) fail(errc::io_negative_weight, path);
  }
  return raw;
}

}  // namespace

RawPoints load_points(const std::string& path, FileFormat fmt) {
  return resolve(path, fmt) == FileFormat::Csv ? load_points_csv(path)
                                               : load_points_binary(path);
}

void save_points(const std::string& path, const RawPoints& raw, FileFormat fmt) {
  if (resolve(path, fmt) == FileFormat::Csv) {
    std::ostringstream out;
    for (std::size_t c = 0; c < raw.dim(); ++c) out << (c ? "," : "") << "x" << c + 1;
    if (!raw.weights.empty()) out << ",weight";
    out << "\n";
    for (std::size_t i = 0; i < raw.n(); ++i) {
      for (std::size_t c = 0; c < raw.dim(); ++c)
        out << (c ? "," : "") << format_double(raw.coords.at(i, c));
      if (!raw.weights.empty()) out << "," << format_double(raw.weights[i]);
      out << "\n";
    }
    write_text_file(path, out.str());
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_missing_file, path);
  const std::uint8_t flags = raw.weights.empty() ? 0 : 1;
  const std::uint32_t n = static_cast<std::uint32_t>(raw.n());
  const std::uint32_t d = static_cast<std::uint32_t>(raw.dim());
  out.write(kPointsMagic, 5);
  out.write(reinterpret_cast<const char*>(&flags), 1);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(raw.coords.data.data()),
            static_cast<std::streamsize>(sizeof(double) * raw.coords.data.size()));
  if (flags)
    out.write(reinterpret_cast<const char*>(raw.weights.data()),
              static_cast<std::streamsize>(sizeof(double) * raw.weights.size()));
}

void save_coreset_csv(const std::string& path, const WeightedCoreset& omega) {
  std::ostringstream out;
  for (std::size_t c = 0; c < omega.points.cols; ++c) out << (c ? "," : "") << "x" << c + 1;
  out << ",weight,provenance\n";
  for (std::size_t i = 0; i < omega.size(); ++i) {
    for (std::size_t c = 0; c < omega.points.cols; ++c)
      out << (c ? "," : "") << format_double(omega.points.at(i, c));
    out << "," << format_double(omega.weights[i]) << "," << omega.prov[i].to_string() << "\n";
  }
  write_text_file(path, out.str());
}

WeightedCoreset load_coreset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_missing_file, path);
  std::string line;
  if (!std::getline(in, line)) fail(errc::io_malformed_header, path + ": empty file");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 3 || header[header.size() - 2] != "weight" ||
      header.back() != "provenance")
    fail(errc::io_malformed_header, path + ": expected x1..xd,weight,provenance");
  const std::size_t d = header.size() - 2;

  WeightedCoreset omega;
  omega.points = Matrix(0, d);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      fail(errc::io_malformed_record, path + ": row " + std::to_string(row));
    std::vector<double> values(d);
    for (std::size_t c = 0; c < d; ++c) values[c] = parse_double(fields[c], row);
    omega.points.append_row(values.data());
    const double w = parse_double(fields[d], row);
    if (!(w > 0.0)) fail(errc::io_negative_weight, path + ": row " + std::to_string(row));
    omega.weights.push_back(w);
    omega.prov.push_back(Provenance::parse(fields[d + 1]));
  }
  return omega;
}

json coreset_sidecar(const BuildInfo& info, int k, const PowerParams& params) {
  json groups = json::array();
  for (const GroupStat& g : info.groups)
    groups.push_back({{"id", g.key.to_string()},
                      {"mass", g.mass},
                      {"cost", g.cost},
                      {"draws", g.draws},
                      {"distinct_sampled", g.distinct_sampled}});
  return json{{"schema", "coreset-sidecar/1"},
              {"k", k},
              {"z", params.z},
              {"eps", params.epsilon},
              {"delta", info.delta},
              {"delta_capped", info.delta_capped},
              {"c_delta", info.c_delta},
              {"use_min_factor", info.use_min_factor},
              {"seed", info.seed},
              {"total_weight", info.total_weight},
              {"total_mass", info.total_mass},
              {"proxied_mass", info.proxied_mass},
              {"seeding_cost", info.seeding_cost},
              {"preprocess",
               {{"dropped_zero_weight", info.dropped_zero_weight},
                {"scale", info.scale},
                {"projected", info.projected},
                {"projection_dim", info.projection_dim},
                {"precoreset_applied", info.precoreset_applied}}},
              {"groups", groups}};
}

json report_to_json(const DistortionReport& rep) {
  return json{{"schema", "distortion-report/1"},
              {"k", rep.k},
              {"z", rep.z},
              {"eps", rep.eps},
              {"solutions_evaluated", rep.solutions_evaluated},
              {"solutions_skipped_zero_cost", rep.solutions_skipped_zero_cost},
              {"max_error", rep.max_error},
              {"mean_error", rep.mean_error},
              {"p50", rep.p50},
              {"p90", rep.p90},
              {"p99", rep.p99},
              {"total_weight", rep.total_weight},
              {"total_mass", rep.total_mass},
              {"weight_within_2eps", rep.weight_within_2eps},
              {"build", {{"delta", rep.delta}, {"seed", rep.seed}, {"c_delta", rep.c_delta}}}};
}

void save_report_rows_csv(const std::string& path, const DistortionReport& rep) {
  std::ostringstream out;
  out << "suite,index,cost_p,cost_coreset,error\n";
  for (const auto& row : rep.rows)
    out << row.suite << "," << row.index << "," << format_double(row.cost_p) << ","
        << format_double(row.cost_coreset) << "," << format_double(row.error) << "\n";
  write_text_file(path, out.str());
}

json catalog_to_json(const GroupCatalog& cat, const Clustering& clu, const PointSet& p) {
  json groups = json::array();
  for (const Group& g : cat.groups)
    groups.push_back({{"id", g.key.to_string()},
                      {"distinct", g.members.size()},
                      {"mass", g.mass},
                      {"cost", g.cost}});
  std::int64_t proxied_mass = 0;
  std::size_t proxied_points = 0;
  for (std::size_t i = 0; i < p.n(); ++i)
    if (cat.label[i] == LabelKind::Proxied) {
      proxied_mass += p.multiplicity[i];
      ++proxied_points;
    }
  json clusters = json::array();
  for (std::size_t c = 0; c < clu.k(); ++c)
    clusters.push_back({{"size", clu.cluster_size[c]},
                        {"cost", clu.cluster_cost[c]},
                        {"avg_cost", clu.delta[c]},
                        {"outer_group", cat.cluster_outer_group[c]}});
  return json{{"schema", "group-catalog/1"},
              {"groups", groups},
              {"proxied_points", proxied_points},
              {"proxied_mass", proxied_mass},
              {"clusters", clusters}};
}

void save_discrete_instance(const std::string& bin_path, const std::string& manifest_path,
                            const DiscreteInstance& inst) {
  std::ofstream out(bin_path, std::ios::binary);
  if (!out) fail(errc::io_missing_file, bin_path);
  const std::uint8_t flags = inst.star ? 1 : 0;
  const std::uint32_t copies = inst.copies, nc = inst.n_clients_per_copy,
                      ns = inst.n_centers_per_copy, z = inst.z;
  out.write(kDiscreteMagic, 5);
  out.write(reinterpret_cast<const char*>(&flags), 1);
  out.write(reinterpret_cast<const char*>(&copies), 4);
  out.write(reinterpret_cast<const char*>(&nc), 4);
  out.write(reinterpret_cast<const char*>(&ns), 4);
  out.write(reinterpret_cast<const char*>(&z), 4);
  out.write(reinterpret_cast<const char*>(&inst.d_inf), 8);
  out.write(reinterpret_cast<const char*>(&inst.eps), 8);
  out.write(reinterpret_cast<const char*>(inst.bits.data()),
            static_cast<std::streamsize>(sizeof(std::uint64_t) * inst.bits.size()));

  if (!manifest_path.empty()) {
    const json manifest{{"schema", "discrete-instance/1"},
                        {"star", inst.star},
                        {"copies", inst.copies},
                        {"clients_per_copy", inst.n_clients_per_copy},
                        {"centers_per_copy", inst.n_centers_per_copy},
                        {"z", inst.z},
                        {"delta_p", inst.delta_p},
                        {"d_inf", inst.d_inf},
                        {"eps", inst.eps},
                        {"seed", inst.seed},
                        {"asymptotic_regime_ok", inst.regime_ok},
                        {"binary", std::filesystem::path(bin_path).filename().string()}};
    write_text_file(manifest_path, manifest.dump(2) + "\n");
  }
}

DiscreteInstance load_discrete_instance(const std::string& bin_path) {
  std::ifstream in(bin_path, std::ios::binary);
  if (!in) fail(errc::io_missing_file, bin_path);
  char magic[5];
  std::uint8_t flags = 0;
  std::uint32_t copies = 0, nc = 0, ns = 0, z = 0;
  DiscreteInstance inst;
  in.read(magic, 5);
  in.read(reinterpret_cast<char*>(&flags), 1);
  in.read(reinterpret_cast<char*>(&copies), 4);
  in.read(reinterpret_cast<char*>(&nc), 4);
  in.read(reinterpret_cast<char*>(&ns), 4);
  in.read(reinterpret_cast<char*>(&z), 4);
  in.read(reinterpret_cast<char*>(&inst.d_inf), 8);
  in.read(reinterpret_cast<char*>(&inst.eps), 8);
  if (!in || std::memcmp(magic, kDiscreteMagic, 5) != 0)
    fail(errc::io_malformed_header, bin_path + ": bad magic");
  inst.star = flags & 1;
  inst.copies = static_cast<int>(copies);
  inst.n_clients_per_copy = static_cast<int>(nc);
  inst.n_centers_per_copy = static_cast<int>(ns);
  inst.z = static_cast<int>(z);
  const std::size_t edges = static_cast<std::size_t>(copies) * nc * ns;
  inst.bits.assign((edges + 63) / 64, 0);
  in.read(reinterpret_cast<char*>(inst.bits.data()),
          static_cast<std::streamsize>(sizeof(std::uint64_t) * inst.bits.size()));
  if (!in) fail(errc::io_malformed_record, bin_path + ": truncated payload");
  return inst;
}

json projection_to_json(const ProjectionMap& map) {
  return json{{"schema", "projection-map/1"},
              {"source_dim", map.source_dim},
              {"target_dim", map.target_dim},
              {"seed", map.seed},
              {"identity", map.identity}};
}

ProjectionMap projection_from_json(const json& j) {
  return make_projection(j.at("source_dim").get<std::size_t>(),
                         j.at("target_dim").get<std::size_t>(),
                         j.at("seed").get<std::uint64_t>());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_missing_file, path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_missing_file, path);
  out << content;
}

}  // namespace coreset
