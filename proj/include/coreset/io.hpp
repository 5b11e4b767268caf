#pragma once

#include <string>

#include "json.hpp"

#include "coreset/evaluate.hpp"
#include "coreset/lb_instances.hpp"
#include "coreset/projection.hpp"
#include "coreset/sampler.hpp"

namespace coreset {

enum class FileFormat { Auto, Csv, Binary };

FileFormat format_from_name(const std::string& name);

/// CSV: header `x1..xd[,weight]`. Binary: magic "CSPS1", u8 flags (bit0 =
/// weight block), u32 n, u32 d, n*d little-endian f64, then optional n f64
/// weights. Auto picks by extension (.csv vs anything else).
RawPoints load_points(const std::string& path, FileFormat fmt = FileFormat::Auto);
void save_points(const std::string& path, const RawPoints& raw,
                 FileFormat fmt = FileFormat::Auto);

/// Coreset interchange CSV: `x1..xd,weight,provenance`; doubles printed with
/// 17 significant digits so the round-trip is bit-exact.
void save_coreset_csv(const std::string& path, const WeightedCoreset& omega);
WeightedCoreset load_coreset_csv(const std::string& path);

nlohmann::json coreset_sidecar(const BuildInfo& info, int k, const PowerParams& params);

nlohmann::json report_to_json(const DistortionReport& rep);
void save_report_rows_csv(const std::string& path, const DistortionReport& rep);

/// Diagnostic dump for the `inspect` subcommand.
nlohmann::json catalog_to_json(const GroupCatalog& cat, const Clustering& clu, const PointSet& p);

/// Discrete instances: compact binary (header + packed bit matrix) plus a
/// JSON manifest.
void save_discrete_instance(const std::string& bin_path, const std::string& manifest_path,
                            const DiscreteInstance& inst);
DiscreteInstance load_discrete_instance(const std::string& bin_path);

/// Projection maps serialize as seed + dimensions; the matrix is regenerated.
nlohmann::json projection_to_json(const ProjectionMap& map);
ProjectionMap projection_from_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Shortest exact decimal form of a double (17 significant digits).
std::string format_double(double v);

}  // namespace coreset
