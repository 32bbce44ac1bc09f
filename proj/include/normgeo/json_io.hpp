#pragma once

#include <json.hpp>
#include <string>

#include "normgeo/busemann.hpp"
#include "normgeo/finsler.hpp"
#include "normgeo/geodesy.hpp"
#include "normgeo/norms.hpp"

namespace normgeo::io {

using nlohmann::json;

// Schemas:
//   Norm:           {"variant":"pnorm","p":2|"inf","dim":2}
//                   {"variant":"polytope","vertices":[[..],..]}
//   MetricSample:   {"points":[{"id":"a","coords":[..]?},..],
//                    "distances":[["a","b",1.0],..]}
//   GeodesicRecord: {"stations":[[t,"id"],..]}
//   SampledRay:     {"base":"id","stations":[[t,"id"],..]}
//   Oracle:         {"generator":"pnorm","p":..,"domain":{"min":[..],"max":[..]}}
//                   {"generator":"polytope","vertices":[..],"domain":..}
//                   {"generator":"affine_scaled_euclidean","domain":..}

json norm_to_json(const Norm& norm);
Norm norm_from_json(const json& j);

json metric_sample_to_json(const MetricSample& space);
MetricSample metric_sample_from_json(const json& j);

json geodesic_to_json(const GeodesicRecord& record);
GeodesicRecord geodesic_from_json(const json& j);
std::vector<GeodesicRecord> geodesics_from_json(const json& j);

json ray_to_json(const SampledRay& ray);
SampledRay ray_from_json(const json& j);

Box box_from_json(const json& j);
json box_to_json(const Box& box);
MetricOracle oracle_from_json(const json& j);

/// Deterministic serialization: keys sorted (nlohmann's default object is
/// already ordered), every floating value rendered with 17 significant
/// digits so identical inputs give byte-identical reports.
std::string dump_canonical(const json& j, int indent = 2);

std::string format_real(double v);

/// Write via temp file + rename so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);
json parse_file(const std::string& path);

}  // namespace normgeo::io
