#include "normgeo/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace normgeo::io {

namespace {

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected a coordinate array");
  std::vector<double> c;
  for (const auto& x : j) {
    if (!x.is_number()) throw ParseError("coordinates must be numbers");
    c.push_back(x.get<double>());
  }
  return Vec(std::move(c));
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

json norm_to_json(const Norm& norm) {
  json j;
  switch (norm.kind()) {
    case NormKind::p_norm:
      j["variant"] = "pnorm";
      j["p"] = norm.p();
      j["dim"] = norm.dim();
      break;
    case NormKind::sup_norm:
      j["variant"] = "pnorm";
      j["p"] = "inf";
      j["dim"] = norm.dim();
      break;
    case NormKind::polytope_gauge: {
      j["variant"] = "polytope";
      json verts = json::array();
      for (const auto& v : norm.vertices()) verts.push_back(vec_to_json(v));
      j["vertices"] = std::move(verts);
      break;
    }
  }
  return j;
}

Norm norm_from_json(const json& j) {
  const std::string variant = j.value("variant", "");
  if (variant == "pnorm") {
    if (!j.contains("dim")) throw ParseError("pnorm needs a dim field");
    const std::size_t dim = j.at("dim").get<std::size_t>();
    const auto& p = j.at("p");
    if (p.is_string()) {
      if (p.get<std::string>() != "inf")
        throw ParseError("p must be a number or \"inf\"");
      return Norm::sup_norm(dim);
    }
    return Norm::p_norm(p.get<double>(), dim);
  }
  if (variant == "polytope") {
    std::vector<Vec> vertices;
    for (const auto& v : j.at("vertices")) vertices.push_back(vec_from_json(v));
    return Norm::polytope_gauge(std::move(vertices));
  }
  throw ParseError("unknown norm variant: \"" + variant + "\"");
}

json metric_sample_to_json(const MetricSample& space) {
  json j;
  json points = json::array();
  for (const auto& p : space.points()) {
    json rec;
    rec["id"] = p.id;
    if (p.coords) rec["coords"] = vec_to_json(*p.coords);
    points.push_back(std::move(rec));
  }
  j["points"] = std::move(points);
  json dists = json::array();
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t k = i + 1; k < space.size(); ++k)
      dists.push_back(json::array({space.point(i).id, space.point(k).id,
                                   space.distance(i, k)}));
  j["distances"] = std::move(dists);
  return j;
}

MetricSample metric_sample_from_json(const json& j) {
  std::vector<PointRecord> points;
  for (const auto& p : j.at("points")) {
    PointRecord rec;
    rec.id = p.at("id").get<std::string>();
    if (p.contains("coords")) rec.coords = vec_from_json(p.at("coords"));
    points.push_back(std::move(rec));
  }
  std::vector<std::tuple<std::string, std::string, double>> table;
  for (const auto& d : j.value("distances", json::array())) {
    if (!d.is_array() || d.size() != 3)
      throw ParseError("distance entries are [id, id, value] triples");
    table.emplace_back(d[0].get<std::string>(), d[1].get<std::string>(),
                       d[2].get<double>());
  }
  return MetricSample(std::move(points), std::move(table));
}

json geodesic_to_json(const GeodesicRecord& record) {
  json stations = json::array();
  for (const auto& s : record.stations)
    stations.push_back(json::array({s.t, s.point}));
  return json{{"stations", std::move(stations)}};
}

GeodesicRecord geodesic_from_json(const json& j) {
  GeodesicRecord record;
  for (const auto& s : j.at("stations")) {
    if (!s.is_array() || s.size() != 2)
      throw ParseError("stations are [t, id] pairs");
    record.stations.push_back({s[0].get<double>(), s[1].get<std::string>()});
  }
  return record;
}

std::vector<GeodesicRecord> geodesics_from_json(const json& j) {
  std::vector<GeodesicRecord> records;
  if (j.is_array()) {
    for (const auto& r : j) records.push_back(geodesic_from_json(r));
  } else if (j.contains("geodesics")) {
    for (const auto& r : j.at("geodesics"))
      records.push_back(geodesic_from_json(r));
  } else {
    records.push_back(geodesic_from_json(j));
  }
  return records;
}

json ray_to_json(const SampledRay& ray) {
  json stations = json::array();
  for (const auto& [t, id] : ray.stations)
    stations.push_back(json::array({t, id}));
  return json{{"base", ray.base}, {"stations", std::move(stations)}};
}

SampledRay ray_from_json(const json& j) {
  SampledRay ray;
  ray.base = j.at("base").get<std::string>();
  for (const auto& s : j.at("stations")) {
    if (!s.is_array() || s.size() != 2)
      throw ParseError("stations are [t, id] pairs");
    ray.stations.emplace_back(s[0].get<double>(), s[1].get<std::string>());
  }
  return ray;
}

Box box_from_json(const json& j) {
  Box box;
  box.lo = vec_from_json(j.at("min"));
  box.hi = vec_from_json(j.at("max"));
  if (box.lo.dim() != box.hi.dim())
    throw ParseError("box min/max of different dimension");
  for (std::size_t i = 0; i < box.lo.dim(); ++i)
    if (!(box.lo[i] < box.hi[i])) throw ParseError("empty box domain");
  return box;
}

json box_to_json(const Box& box) {
  return json{{"min", vec_to_json(box.lo)}, {"max", vec_to_json(box.hi)}};
}

MetricOracle oracle_from_json(const json& j) {
  const std::string gen = j.value("generator", "");
  if (gen == "pnorm") {
    const Box box = box_from_json(j.at("domain"));
    const auto& p = j.at("p");
    Norm norm = p.is_string() ? Norm::sup_norm(box.dim())
                              : Norm::p_norm(p.get<double>(), box.dim());
    return MetricOracle::from_norm(box, std::move(norm));
  }
  if (gen == "polytope") {
    const Box box = box_from_json(j.at("domain"));
    std::vector<Vec> vertices;
    for (const auto& v : j.at("vertices")) vertices.push_back(vec_from_json(v));
    return MetricOracle::from_norm(box,
                                   Norm::polytope_gauge(std::move(vertices)));
  }
  if (gen == "affine_scaled_euclidean")
    return MetricOracle::affine_scaled_euclidean(box_from_json(j.at("domain")));
  throw ParseError("unknown oracle generator: \"" + gen + "\"");
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void dump_rec(const json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
  const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad_in;
        out += json(it.key()).dump();
        out += ": ";
        dump_rec(it.value(), indent, depth + 1, out);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        dump_rec(j[i], indent, depth + 1, out);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_canonical(const json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  out += "\n";
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f.good()) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json parse_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace normgeo::io
