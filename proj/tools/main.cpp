// Command-line front-end: norm checks, Busemann values, smoothness scans,
// affine separation, evaluation embeddings, norm reconstruction, and metric
// oracle verification, with JSON reports and plot-ready CSV.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normgeo/affine.hpp"
#include "normgeo/busemann.hpp"
#include "normgeo/finsler.hpp"
#include "normgeo/geodesy.hpp"
#include "normgeo/json_io.hpp"
#include "normgeo/norms.hpp"
#include "normgeo/rng.hpp"

using namespace normgeo;
using normgeo::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;

// Named tolerances, overridable with --tol name=value.
class Tolerances {
 public:
  Tolerances() {
    values_ = {
        {"norm_axioms", 1e-12},   {"derivative_rel", 1e-9},
        {"smooth", 1e-7},         {"convexity", 1e-9},
        {"geodesic", 1e-7},       {"metric", 1e-9},
        {"separation", 1e-6},     {"pivot", 1e-8},
        {"eps_residual", 1e-7},   {"first_variation", 1e-4},
        {"kink_threshold", 5e-2}, {"welldef", 1e-8},
        {"translation", 1e-6},    {"constancy", 1e-6},
        {"busemann_linear", 1e-8}, {"busemann_ray", 1e-5},
    };
  }

  void apply(const std::vector<std::string>& overrides) {
    for (const auto& entry : overrides) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos)
        throw ParseError("--tol expects name=value, got: " + entry);
      const std::string name = entry.substr(0, eq);
      if (values_.find(name) == values_.end())
        throw ParseError("unknown tolerance name: " + name);
      try {
        values_[name] = std::stod(entry.substr(eq + 1));
      } catch (const std::exception&) {
        throw ParseError("invalid tolerance value in: " + entry);
      }
    }
  }

  double get(const std::string& name) const { return values_.at(name); }

  json to_json() const {
    json j;
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
  }

 private:
  std::map<std::string, double> values_;
};

struct CommonFlags {
  std::vector<std::string> tol_overrides;
  std::uint64_t seed = 20240501;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--tol", flags.tol_overrides,
                  "tolerance override, name=value (repeatable)");
  cmd->add_option("--seed", flags.seed, "seed for all sampling");
  cmd->add_option("--out", flags.out, "output path (default: stdout)");
  cmd->add_option("--format", flags.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

void emit(const CommonFlags& flags, const std::string& content) {
  if (flags.out.empty()) {
    std::cout << content;
  } else {
    io::write_file_atomic(flags.out, content);
  }
}

// Input files are resolved against the working directory first, then the
// corpus directory named by NORMGEO_CORPUS_DIR.
std::string resolve_input(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  if (const char* corpus = std::getenv("NORMGEO_CORPUS_DIR")) {
    const fs::path candidate = fs::path(corpus) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;  // let the open fail with a clear message
}

Vec parse_vec(const std::string& text) {
  std::vector<double> coords;
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) {
    try {
      coords.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw ParseError("invalid vector component: " + token);
    }
  }
  if (coords.empty()) throw ParseError("empty vector literal");
  return Vec(std::move(coords));
}

Norm parse_norm(const std::string& spec, std::size_t dim) {
  if (spec == "l1") return Norm::p_norm(1, dim);
  if (spec == "l2") return Norm::p_norm(2, dim);
  if (spec == "linf") return Norm::sup_norm(dim);
  if (spec == "hexagon") {
    if (dim != 2) throw ParseError("the hexagon gauge is two-dimensional");
    return Norm::polytope_gauge({Vec{1, 0}, Vec{-1, 0}, Vec{0, 1}, Vec{0, -1},
                                 Vec{1, 1}, Vec{-1, -1}});
  }
  if (spec.rfind("pnorm:", 0) == 0) {
    const std::string arg = spec.substr(6);
    if (arg == "inf") return Norm::sup_norm(dim);
    try {
      return Norm::p_norm(std::stod(arg), dim);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("invalid p in norm spec: " + spec);
    }
  }
  if (!spec.empty() && spec[0] == '@')
    return io::norm_from_json(io::parse_file(resolve_input(spec.substr(1))));
  throw ParseError("unknown norm spec: " + spec);
}

json witness_to_json(const std::vector<std::string>& ids,
                     const AffineWitness& w) {
  json values;
  for (std::size_t i = 0; i < ids.size(); ++i) values[ids[i]] = w.values[i];
  return values;
}

std::string csv_polyline(const std::vector<double>& params,
                         const std::vector<Vec>& points) {
  std::ostringstream out;
  if (points.empty()) return "";
  out << "t";
  for (std::size_t d = 0; d < points[0].dim(); ++d) out << ",x" << (d + 1);
  out << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << io::format_real(params[i]);
    for (std::size_t d = 0; d < points[i].dim(); ++d)
      out << "," << io::format_real(points[i][d]);
    out << "\n";
  }
  return out.str();
}

std::vector<Vec> ball_polyline(const std::function<double(const Vec&)>& norm,
                               std::size_t count, std::vector<double>& params) {
  std::vector<Vec> pts;
  const auto dirs = direction_grid(2, count);
  for (std::size_t k = 0; k <= count; ++k) {
    const Vec& u = dirs[k % count];
    const double r = norm(u);
    params.push_back(6.283185307179586 * static_cast<double>(k) /
                     static_cast<double>(count));
    pts.push_back((1.0 / r) * u);
  }
  return pts;
}

json base_report(const std::string& command, const CommonFlags& flags,
                 const Tolerances& tol) {
  json j;
  j["command"] = command;
  j["seed"] = flags.seed;
  j["tolerances"] = tol.to_json();
  return j;
}

// ---------------------------------------------------------------------------

int run_norm_check(const CommonFlags& flags, const Tolerances& tol,
                   const std::string& norm_spec, std::size_t dim,
                   std::size_t samples) {
  const Norm norm = parse_norm(norm_spec, dim);
  json report = base_report("norm-check", flags, tol);
  report["norm"] = io::norm_to_json(norm);

  Rng rng(flags.seed);
  double worst_hom = 0.0, worst_tri = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    Vec v(norm.dim()), w(norm.dim());
    for (std::size_t d = 0; d < norm.dim(); ++d) {
      v[d] = rng.uniform(-2, 2);
      w[d] = rng.uniform(-2, 2);
    }
    const double lam = rng.uniform(-3, 3);
    const double nv = norm(v);
    worst_hom = std::max(
        worst_hom, std::abs(norm(lam * v) - std::abs(lam) * nv) /
                       std::max(1.0, std::abs(lam) * nv));
    worst_tri = std::max(worst_tri, norm(v + w) - nv - norm(w));
  }
  const bool zero_ok = norm(Vec(norm.dim())) == 0.0;
  report["axioms"] = {{"homogeneity_residual", worst_hom},
                      {"triangle_residual", worst_tri},
                      {"zero_at_origin", zero_ok}};

  ConvexitySearchOptions copts;
  copts.seed = flags.seed;
  copts.tol = tol.get("convexity");
  const ConvexityVerdict verdict = strict_convexity_witness(norm, copts);
  json cj;
  switch (verdict.status) {
    case ConvexityStatus::certified_strictly_convex:
      cj["status"] = "certified_strictly_convex";
      break;
    case ConvexityStatus::witness_not_strictly_convex:
      cj["status"] = "witness_not_strictly_convex";
      break;
    case ConvexityStatus::inconclusive:
      cj["status"] = "inconclusive";
      break;
  }
  if (verdict.witness) {
    cj["witness"] = {json::array({verdict.witness->first[0],
                                  verdict.witness->first[1]}),
                     json::array({verdict.witness->second[0],
                                  verdict.witness->second[1]})};
    cj["defect"] = verdict.defect;
  }
  report["convexity"] = std::move(cj);

  const bool axioms_ok = worst_hom <= tol.get("norm_axioms") &&
                         worst_tri <= tol.get("norm_axioms") && zero_ok;
  const bool pass =
      axioms_ok &&
      verdict.status == ConvexityStatus::certified_strictly_convex;
  report["pass"] = pass;

  if (flags.format == "csv" && norm.dim() == 2) {
    std::vector<double> params;
    const auto pts =
        ball_polyline([&](const Vec& v) { return norm(v); }, 256, params);
    emit(flags, csv_polyline(params, pts));
  } else {
    emit(flags, io::dump_canonical(report));
  }
  return pass ? kExitOk : kExitViolation;
}

int run_busemann(const CommonFlags& flags, const Tolerances& tol,
                 const std::string& norm_spec, std::size_t dim,
                 const std::string& h_text,
                 const std::vector<std::string>& v_texts, std::size_t grid,
                 double level, const std::string& space_path,
                 const std::string& ray_path, const std::string& x_id) {
  json report = base_report("busemann", flags, tol);

  if (!space_path.empty()) {  // sampled metric ray mode
    const MetricSample space =
        io::metric_sample_from_json(io::parse_file(resolve_input(space_path)));
    const SampledRay ray =
        io::ray_from_json(io::parse_file(resolve_input(ray_path)));
    if (x_id.empty()) throw ParseError("--x <point id> is required with --space");
    const GeodesicCheck ray_check =
        validate_ray(space, ray, tol.get("geodesic"));
    if (!ray_check.ok)
      throw Error("ray stations are not isometrically embedded (violation " +
                  std::to_string(ray_check.worst_violation) + ")");
    const RayLimitTrace trace =
        busemann_ray_traced(space, ray, x_id, tol.get("busemann_ray"));
    report["mode"] = "metric_ray";
    report["point"] = x_id;
    report["value"] = trace.value;
    report["estimates"] = trace.estimates;
    emit(flags, flags.format == "csv"
                    ? "t,estimate\n" + [&] {
                        std::ostringstream ss;
                        for (std::size_t i = 0; i < trace.estimates.size(); ++i)
                          ss << ray.stations[i].first << ","
                             << io::format_real(trace.estimates[i]) << "\n";
                        return ss.str();
                      }()
                    : io::dump_canonical(report));
    return kExitOk;
  }

  const Norm norm = parse_norm(norm_spec, dim);
  const Vec h = parse_vec(h_text);
  DerivativeOptions dopts;
  dopts.rel_tol = tol.get("busemann_linear");
  report["mode"] = "linear_ray";
  report["norm"] = io::norm_to_json(norm);
  report["ray"] = h_text;

  json values = json::array();
  for (const auto& vt : v_texts) {
    const Vec v = parse_vec(vt);
    values.push_back(
        {{"v", vt}, {"value", busemann_linear(norm, h, v, dopts)}});
  }
  report["values"] = std::move(values);

  if (flags.format == "csv") {
    // level-set polyline of the Busemann function, one row per direction
    std::vector<double> params;
    std::vector<Vec> pts;
    const auto dirs = direction_grid(2, grid == 0 ? 256 : grid);
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const double b = busemann_linear(norm, h, dirs[k], dopts);
      if (b <= 1e-9 || level / b <= 0.0) continue;
      params.push_back(6.283185307179586 * static_cast<double>(k) /
                       static_cast<double>(dirs.size()));
      pts.push_back((level / b) * dirs[k]);
    }
    emit(flags, csv_polyline(params, pts));
  } else {
    emit(flags, io::dump_canonical(report));
  }
  return kExitOk;
}

int run_smooth_scan(const CommonFlags& flags, const Tolerances& tol,
                    const std::string& norm_spec, std::size_t dim,
                    std::size_t grid, std::size_t probes) {
  const Norm norm = parse_norm(norm_spec, dim);
  json report = base_report("smooth-scan", flags, tol);
  report["norm"] = io::norm_to_json(norm);
  const auto hs = direction_grid(norm.dim(), grid);
  const auto probe_dirs = direction_grid(norm.dim(), probes);
  DerivativeOptions dopts;
  dopts.rel_tol = tol.get("derivative_rel");

  json rows = json::array();
  json kinks = json::array();
  std::ostringstream csv;
  csv << "index,smooth,defect\n";
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const SmoothnessVerdict v =
        smoothness_at(norm, hs[k], probe_dirs, tol.get("smooth"), dopts);
    rows.push_back({{"index", k}, {"smooth", v.smooth},
                    {"defect", v.worst_defect}});
    if (!v.smooth) kinks.push_back(k);
    csv << k << "," << (v.smooth ? 1 : 0) << ","
        << io::format_real(v.worst_defect) << "\n";
  }
  report["directions"] = std::move(rows);
  report["kinks"] = std::move(kinks);
  emit(flags,
       flags.format == "csv" ? csv.str() : io::dump_canonical(report));
  return kExitOk;
}

std::vector<std::pair<std::string, std::string>> parse_pairs(
    const std::string& spec, const MetricSample& space) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (spec == "all") {
    for (std::size_t i = 0; i < space.size(); ++i)
      for (std::size_t j = i + 1; j < space.size(); ++j)
        pairs.emplace_back(space.point(i).id, space.point(j).id);
    return pairs;
  }
  if (!spec.empty() && spec[0] == '@') {
    const json j = io::parse_file(resolve_input(spec.substr(1)));
    for (const auto& p : j) {
      if (!p.is_array() || p.size() != 2)
        throw ParseError("pair entries are [id, id]");
      pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    return pairs;
  }
  throw ParseError("--pairs expects 'all' or @file");
}

int run_separate(const CommonFlags& flags, const Tolerances& tol,
                 const std::string& space_path, const std::string& geo_path,
                 const std::string& pairs_spec) {
  const MetricSample space =
      io::metric_sample_from_json(io::parse_file(resolve_input(space_path)));
  const auto records =
      io::geodesics_from_json(io::parse_file(resolve_input(geo_path)));
  const auto sys =
      AffineConstraintSystem::build(space, records, tol.get("geodesic"));
  const auto pairs = parse_pairs(pairs_spec, space);
  const SeparationReport result =
      separate_all(sys, pairs, tol.get("separation"));

  json report = base_report("separate", flags, tol);
  report["pairs_tested"] = result.pairs_tested();
  json sep = json::array(), nonsep = json::array();
  for (const auto& o : result.separated) {
    json entry{{"x", o.x}, {"y", o.y}, {"optimum", o.optimum}};
    entry["witness"] = witness_to_json(sys.point_ids(), *o.witness);
    sep.push_back(std::move(entry));
  }
  for (const auto& o : result.non_separated)
    nonsep.push_back({{"x", o.x}, {"y", o.y}, {"optimum", o.optimum}});
  report["separated"] = std::move(sep);
  report["non_separated"] = std::move(nonsep);
  const bool pass = result.non_separated.empty();
  report["pass"] = pass;

  if (flags.format == "csv") {
    std::ostringstream csv;
    csv << "x,y,separated,optimum\n";
    for (const auto& o : result.separated)
      csv << o.x << "," << o.y << ",1," << io::format_real(o.optimum) << "\n";
    for (const auto& o : result.non_separated)
      csv << o.x << "," << o.y << ",0," << io::format_real(o.optimum) << "\n";
    emit(flags, csv.str());
  } else {
    emit(flags, io::dump_canonical(report));
  }
  return pass ? kExitOk : kExitViolation;
}

int run_embed(const CommonFlags& flags, const Tolerances& tol,
              const std::string& space_path, const std::string& geo_path,
              const std::string& pairs_spec) {
  const MetricSample space =
      io::metric_sample_from_json(io::parse_file(resolve_input(space_path)));
  const auto records =
      io::geodesics_from_json(io::parse_file(resolve_input(geo_path)));
  const auto sys =
      AffineConstraintSystem::build(space, records, tol.get("geodesic"));
  const auto pairs = parse_pairs(pairs_spec, space);
  const Embedding emb = evaluation_embedding(sys, pairs, tol.get("separation"),
                                             tol.get("pivot"));

  if (flags.format == "json") {
    json report = base_report("embed", flags, tol);
    report["k"] = emb.k;
    json table;
    for (std::size_t i = 0; i < emb.ids.size(); ++i) {
      json coords = json::array();
      for (double c : emb.coords[i]) coords.push_back(c);
      table[emb.ids[i]] = std::move(coords);
    }
    report["embedding"] = std::move(table);
    emit(flags, io::dump_canonical(report));
  } else {
    std::ostringstream csv;
    csv << "id";
    for (std::size_t d = 0; d < emb.k; ++d) csv << ",x" << (d + 1);
    csv << "\n";
    for (std::size_t i = 0; i < emb.ids.size(); ++i) {
      csv << emb.ids[i];
      for (double c : emb.coords[i]) csv << "," << io::format_real(c);
      csv << "\n";
    }
    emit(flags, csv.str());
  }
  return kExitOk;
}

MetricSample load_space_for_reconstruct(const json& j) {
  if (j.contains("points")) return io::metric_sample_from_json(j);
  const std::string gen = j.value("generator", "");
  if (gen == "table") return io::metric_sample_from_json(j.at("space"));
  if (gen == "pnorm" || gen == "polytope") {
    const Box box = io::box_from_json(j.at("domain"));
    const std::size_t n = j.value("lattice", 9);
    if (n < 2) throw ParseError("lattice must have at least two points per side");
    Norm norm = [&]() {
      if (gen == "polytope") {
        std::vector<Vec> vertices;
        for (const auto& v : j.at("vertices"))
          vertices.push_back(Vec(v.get<std::vector<double>>()));
        return Norm::polytope_gauge(std::move(vertices));
      }
      const auto& p = j.at("p");
      return p.is_string() ? Norm::sup_norm(box.dim())
                           : Norm::p_norm(p.get<double>(), box.dim());
    }();
    std::vector<Vec> points;
    if (box.dim() != 2)
      throw ParseError("lattice generation is two-dimensional");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const double fa = static_cast<double>(a) / static_cast<double>(n - 1);
        const double fb = static_cast<double>(b) / static_cast<double>(n - 1);
        points.push_back(Vec{box.lo[0] + fa * (box.hi[0] - box.lo[0]),
                             box.lo[1] + fb * (box.hi[1] - box.lo[1])});
      }
    return metric_from_norm(norm, points);
  }
  throw ParseError("cannot build a metric sample from this input");
}

int run_reconstruct(const CommonFlags& flags, const Tolerances& tol,
                    const std::string& space_path,
                    const std::string& dirs_spec) {
  const MetricSample space =
      load_space_for_reconstruct(io::parse_file(resolve_input(space_path)));

  std::vector<Vec> dirs;
  if (dirs_spec.rfind("grid:", 0) == 0) {
    std::size_t count = 0;
    try {
      count = static_cast<std::size_t>(std::stoul(dirs_spec.substr(5)));
    } catch (const std::exception&) {
      throw ParseError("invalid direction grid spec: " + dirs_spec);
    }
    dirs = pick_spread_directions(difference_directions(space), count);
  } else if (!dirs_spec.empty() && dirs_spec[0] == '@') {
    for (const auto& d : io::parse_file(resolve_input(dirs_spec.substr(1))))
      dirs.push_back(Vec(d.get<std::vector<double>>()));
  } else {
    throw ParseError("--dirs expects grid:N or @file");
  }

  ReconstructOptions opts;
  opts.welldef_tol = tol.get("welldef");
  const ReconstructionReport result = reconstruct_norm(space, dirs, opts);

  json report = base_report("reconstruct", flags, tol);
  report["directions"] = dirs.size();
  report["welldef_residual"] = result.welldef_residual;
  report["triangle_residual"] = result.triangle_residual;
  report["verdict"] = result.consistent() ? "consistent" : "violated";
  json table = json::array();
  for (std::size_t i = 0; i < result.table.dirs.size(); ++i) {
    json row;
    json dv = json::array();
    for (double c : result.table.dirs[i]) dv.push_back(c);
    row["dir"] = std::move(dv);
    row["value"] = result.table.values[i];
    table.push_back(std::move(row));
  }
  report["table"] = std::move(table);
  json witnesses = json::array();
  for (const auto& w : result.witnesses) {
    witnesses.push_back({{"pair_a", {w.a.x, w.a.xbar}},
                         {"pair_b", {w.b.x, w.b.xbar}},
                         {"value_a", w.a.value},
                         {"value_b", w.b.value},
                         {"spread", w.spread}});
  }
  report["witnesses"] = std::move(witnesses);
  report["pass"] = result.consistent();

  if (flags.format == "csv" && result.consistent()) {
    const ReconstructedNorm rec = result.norm();
    std::vector<double> params;
    const auto pts =
        ball_polyline([&](const Vec& v) { return rec(v); }, 256, params);
    emit(flags, csv_polyline(params, pts));
  } else {
    emit(flags, io::dump_canonical(report));
  }
  return result.consistent() ? kExitOk : kExitViolation;
}

int run_finsler_verify(const CommonFlags& flags, const Tolerances& tol,
                       const std::string& oracle_path, std::size_t grid_side,
                       std::size_t num_dirs, std::size_t num_triples) {
  const MetricOracle oracle =
      io::oracle_from_json(io::parse_file(resolve_input(oracle_path)));
  const Box& box = oracle.domain();
  if (box.dim() != 2) throw ParseError("finsler-verify expects a 2D domain");

  json report = base_report("finsler-verify", flags, tol);
  report["oracle"] = oracle.name();
  ProbeOptions popts;
  popts.residual_tol = tol.get("eps_residual");
  bool pass = true;

  std::vector<Vec> grid;
  for (std::size_t a = 1; a <= grid_side; ++a)
    for (std::size_t b = 1; b <= grid_side; ++b) {
      const double fa = static_cast<double>(a) / (grid_side + 1.0);
      const double fb = static_cast<double>(b) / (grid_side + 1.0);
      grid.push_back(Vec{box.lo[0] + fa * (box.hi[0] - box.lo[0]),
                         box.lo[1] + fb * (box.hi[1] - box.lo[1])});
    }
  const auto dirs = direction_grid(2, num_dirs);

  // metric axioms on sampled triples
  {
    Rng rng(flags.seed + 1);
    auto sample_point = [&]() {
      Vec p(2);
      for (std::size_t d = 0; d < 2; ++d)
        p[d] = box.lo[d] + rng.uniform(0.05, 0.95) * (box.hi[d] - box.lo[d]);
      return p;
    };
    double worst_sym = 0.0, worst_tri = 0.0;
    for (int k = 0; k < 200; ++k) {
      const Vec a = sample_point(), b = sample_point(), c = sample_point();
      worst_sym = std::max(worst_sym, std::abs(oracle(a, b) - oracle(b, a)));
      worst_tri =
          std::max(worst_tri, oracle(a, c) - oracle(a, b) - oracle(b, c));
    }
    const bool ok = worst_sym <= tol.get("metric") &&
                    worst_tri <= tol.get("metric");
    report["metric_axioms"] = {{"pass", ok},
                               {"symmetry_residual", worst_sym},
                               {"triangle_residual", worst_tri}};
    pass = pass && ok;
  }

  // epsilon-independence of the speed quotients
  {
    double worst = 0.0;
    bool ok = true;
    for (const auto& x : grid) {
      for (const auto& v : dirs) {
        try {
          worst = std::max(worst, finsler_at(oracle, x, v, popts).eps_residual);
        } catch (const EpsInconsistent&) {
          ok = false;
          worst = std::max(worst, finsler_at_raw(oracle, x, v, popts).eps_residual);
        }
      }
    }
    report["eps_independence"] = {{"pass", ok}, {"max_residual", worst}};
    pass = pass && ok;
  }

  // translation invariance along sampled directions
  {
    double worst = 0.0;
    bool ok = true;
    const std::vector<double> t_grid = {0.0, 0.02, 0.05, 0.08, 0.1};
    for (const auto& v : dirs) {
      const Vec x{box.lo[0] + 0.3 * (box.hi[0] - box.lo[0]),
                  box.lo[1] + 0.3 * (box.hi[1] - box.lo[1])};
      try {
        const TranslationReport r = check_translation_invariance(
            oracle, x, v, t_grid, tol.get("translation"), popts);
        ok = ok && r.pass;
        worst = std::max(worst, r.max_deviation);
      } catch (const EpsInconsistent&) {
        ok = false;
      } catch (const OutOfDomain&) {
        // direction leaves the box at this base; skip
      }
    }
    report["translation_invariance"] = {{"pass", ok},
                                        {"max_deviation", worst}};
    pass = pass && ok;
  }

  // first variation at sampled smooth triples
  {
    Rng rng(flags.seed);
    double worst = 0.0;
    bool ok = true;
    std::size_t accepted = 0, attempts = 0;
    FirstVariationOptions fopts;
    fopts.probe = popts;
    fopts.kink_threshold = tol.get("kink_threshold");
    while (accepted < num_triples && attempts < 20 * num_triples) {
      ++attempts;
      const Vec x = grid[rng.next_u64() % grid.size()];
      const Vec h = 0.2 * rng.unit_vector(2);
      const Vec v = 0.1 * rng.unit_vector(2);
      try {
        const FirstVariationResult r = first_variation(oracle, x, h, v, fopts);
        if (!r.smooth_base) continue;
        ++accepted;
        worst = std::max(worst, std::abs(r.derivative));
        ok = ok && std::abs(r.derivative) <= tol.get("first_variation");
      } catch (const NonConvergent&) {
        continue;
      }
    }
    report["first_variation"] = {{"pass", ok},
                                 {"triples", accepted},
                                 {"max_derivative", worst}};
    pass = pass && ok;
  }

  // constancy of the extracted structure across the grid
  {
    json cj;
    try {
      const ConstancyReport r =
          check_constancy(oracle, grid, dirs, tol.get("constancy"), popts);
      cj = {{"pass", r.pass}, {"max_deviation", r.max_deviation}};
      pass = pass && r.pass;
    } catch (const EpsInconsistent&) {
      cj = {{"pass", false}, {"reason", "eps_inconsistent"}};
      pass = false;
    }
    report["constancy"] = std::move(cj);
  }

  report["pass"] = pass;
  if (flags.format == "csv") {
    std::ostringstream csv;
    csv << "check,pass\n";
    for (const char* name : {"metric_axioms", "eps_independence",
                             "translation_invariance", "first_variation",
                             "constancy"})
      csv << name << "," << (report[name]["pass"].get<bool>() ? 1 : 0) << "\n";
    emit(flags, csv.str());
  } else {
    emit(flags, io::dump_canonical(report));
  }
  return pass ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm geometry toolkit: Busemann calculus, affine separation, "
               "and Finsler reconstruction on sampled geodesic spaces"};
  app.require_subcommand(1);

  CommonFlags flags;
  Tolerances tol;

  // norm-check
  auto* nc = app.add_subcommand("norm-check", "validate a norm and test strict convexity");
  std::string nc_norm;
  std::size_t nc_dim = 2, nc_samples = 200;
  nc->add_option("--norm", nc_norm, "norm spec: pnorm:<p|inf>, l1, l2, linf, hexagon, @file")->required();
  nc->add_option("--dim", nc_dim, "dimension for parametric norms");
  nc->add_option("--samples", nc_samples, "sample count for the axiom audit");
  add_common(nc, flags);

  // busemann
  auto* bu = app.add_subcommand("busemann", "Busemann values of linear or sampled rays");
  std::string bu_norm, bu_h, bu_space, bu_ray, bu_x;
  std::vector<std::string> bu_v;
  std::size_t bu_grid = 0, bu_dim = 2;
  double bu_level = 1.0;
  bu->add_option("--norm", bu_norm, "norm spec (linear-ray mode)");
  bu->add_option("--dim", bu_dim, "dimension for parametric norms");
  bu->add_option("--direction", bu_h, "ray direction, comma-separated");
  bu->add_option("--v", bu_v, "evaluation point (repeatable)");
  bu->add_option("--grid", bu_grid, "directions for CSV level samples");
  bu->add_option("--level", bu_level, "level value for CSV output");
  bu->add_option("--space", bu_space, "metric sample JSON (sampled-ray mode)");
  bu->add_option("--ray", bu_ray, "sampled ray JSON");
  bu->add_option("--x", bu_x, "query point id");
  add_common(bu, flags);

  // smooth-scan
  auto* sc = app.add_subcommand("smooth-scan", "classify directions as smooth or kinked");
  std::string sc_norm;
  std::size_t sc_dim = 2, sc_grid = 360, sc_probes = 16;
  sc->add_option("--norm", sc_norm)->required();
  sc->add_option("--dim", sc_dim);
  sc->add_option("--grid", sc_grid, "number of scanned directions");
  sc->add_option("--probes", sc_probes, "probe directions per scan point");
  add_common(sc, flags);

  // separate
  auto* se = app.add_subcommand("separate", "decide affine separation of point pairs");
  std::string se_space, se_geo, se_pairs = "all";
  se->add_option("--space", se_space)->required();
  se->add_option("--geodesics", se_geo)->required();
  se->add_option("--pairs", se_pairs, "'all' or @file of [id,id] pairs");
  add_common(se, flags);

  // embed
  auto* em = app.add_subcommand("embed", "evaluation-map embedding into R^k");
  std::string em_space, em_geo, em_pairs = "all";
  em->add_option("--space", em_space)->required();
  em->add_option("--geodesics", em_geo)->required();
  em->add_option("--pairs", em_pairs);
  add_common(em, flags);

  // reconstruct
  auto* re = app.add_subcommand("reconstruct", "rebuild the norm behind a sampled metric");
  std::string re_space, re_dirs = "grid:64";
  re->add_option("--space", re_space, "metric sample or generator JSON")->required();
  re->add_option("--dirs", re_dirs, "grid:N or @file of directions");
  add_common(re, flags);

  // finsler-verify
  auto* fv = app.add_subcommand("finsler-verify", "verify constant-speed hypotheses of a metric oracle");
  std::string fv_oracle;
  std::size_t fv_grid = 3, fv_dirs = 16, fv_triples = 20;
  fv->add_option("--oracle", fv_oracle)->required();
  fv->add_option("--grid", fv_grid, "interior grid side length");
  fv->add_option("--dirs", fv_dirs, "probe directions");
  fv->add_option("--triples", fv_triples, "smooth triples for the first variation");
  add_common(fv, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    tol.apply(flags.tol_overrides);
    if (nc->parsed())
      return run_norm_check(flags, tol, nc_norm, nc_dim, nc_samples);
    if (bu->parsed())
      return run_busemann(flags, tol, bu_norm, bu_dim, bu_h, bu_v, bu_grid,
                          bu_level, bu_space, bu_ray, bu_x);
    if (sc->parsed())
      return run_smooth_scan(flags, tol, sc_norm, sc_dim, sc_grid, sc_probes);
    if (se->parsed()) return run_separate(flags, tol, se_space, se_geo, se_pairs);
    if (em->parsed()) return run_embed(flags, tol, em_space, em_geo, em_pairs);
    if (re->parsed()) return run_reconstruct(flags, tol, re_space, re_dirs);
    if (fv->parsed())
      return run_finsler_verify(flags, tol, fv_oracle, fv_grid, fv_dirs,
                                fv_triples);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitParse;
}
