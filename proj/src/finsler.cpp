#include "normgeo/finsler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace normgeo {

bool Box::contains(const Vec& x, double margin) const {
  require_same_dim(x, lo);
  for (std::size_t i = 0; i < x.dim(); ++i)
    if (x[i] <= lo[i] + margin || x[i] >= hi[i] - margin) return false;
  return true;
}

double Box::inradius_at(const Vec& x) const {
  require_same_dim(x, lo);
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.dim(); ++i)
    r = std::min({r, x[i] - lo[i], hi[i] - x[i]});
  return r;
}

MetricOracle::MetricOracle(Box domain, DistFn fn, std::string name)
    : domain_(std::move(domain)), fn_(std::move(fn)), name_(std::move(name)) {}

MetricOracle MetricOracle::from_norm(Box domain, Norm norm) {
  return MetricOracle(
      std::move(domain),
      [n = std::move(norm)](const Vec& a, const Vec& b) { return n(a - b); },
      "norm");
}

MetricOracle MetricOracle::affine_scaled_euclidean(Box domain) {
  return MetricOracle(
      std::move(domain),
      [](const Vec& a, const Vec& b) {
        return (1.0 + (a[0] + b[0]) / 2.0) * euclid(a - b);
      },
      "affine_scaled_euclidean");
}

namespace {

std::vector<double> probe_quotients(const MetricOracle& oracle, const Vec& x,
                                    const Vec& v, const ProbeOptions& opts) {
  const double inr = oracle.domain().inradius_at(x);
  if (!(inr > 0.0)) throw OutOfDomain("probe base point is not interior");
  const double speed = euclid(v);
  std::vector<double> q;
  for (const double f : opts.eps_factors) {
    const double eps = f * inr / speed;
    const Vec target = x + eps * v;
    if (!oracle.domain().contains(target))
      throw OutOfDomain("probe target left the domain");
    q.push_back(oracle(x, target) / eps);
  }
  return q;
}

double relative_spread(const std::vector<double>& q) {
  const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
  const double scale = std::max(1e-300, std::abs(*hi));
  return (*hi - *lo) / scale;
}

}  // namespace

FinslerProbe finsler_at(const MetricOracle& oracle, const Vec& x, const Vec& v,
                        const ProbeOptions& opts) {
  if (is_zero(v)) return {0.0, 0.0};
  const std::vector<double> q = probe_quotients(oracle, x, v, opts);
  FinslerProbe probe;
  probe.eps_residual = relative_spread(q);
  if (probe.eps_residual > opts.residual_tol)
    throw EpsInconsistent(
        "speed quotients vary with epsilon (relative spread " +
        std::to_string(probe.eps_residual) +
        "); linear intervals are not constant speed here");
  double mean = 0.0;
  for (double qi : q) mean += qi;
  probe.value = mean / static_cast<double>(q.size());
  return probe;
}

FinslerProbe finsler_at_raw(const MetricOracle& oracle, const Vec& x,
                            const Vec& v, const ProbeOptions& opts) {
  if (is_zero(v)) return {0.0, 0.0};
  const std::vector<double> q = probe_quotients(oracle, x, v, opts);
  FinslerProbe probe;
  probe.eps_residual = relative_spread(q);
  if (probe.eps_residual <= opts.residual_tol) {
    double mean = 0.0;
    for (double qi : q) mean += qi;
    probe.value = mean / static_cast<double>(q.size());
    return probe;
  }
  // Linear extrapolation to eps -> 0 from the two smallest steps; exact for
  // quotients that drift linearly in eps.
  const std::size_t n = q.size();
  const double inr = oracle.domain().inradius_at(x);
  const double speed = euclid(v);
  const double e1 = opts.eps_factors[n - 2] * inr / speed;
  const double e2 = opts.eps_factors[n - 1] * inr / speed;
  probe.value = q[n - 1] + (q[n - 1] - q[n - 2]) * e2 / (e1 - e2);
  return probe;
}

TranslationReport check_translation_invariance(const MetricOracle& oracle,
                                               const Vec& x, const Vec& v,
                                               const std::vector<double>& t_grid,
                                               double tol,
                                               const ProbeOptions& opts) {
  TranslationReport report;
  if (is_zero(v)) {
    report.pass = true;
    return report;
  }
  const double base = finsler_at(oracle, x, v, opts).value;
  for (const double t : t_grid) {
    const Vec xt = x + t * v;
    if (!oracle.domain().contains(xt))
      throw OutOfDomain("translation grid leaves the domain");
    const double value = finsler_at(oracle, xt, v, opts).value;
    const double dev = std::abs(value - base);
    if (dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_t = t;
    }
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

DirectionTable extract_norm_table(const MetricOracle& oracle, const Vec& x,
                                  std::size_t count,
                                  const std::vector<Vec>& extra, bool raw,
                                  const ProbeOptions& opts) {
  const std::size_t dim = oracle.domain().dim();
  std::vector<Vec> half;
  for (const Vec& d : direction_grid(dim, count)) {
    // keep one representative per +- pair (canonical sign)
    bool canonical = false;
    for (std::size_t i = 0; i < dim; ++i) {
      if (d[i] != 0.0) {
        canonical = d[i] > 0.0;
        break;
      }
    }
    if (canonical) half.push_back(d);
  }
  for (const Vec& e : extra) {
    if (is_zero(e)) continue;
    Vec u = normalized_euclid(e);
    bool canonical = false;
    for (std::size_t i = 0; i < dim; ++i) {
      if (u[i] != 0.0) {
        canonical = u[i] > 0.0;
        break;
      }
    }
    if (!canonical) u = -u;
    bool duplicate = false;
    for (const Vec& d : half) {
      if (rejection_euclid(u, d) < 1e-12 && dot(u, d) > 0.0) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) half.push_back(u);
  }

  DirectionTable table;
  for (const Vec& d : half) {
    const FinslerProbe p =
        raw ? finsler_at_raw(oracle, x, d, opts) : finsler_at(oracle, x, d, opts);
    table.dirs.push_back(d);
    table.values.push_back(p.value);
    table.dirs.push_back(-d);
    table.values.push_back(p.value);  // symmetric metric, same value
  }
  return table;
}

Norm norm_from_table(const DirectionTable& table) {
  std::vector<Vec> vertices;
  for (std::size_t i = 0; i < table.dirs.size(); ++i) {
    if (!(table.values[i] > 0.0))
      throw Error("norm table with a non-positive value");
    vertices.push_back((1.0 / table.values[i]) * table.dirs[i]);
  }
  // tables may list only one orientation of a direction; complete the
  // symmetric pair (the metric is symmetric, same value)
  const std::size_t listed = vertices.size();
  for (std::size_t i = 0; i < listed; ++i) {
    const Vec neg = -vertices[i];
    if (std::find(vertices.begin(), vertices.end(), neg) == vertices.end())
      vertices.push_back(neg);
  }
  return Norm::polytope_gauge(std::move(vertices));
}

FirstVariationResult first_variation(const MetricOracle& oracle, const Vec& x,
                                     const Vec& h, const Vec& v,
                                     const FirstVariationOptions& opts) {
  if (is_zero(h)) throw ZeroBasePoint("first variation of the zero vector");
  FirstVariationResult result;

  if (!opts.skip_smooth_check) {
    const DirectionTable table =
        extract_norm_table(oracle, x, opts.table_dirs, {h}, true, opts.probe);
    const Norm at_x = norm_from_table(table);
    const SmoothnessVerdict verdict = smoothness_at(
        at_x, h, direction_grid(x.dim(), 16), opts.kink_threshold);
    result.smooth_base = verdict.smooth;
    result.smooth_defect = verdict.worst_defect;
  }

  if (is_zero(v)) {
    result.derivative = 0.0;
    return result;
  }

  const double t0 =
      opts.t0_factor * oracle.domain().inradius_at(x) / euclid(v);
  auto f = [&](double t) {
    return finsler_at_raw(oracle, x + t * v, h, opts.probe).value;
  };
  auto central = [&](double t) { return (f(t) - f(-t)) / (2.0 * t); };
  const double d0 = central(t0);
  const double d1 = central(t0 / 2.0);
  const double d2 = central(t0 / 4.0);
  const double r0 = (4.0 * d1 - d0) / 3.0;
  const double r1 = (4.0 * d2 - d1) / 3.0;
  result.derivative = (16.0 * r1 - r0) / 15.0;
  return result;
}

ConstancyReport check_constancy(const MetricOracle& oracle,
                                const std::vector<Vec>& grid,
                                const std::vector<Vec>& directions, double tol,
                                const ProbeOptions& opts) {
  ConstancyReport report;
  for (const Vec& dir : directions) {
    std::vector<double> values;
    for (const Vec& x : grid) values.push_back(finsler_at(oracle, x, dir, opts).value);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        const double dev = std::abs(values[i] - values[j]);
        if (dev > report.max_deviation) {
          report.max_deviation = dev;
          report.worst_x = grid[i];
          report.worst_y = grid[j];
          report.worst_dir = dir;
        }
      }
    }
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

ReconstructedNorm::ReconstructedNorm(DirectionTable table)
    : table_(std::move(table)) {
  try {
    hull_ = norm_from_table(table_);
  } catch (const DegenerateBody&) {
    // partial tables only answer queries along tabulated directions
  }
}

double ReconstructedNorm::operator()(const Vec& v) const {
  if (is_zero(v)) return 0.0;
  const Vec u = normalized_euclid(v);
  const double len = euclid(v);
  // Exact at table directions; unlisted directions interpolate through the
  // gauge of the hull of the table's unit points.
  for (std::size_t i = 0; i < table_.dirs.size(); ++i) {
    if (dot(u, table_.dirs[i]) > 0.0 &&
        rejection_euclid(u, table_.dirs[i]) <= 1e-12)
      return len * table_.values[i];
  }
  if (!hull_)
    throw DegenerateBody(
        "table directions do not span the space; only tabulated directions "
        "can be evaluated");
  return (*hull_)(v);
}

namespace {

struct PairClass {
  Vec dir;  // canonical unit direction
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (i, j), i - j ~ dir
};

// Group ordered point pairs by the direction of their coordinate difference.
std::vector<PairClass> classify_pairs(const MetricSample& space,
                                      double parallel_tol) {
  std::vector<PairClass> classes;
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!space.point(i).coords)
      throw Error("reconstruction requires ambient coordinates");
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec diff = *space.point(i).coords - *space.point(j).coords;
      if (is_zero(diff)) continue;
      Vec u = normalized_euclid(diff);
      bool canonical = false;
      for (std::size_t d = 0; d < u.dim(); ++d) {
        if (u[d] != 0.0) {
          canonical = u[d] > 0.0;
          break;
        }
      }
      const bool flipped = !canonical;
      if (flipped) u = -u;
      PairClass* found = nullptr;
      for (auto& c : classes) {
        if (dot(u, c.dir) > 0.0 && rejection_euclid(u, c.dir) <= parallel_tol) {
          found = &c;
          break;
        }
      }
      if (found == nullptr) {
        classes.push_back({u, {}});
        found = &classes.back();
      }
      if (flipped)
        found->pairs.emplace_back(j, i);
      else
        found->pairs.emplace_back(i, j);
    }
  }
  return classes;
}

}  // namespace

ReconstructionReport reconstruct_norm(const MetricSample& space,
                                      const std::vector<Vec>& sample_dirs,
                                      const ReconstructOptions& opts) {
  const std::vector<PairClass> classes =
      classify_pairs(space, opts.parallel_tol);

  ReconstructionReport report;
  for (const Vec& dir : sample_dirs) {
    if (is_zero(dir)) throw Error("zero sample direction");
    Vec u = normalized_euclid(dir);
    bool canonical = false;
    for (std::size_t d = 0; d < u.dim(); ++d) {
      if (u[d] != 0.0) {
        canonical = u[d] > 0.0;
        break;
      }
    }
    const Vec cu = canonical ? u : -u;

    const PairClass* cls = nullptr;
    for (const auto& c : classes) {
      if (dot(cu, c.dir) > 0.0 && rejection_euclid(cu, c.dir) <= opts.parallel_tol) {
        cls = &c;
        break;
      }
    }
    if (cls == nullptr || cls->pairs.size() < opts.min_representations)
      throw InsufficientRepresentations(
          "direction has fewer than " +
          std::to_string(opts.min_representations) +
          " sampled representations");

    // Each pair (p, q) with coords(p) - coords(q) = dir / scale yields the
    // candidate value scale * d(p, q) for ||dir||.
    std::vector<RepresentationPair> reps;
    const double dir_len = euclid(dir);
    for (const auto& [i, j] : cls->pairs) {
      const Vec diff = *space.point(i).coords - *space.point(j).coords;
      const double scale = dir_len / euclid(diff);
      RepresentationPair rep;
      rep.x = space.point(i).id;
      rep.xbar = space.point(j).id;
      rep.scale = scale;
      rep.value = scale * space.distance(i, j);
      reps.push_back(std::move(rep));
    }

    std::size_t lo = 0, hi = 0;
    for (std::size_t r = 1; r < reps.size(); ++r) {
      if (reps[r].value < reps[lo].value) lo = r;
      if (reps[r].value > reps[hi].value) hi = r;
    }
    const double spread = (reps[hi].value - reps[lo].value) /
                          std::max(1e-300, reps[hi].value);
    report.welldef_residual = std::max(report.welldef_residual, spread);
    if (spread > opts.welldef_tol &&
        report.witnesses.size() < opts.max_witnesses)
      report.witnesses.push_back({dir, reps[lo], reps[hi], spread});

    double mean = 0.0;
    for (const auto& rep : reps) mean += rep.value;
    mean /= static_cast<double>(reps.size());
    report.table.dirs.push_back(u);
    report.table.values.push_back(mean / dir_len);
  }

  report.verdict = report.witnesses.empty() && report.welldef_residual <= opts.welldef_tol
                       ? ReconstructionReport::Verdict::consistent
                       : ReconstructionReport::Verdict::violated;

  if (report.consistent()) {
    // Subadditivity audit over sampled table triples; the hull interpolation
    // is subadditive by construction, so this guards the raw values.
    const ReconstructedNorm norm(report.table);
    const std::size_t n = report.table.dirs.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 16);
    for (std::size_t i = 0; i < n; i += stride) {
      for (std::size_t j = i + 1; j < n; j += stride) {
        const Vec sum = report.table.dirs[i] + report.table.dirs[j];
        if (is_zero(sum)) continue;
        const double gap =
            norm(sum) - (report.table.values[i] + report.table.values[j]);
        report.triangle_residual = std::max(report.triangle_residual, gap);
      }
    }
  }
  return report;
}

void require_consistent(const ReconstructionReport& report) {
  if (report.consistent()) return;
  if (report.witnesses.empty())
    throw Error("reconstruction violated without witnesses");
  const WellDefWitness& w = report.witnesses.front();
  throw WellDefinednessViolation(
      "representations (" + w.a.x + ", " + w.a.xbar + ") and (" + w.b.x +
          ", " + w.b.xbar + ") disagree with relative spread " +
          std::to_string(w.spread),
      w);
}

std::vector<Vec> difference_directions(const MetricSample& space,
                                       std::size_t min_representations,
                                       double parallel_tol) {
  std::vector<Vec> dirs;
  for (const auto& c : classify_pairs(space, parallel_tol)) {
    if (c.pairs.size() < min_representations) continue;
    dirs.push_back(c.dir);
    dirs.push_back(-c.dir);
  }
  if (!dirs.empty() && dirs[0].dim() == 2) {
    std::sort(dirs.begin(), dirs.end(), [](const Vec& a, const Vec& b) {
      return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
    });
  }
  return dirs;
}

std::vector<Vec> pick_spread_directions(const std::vector<Vec>& dirs,
                                        std::size_t count) {
  if (dirs.size() <= count || dirs.empty() || dirs[0].dim() != 2) {
    std::vector<Vec> all = dirs;
    if (all.size() > count) all.resize(count);
    return all;
  }
  std::vector<double> angles;
  for (const Vec& d : dirs) angles.push_back(std::atan2(d[1], d[0]));
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::vector<char> taken(dirs.size(), 0);
  std::vector<Vec> picked;
  for (std::size_t k = 0; k < count; ++k) {
    const double target = -3.14159265358979323846 +
                          kTwoPi * static_cast<double>(k) /
                              static_cast<double>(count);
    std::size_t best = dirs.size();
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      if (taken[i]) continue;
      double gap = std::abs(angles[i] - target);
      gap = std::min(gap, kTwoPi - gap);
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best == dirs.size()) break;
    taken[best] = 1;
    picked.push_back(dirs[best]);
  }
  return picked;
}

}  // namespace normgeo
