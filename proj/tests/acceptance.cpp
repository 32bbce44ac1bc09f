// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Each criterion can be run standalone: `acceptance <n>`.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "normgeo/affine.hpp"
#include "normgeo/busemann.hpp"
#include "normgeo/finsler.hpp"
#include "normgeo/geodesy.hpp"
#include "normgeo/norms.hpp"
#include "normgeo/rng.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace normgeo;
using normgeo::testing::corpus_norms;
using normgeo::testing::hexagon_norm;

namespace {

bool g_all_pass = true;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  if (!pass) g_all_pass = false;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --- criterion 1: Busemann axioms over >= 500 sampled tuples ---------------

void criterion_1() {
  DerivativeOptions dopts;
  dopts.rel_tol = 1e-8;
  std::size_t tuples = 0;
  double worst_axiom = 0.0;  // properties (2)-(4), tolerance 1e-6
  double worst_oracle = 0.0; // limit form agreement, tolerance 1e-5
  Rng rng(101);
  for (const auto& [name, norm] : corpus_norms()) {
    for (int k = 0; k < 120; ++k) {
      const Vec h = rng.unit_vector(2);
      const Vec v{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      const Vec v1{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      const Vec v2{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      const double t = rng.uniform(0, 3);
      ++tuples;

      const double bv = busemann_linear(norm, h, v, dopts);
      worst_axiom = std::max(
          worst_axiom,
          std::abs(busemann_linear(norm, h, t * v, dopts) - t * bv));
      worst_axiom = std::max(
          worst_axiom, busemann_linear(norm, h, v1 + v2, dopts) -
                           busemann_linear(norm, h, v1, dopts) -
                           busemann_linear(norm, h, v2, dopts));
      worst_axiom = std::max(
          worst_axiom,
          std::abs(bv - busemann_linear(norm, -h, -v, dopts)));
      worst_oracle = std::max(
          worst_oracle,
          std::abs(bv - normgeo::testing::busemann_large_t(norm, h, v)));
    }
  }
  const bool pass = tuples >= 500 && worst_axiom <= 1e-6 && worst_oracle <= 1e-5;
  report(1, "Busemann axiom suite", pass,
         std::to_string(tuples) + " tuples, axiom residual " +
             fmt(worst_axiom) + ", oracle gap " + fmt(worst_oracle));
}

// --- criterion 2: smoothness classification matches the analytic kink sets -

void criterion_2() {
  const auto grid = direction_grid(2, 360);  // one direction per degree
  const auto probes = direction_grid(2, 16);
  DerivativeOptions dopts;
  dopts.rel_tol = 1e-9;

  auto scan = [&](const Norm& norm, const std::vector<int>& kinks,
                  std::string* why) {
    for (int deg = 0; deg < 360; ++deg) {
      const bool expect_kink =
          std::find(kinks.begin(), kinks.end(), deg) != kinks.end();
      const SmoothnessVerdict v =
          smoothness_at(norm, grid[deg], probes, 1e-7, dopts);
      double busemann_defect = 0.0;
      for (const auto& p : probes)
        busemann_defect = std::max(
            busemann_defect, std::abs(busemann_linear(norm, grid[deg], p) +
                                      busemann_linear(norm, grid[deg], -p)));
      if (v.smooth == expect_kink) {
        *why = "classification off at " + std::to_string(deg) + " deg";
        return false;
      }
      if ((busemann_defect > 0.1) != expect_kink) {
        *why = "linearity defect off at " + std::to_string(deg) + " deg";
        return false;
      }
    }
    return true;
  };

  std::string why = "kink sets and defects match at every degree";
  const bool l1_ok = scan(Norm::p_norm(1, 2), {0, 90, 180, 270}, &why);
  const bool linf_ok = l1_ok && scan(Norm::sup_norm(2), {45, 135, 225, 315}, &why);
  report(2, "smoothness equals linearity on the degree grid", l1_ok && linf_ok,
         why);
}

// --- criterion 3: round-trip reconstruction -------------------------------

void criterion_3() {
  const std::vector<normgeo::testing::NamedNorm> corpus = {
      {"p=1.5", Norm::p_norm(1.5, 2)},
      {"p=2", Norm::p_norm(2, 2)},
      {"p=3", Norm::p_norm(3, 2)},
      {"hexagon", hexagon_norm()}};
  bool pass = true;
  double worst_rel = 0.0, worst_welldef = 0.0, diag_err = 1.0;
  std::string why;
  for (const auto& [name, norm] : corpus) {
    const MetricSample sample = normgeo::testing::make_lattice_sample(norm, 9);
    const auto dirs = pick_spread_directions(difference_directions(sample), 64);
    if (dirs.size() != 64) {
      pass = false;
      why = "direction grid incomplete for " + name;
      break;
    }
    const ReconstructionReport rep = reconstruct_norm(sample, dirs);
    worst_welldef = std::max(worst_welldef, rep.welldef_residual);
    if (!rep.consistent()) {
      pass = false;
      why = "verdict violated for " + name;
      break;
    }
    for (std::size_t i = 0; i < rep.table.dirs.size(); ++i) {
      const double want = norm(rep.table.dirs[i]);
      worst_rel = std::max(worst_rel,
                           std::abs(rep.table.values[i] - want) / want);
    }
    if (name == "p=3") {
      const double got = rep.norm()(Vec{1, 1});
      diag_err = std::abs(got - std::cbrt(2.0));
    }
  }
  pass = pass && worst_rel <= 1e-6 && worst_welldef <= 1e-8 && diag_err <= 1e-6;
  if (why.empty())
    why = "rel err " + fmt(worst_rel) + ", welldef " + fmt(worst_welldef) +
          ", diagonal err " + fmt(diag_err);
  report(3, "round-trip reconstruction", pass, why);
}

// --- criterion 4: the doctored metric is rejected with witnesses ----------

void criterion_4() {
  const MetricSample sample = normgeo::testing::make_doctored_sample(7);
  const auto dirs = pick_spread_directions(difference_directions(sample), 32);
  const ReconstructionReport rep = reconstruct_norm(sample, dirs);
  const bool violated = !rep.consistent() && !rep.witnesses.empty();
  bool witness_ok = false;
  if (violated) {
    const WellDefWitness& w = rep.witnesses.front();
    witness_ok = w.a.x != w.b.x || w.a.xbar != w.b.xbar;
  }

  const MetricOracle oracle =
      MetricOracle::affine_scaled_euclidean(Box{Vec{0, 0}, Vec{1, 1}});
  const Vec h{0.2, 0.0};
  const FirstVariationResult fv =
      first_variation(oracle, Vec{0.3, 0.5}, h, Vec{1, 0});
  const bool derivative_ok = std::abs(fv.derivative) >= 0.1 * euclid(h);

  report(4, "negative reconstruction", violated && witness_ok && derivative_ok,
         "welldef residual " + fmt(rep.welldef_residual) + ", |f'(0)| " +
             fmt(std::abs(fv.derivative)) + " vs bound " +
             fmt(0.1 * euclid(h)));
}

// --- criterion 5: first-variation chain on Minkowski oracles --------------

void criterion_5() {
  const Box box{Vec{0, 0}, Vec{1, 1}};
  std::vector<normgeo::testing::NamedNorm> corpus = corpus_norms();
  corpus.push_back({"l1.5", Norm::p_norm(1.5, 2)});

  bool pass = true;
  std::string why;
  double worst_fv = 0.0, worst_tr = 0.0, worst_con = 0.0;
  std::size_t total_triples = 0;
  for (const auto& [name, norm] : corpus) {
    const MetricOracle oracle = MetricOracle::from_norm(box, norm);

    std::vector<Vec> grid;
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b)
        grid.push_back(Vec{a / 4.0, b / 4.0});
    const auto dirs = direction_grid(2, 16);

    // translation invariance
    const std::vector<double> t_grid = {0.0, 0.05, 0.1, 0.15, 0.2};
    for (const auto& v : dirs) {
      const TranslationReport tr = check_translation_invariance(
          oracle, Vec{0.3, 0.3}, 0.5 * v, t_grid, 1e-6);
      worst_tr = std::max(worst_tr, tr.max_deviation);
      if (!tr.pass) {
        pass = false;
        why = "translation invariance failed for " + name;
      }
    }

    // constancy
    const ConstancyReport con = check_constancy(oracle, grid, dirs, 1e-6);
    worst_con = std::max(worst_con, con.max_deviation);
    if (!con.pass) {
      pass = false;
      why = "constancy failed for " + name;
    }

    // first variation at sampled smooth triples
    Rng rng(105);
    std::size_t accepted = 0, attempts = 0;
    while (accepted < 100 && attempts < 3000) {
      ++attempts;
      const Vec x = grid[rng.next_u64() % grid.size()];
      const Vec h = 0.15 * rng.unit_vector(2);
      const Vec v = 0.1 * rng.unit_vector(2);
      try {
        const FirstVariationResult fv = first_variation(oracle, x, h, v);
        if (!fv.smooth_base) continue;
        ++accepted;
        worst_fv = std::max(worst_fv, std::abs(fv.derivative));
      } catch (const NonConvergent&) {
        continue;
      }
    }
    total_triples += accepted;
    if (accepted < 100) {
      pass = false;
      why = "only " + std::to_string(accepted) + " smooth triples for " + name;
    }
  }
  pass = pass && worst_fv <= 1e-4 && worst_tr <= 1e-6 && worst_con <= 1e-6;
  if (why.empty())
    why = std::to_string(total_triples) + " triples, max |f'(0)| " +
          fmt(worst_fv) + ", translation " + fmt(worst_tr) + ", constancy " +
          fmt(worst_con);
  report(5, "first-variation chain", pass, why);
}

// --- criterion 6: separation and embedding on the Euclidean grid ----------

void criterion_6() {
  const auto inst = normgeo::testing::make_l2_grid_instance(5);
  const auto sys = AffineConstraintSystem::build(inst.space, inst.records);
  const SeparationReport sep = separate_all(sys, inst.pairs);

  bool pass = sep.separated.size() == 300 && sep.non_separated.empty();
  std::string why = pass ? "" : "separation incomplete";

  double affinity_defect = 0.0;
  double distance_gap = 0.0;
  std::size_t k = 0;
  if (pass) {
    const Embedding emb = evaluation_embedding(sys, inst.pairs);
    k = emb.k;
    if (k != 2) {
      pass = false;
      why = "embedding rank " + std::to_string(k);
    }
    for (const auto& record : inst.records) {
      const Vec& ex = emb.at(record.stations.front().point);
      const Vec& ey = emb.at(record.stations.back().point);
      const double total = record.stations.back().t;
      for (const auto& s : record.stations) {
        const double lam = s.t / total;
        affinity_defect =
            std::max(affinity_defect,
                     euclid(emb.at(s.point) - ((1.0 - lam) * ex + lam * ey)));
      }
    }
    if (affinity_defect > 1e-6) {
      pass = false;
      why = "affinity defect " + fmt(affinity_defect);
    }

    if (pass) {
      // reconstruct the norm on the embedded coordinates from the original
      // distances, then compare embedded distances against it
      std::vector<PointRecord> recs;
      std::vector<std::tuple<std::string, std::string, double>> dists;
      for (std::size_t i = 0; i < emb.ids.size(); ++i)
        recs.push_back({emb.ids[i], emb.coords[i]});
      for (std::size_t i = 0; i < emb.ids.size(); ++i)
        for (std::size_t j = i + 1; j < emb.ids.size(); ++j)
          dists.emplace_back(emb.ids[i], emb.ids[j],
                             inst.space.distance(emb.ids[i], emb.ids[j]));
      const MetricSample embedded(std::move(recs), std::move(dists));
      const auto dirs = difference_directions(embedded);
      const ReconstructionReport rep = reconstruct_norm(embedded, dirs);
      if (!rep.consistent()) {
        pass = false;
        why = "embedded reconstruction violated";
      } else {
        const ReconstructedNorm recn = rep.norm();
        for (std::size_t i = 0; i < embedded.size(); ++i)
          for (std::size_t j = i + 1; j < embedded.size(); ++j)
            distance_gap = std::max(
                distance_gap,
                std::abs(recn(*embedded.point(i).coords -
                              *embedded.point(j).coords) -
                         embedded.distance(i, j)));
        if (distance_gap > 1e-6) {
          pass = false;
          why = "distance gap " + fmt(distance_gap);
        }
      }
    }
  }
  if (why.empty())
    why = "300/300 separated, k=2, affinity defect " + fmt(affinity_defect) +
          ", distance gap " + fmt(distance_gap);
  report(6, "separation and embedding, positive", pass, why);
}

// --- criterion 7: the over-constrained sup-norm instance separates nothing -

void criterion_7() {
  const auto inst = normgeo::testing::make_linf_parabola_instance();
  const auto sys = AffineConstraintSystem::build(inst.space, inst.records);
  const SeparationSolver solver(sys);
  double worst = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < inst.core_ids.size(); ++i) {
    for (std::size_t j = i + 1; j < inst.core_ids.size(); ++j) {
      const SeparationResult r = solver.separate(
          sys.index_of(inst.core_ids[i]), sys.index_of(inst.core_ids[j]));
      worst = std::max(worst, r.optimum);
      ++pairs;
    }
  }
  const bool pass = worst <= 1e-9;
  report(7, "separation, negative", pass,
         std::to_string(pairs) + " pairs, max LP optimum " + fmt(worst));
}

// --- criterion 8: geodesic and bicombing validators -----------------------

void criterion_8() {
  bool pass = true;
  std::string why;

  // parabolic stations: sup-norm geodesic, Euclidean violation >= 1e-2
  std::vector<PointRecord> recs;
  GeodesicRecord parabola;
  for (int k = 0; k <= 5; ++k) {
    const double t = 0.1 * k;
    recs.push_back({"q" + std::to_string(k), Vec{t, t * t}});
    parabola.stations.push_back({t, "q" + std::to_string(k)});
  }
  auto table_for = [&recs](const Norm& norm) {
    std::vector<std::tuple<std::string, std::string, double>> table;
    for (std::size_t a = 0; a < recs.size(); ++a)
      for (std::size_t b = a + 1; b < recs.size(); ++b)
        table.emplace_back(recs[a].id, recs[b].id,
                           norm(*recs[a].coords - *recs[b].coords));
    return table;
  };
  const MetricSample under_linf(recs, table_for(Norm::sup_norm(2)));
  const MetricSample under_l2(recs, table_for(Norm::p_norm(2, 2)));
  const GeodesicCheck linf_check = validate_geodesic(under_linf, parabola);
  const GeodesicCheck l2_check = validate_geodesic(under_l2, parabola);
  if (!linf_check.ok) {
    pass = false;
    why = "sup-norm validation failed";
  }
  if (l2_check.ok || l2_check.worst_violation < 1e-2) {
    pass = false;
    why = "Euclidean violation " + fmt(l2_check.worst_violation);
  }

  // doctored bicombing: one orientation violation, one sub-geodesic violation
  const Norm linf = Norm::sup_norm(2);
  const std::vector<Vec> pts = {Vec{0, 0},    Vec{1, 0},     Vec{0.5, 0},
                                Vec{0.5, 0.3}, Vec{0.75, 0}, Vec{0.75, 0.2}};
  const MetricSample space = metric_from_norm(linf, pts);
  BicombingTable table;
  table.insert("p0", "p1",
               {{{0.0, "p0"}, {0.5, "p2"}, {0.75, "p4"}, {1.0, "p1"}}});
  table.insert("p1", "p0", {{{0.0, "p1"}, {0.5, "p3"}, {1.0, "p0"}}});
  table.insert("p2", "p1", {{{0.0, "p2"}, {0.25, "p5"}, {0.5, "p1"}}});
  const BicombingReport rep = validate_bicombing(space, table);
  bool saw_orientation = false, saw_subgeodesic = false;
  for (const auto& v : rep.violations) {
    saw_orientation |= v.kind == BicombingViolation::Kind::orientation;
    saw_subgeodesic |= v.kind == BicombingViolation::Kind::sub_geodesic;
  }
  if (!saw_orientation || !saw_subgeodesic) {
    pass = false;
    why = "bicombing violations not fully detected";
  }
  if (why.empty())
    why = "sup-norm ok, Euclidean violation " + fmt(l2_check.worst_violation) +
          ", both bicombing violations detected";
  report(8, "validator suite", pass, why);
}

}  // namespace

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  using CriterionFn = void (*)();
  const CriterionFn criteria[] = {criterion_1, criterion_2, criterion_3,
                                  criterion_4, criterion_5, criterion_6,
                                  criterion_7, criterion_8};
  for (int i = 0; i < 8; ++i) {
    if (only != 0 && only != i + 1) continue;
    criteria[i]();
  }
  return g_all_pass ? 0 : 1;
}
