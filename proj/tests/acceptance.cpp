// Acceptance gate. Each numbered criterion prints exactly one PASS/FAIL
// line; the process exits nonzero when any of them fails. Heavy analyses
// are cached by flow, resolution and parameters so the block, dissonance
// and Euler criteria reuse one run. Tolerances are pinned here: set and
// rank comparisons are exact, "within 2 cells" means the component holds a
// cell center within twice the grid diameter of the nominal point, and
// equilibrium residuals must reach 1e-10.
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nonsaddle/config.hpp"
#include "nonsaddle/conley.hpp"
#include "nonsaddle/cubhom.hpp"
#include "nonsaddle/flowfield.hpp"
#include "nonsaddle/grid.hpp"
#include "nonsaddle/influence.hpp"
#include "nonsaddle/outermap.hpp"
#include "nonsaddle/report.hpp"
#include "nonsaddle/robustness.hpp"

using namespace nonsaddle;

namespace {

struct Failures {
  std::vector<std::string> items;
  void expect(bool ok, const std::string& what) {
    if (!ok) items.push_back(what);
  }
};

std::map<std::string, InfluenceAnalysis>& cache() {
  static std::map<std::string, InfluenceAnalysis> c;
  return c;
}

const InfluenceAnalysis& cached(const std::string& id, int res,
                                const std::map<std::string, double>& params = {}) {
  std::ostringstream key;
  key << id << '/' << res;
  for (const auto& [k, v] : params) key << '/' << k << '=' << v;
  auto it = cache().find(key.str());
  if (it == cache().end())
    it = cache().emplace(key.str(), influence_analysis(id, res, params)).first;
  return it->second;
}

// does the component own a cell center within 2 grid diameters of p
bool reaches(const CubicalGrid& g, const CellSet& comp, Vec2 p) {
  const double tol = 2.0 * g.cell_diameter();
  bool ok = false;
  comp.for_each([&](int64_t id) {
    if (g.space.distance(g.center(id), p) <= tol) ok = true;
  });
  return ok;
}

void crit1_homology(Failures& f) {
  GridShape torus{16, 16, true, true};
  CellSet full = CellSet(torus).complement();
  f.expect(betti(torus, full).betti == std::array<int64_t, 3>{1, 2, 1},
           "full torus betti is not (1,2,1)");

  CubicalGrid plane({{-2, -2}, {2, 2}, {false, false}}, 48, 48);
  f.expect(betti(plane.shape, annulus_cells(plane, {0, 0}, 0.7, 1.7)).betti ==
               std::array<int64_t, 3>{1, 1, 0},
           "annulus betti is not (1,1,0)");
  f.expect(betti(plane.shape, disk_cells(plane, {0, 0}, 1.5)).betti ==
               std::array<int64_t, 3>{1, 0, 0},
           "disk betti is not (1,0,0)");

  // chi(X) = chi(X,A) + chi(A): rank route for the absolute terms, counting
  // route for the relative one, exact integers throughout
  std::mt19937_64 rng(20260815);
  std::bernoulli_distribution in_x(0.45), in_a(0.5);
  for (int t = 0; t < 10; ++t) {
    GridShape sh = (t % 2) ? GridShape{12, 12, true, true}
                           : GridShape{14, 10, false, false};
    CellSet x(sh), a(sh);
    for (int64_t id = 0; id < sh.n_cells(); ++id)
      if (in_x(rng)) {
        x.set(id);
        if (in_a(rng)) a.set(id);
      }
    int64_t chi_x = euler(betti(sh, x));
    int64_t chi_a = euler(betti(sh, a));
    int64_t chi_rel = euler_characteristic(sh, x, a);
    std::ostringstream msg;
    msg << "additivity pair " << t << ": " << chi_x << " != " << chi_rel
        << " + " << chi_a;
    f.expect(chi_x == chi_rel + chi_a, msg.str());
  }
}

void crit2_blocks(Failures& f) {
  struct Row {
    const char* id;
    std::map<std::string, double> params;
    Verdict want;
  };
  const Row rows[] = {
      {"planar_cycle", {}, Verdict::Attractor},
      {"planar_cycle", {{"sigma", -1.0}}, Verdict::Repeller},
      {"annulus_nonsaddle", {}, Verdict::NonSaddle},
      {"product_circle", {}, Verdict::NonSaddle},
      {"saddle_node_torus", {}, Verdict::NonSaddle},
      {"torus_homoclinic", {}, Verdict::NonSaddle},
  };
  for (const Row& r : rows) {
    const IndexPair& ip = cached(r.id, 256, r.params).block.ip;
    std::string tag = std::string(r.id) + (r.params.empty() ? "" : "(-1)");
    f.expect((ip.nplus & ip.nminus) == ip.inv, tag + ": nplus&nminus != inv");
    f.expect(!ip.exit.intersects(ip.nplus), tag + ": exit meets nplus");
    f.expect(!ip.entrance.intersects(ip.nminus), tag + ": entrance meets nminus");
    Verdict got = nonsaddle_test(ip);
    f.expect(got == r.want, tag + ": verdict " + to_string(got) +
                                ", wanted " + to_string(r.want));
  }
}

void crit3_conley(Failures& f) {
  const BlockAnalysis& pc = cached("product_circle", 256).block;
  f.expect(nonsaddle_by_conley(pc.ip, pc.block) == ConleyCertificate::Certified,
           "product_circle not certified");
  ConleyIndexReport ci = conley_indices(pc.ip);
  f.expect(ci.ch_plus.betti[1] == 0 && ci.ch_minus.betti[1] == 0,
           "product_circle first index ranks not both 0");

  BlockAnalysis sad = analyze_block("planar_saddle", 128);
  f.expect(nonsaddle_by_conley(sad.ip, sad.block) ==
               ConleyCertificate::Inconclusive,
           "planar_saddle not inconclusive");
  f.expect(conley_indices(sad.ip).ch_plus.betti[1] == 1,
           "planar_saddle rank1 CH+ != 1");
}

void crit4_dissonance(Failures& f) {
  const InfluenceAnalysis& th = cached("torus_homoclinic", 256);
  auto tc = components4(th.dissonance.externally);
  f.expect(tc.size() == 1, "torus_homoclinic: externally dissonant components != 1");
  f.expect(!tc.empty() && reaches(th.block.grid, tc[0], {0.0, 0.5}),
           "torus_homoclinic: component misses (0,0.5)");
  f.expect(!th.dissonance.positively.empty(),
           "torus_homoclinic: positively dissonant empty");
  f.expect(!th.dissonance.negatively.empty(),
           "torus_homoclinic: negatively dissonant empty");
  f.expect(three_types_check(th.dissonance, true),
           "torus_homoclinic: three_types_check false");

  const InfluenceAnalysis& sn = cached("saddle_node_torus", 256);
  auto sc = components4(sn.dissonance.externally);
  f.expect(sc.size() == 2, "saddle_node_torus: externally dissonant components != 2");
  if (sc.size() == 2) {
    auto owner = [&](Vec2 p) {
      if (reaches(sn.block.grid, sc[0], p)) return 0;
      if (reaches(sn.block.grid, sc[1], p)) return 1;
      return -1;
    };
    int top = owner({0.0, 0.5}), bot = owner({0.0, -0.5});
    f.expect(top >= 0 && bot >= 0 && top != bot,
             "saddle_node_torus: components do not split (0,+-0.5)");
  }

  for (double sigma : {1.0, -1.0}) {
    const InfluenceAnalysis& c =
        cached("planar_cycle", 256, {{"sigma", sigma}});
    f.expect(!c.dissonance.any(),
             std::string("planar_cycle(") + (sigma > 0 ? "+1" : "-1") +
                 "): dissonant sets not all empty");
  }
}

void crit5_euler(Failures& f) {
  const char* five[] = {"planar_cycle", "annulus_nonsaddle", "product_circle",
                        "saddle_node_torus", "torus_homoclinic"};
  for (const char* id : five) {
    const DissonanceReport& d = cached(id, 256).dissonance;
    f.expect(d.euler_verdict == d.any(),
             std::string(id) + ": euler verdict disagrees with dissonance");
  }
  for (int res : {128, 256, 512}) {
    const DissonanceReport& d = cached("torus_homoclinic", res).dissonance;
    std::ostringstream msg;
    msg << "torus_homoclinic@" << res << ": chi(K)=" << d.euler_k
        << " chi(I)=" << d.euler_i << ", wanted 0 and -1";
    f.expect(d.euler_k == 0 && d.euler_i == -1, msg.str());
  }
}

void crit6_fixed_points(Failures& f) {
  const InfluenceAnalysis& an = cached("annulus_nonsaddle", 256);
  const CubicalGrid& g = an.block.grid;
  CellSet comp_region = an.partition.k_cells.complement();
  auto comps = components4(comp_region);
  f.expect(comps.size() == 2, "complement of K has != 2 components");

  auto touches_frame = [&](const CellSet& c) {
    bool t = false;
    c.for_each([&](int64_t id) {
      auto [i, j] = g.shape.coords(id);
      if (i == 0 || j == 0 || i == g.shape.n0 - 1 || j == g.shape.n1 - 1)
        t = true;
    });
    return t;
  };

  std::vector<Vec2> eq = fixed_points(an.block.spec, g, comp_region);
  f.expect(eq.size() == 1, "complement holds != 1 equilibrium");
  f.expect(eq.size() >= comps.size() - 1,
           "fewer equilibria than components minus one");
  if (eq.size() == 1) {
    f.expect(an.block.spec.velocity(eq[0]).norm() <= 1e-10,
             "equilibrium residual above 1e-10");
    const CellSet* bounded = nullptr;
    int n_bounded = 0;
    for (const CellSet& c : comps)
      if (!touches_frame(c)) {
        bounded = &c;
        ++n_bounded;
      }
    f.expect(n_bounded == 1, "bounded components != 1");
    auto home = g.cell_of(eq[0]);
    f.expect(bounded && home && bounded->test(*home),
             "equilibrium lies outside the bounded component");
  }
}

void crit7_global(Failures& f) {
  const InfluenceAnalysis& ln = cached("linear_node", 128);
  Verdict lv = nonsaddle_test(ln.block.ip);
  f.expect(lv == Verdict::Attractor, "linear_node verdict not attractor");
  f.expect(ln.partition.outside.empty(), "linear_node outside not empty");
  f.expect(planar_global_influence_check(ln.partition, lv) ==
               GlobalInfluence::GlobalAttractor,
           "linear_node not a global attractor");

  const InfluenceAnalysis& ps = cached("planar_saddle", 128);
  Verdict sv = nonsaddle_test(ps.block.ip);
  f.expect(sv == Verdict::Saddle, "planar_saddle verdict not saddle");
  f.expect(planar_global_influence_check(ps.partition, sv) ==
               GlobalInfluence::HypothesisNotMet,
           "planar_saddle hypothesis unexpectedly met");
}

void crit8_duality(Failures& f) {
  for (const FieldDescriptor& d : catalogue()) {
    const InfluenceAnalysis& fw = cached(d.id, 128);
    InfluenceAnalysis rv = influence_analysis(d.id, 128, {}, true);
    const std::string tag = d.id;

    f.expect(rv.block.ip.nplus == fw.block.ip.nminus &&
                 rv.block.ip.nminus == fw.block.ip.nplus,
             tag + ": Nplus/Nminus do not swap");
    f.expect(rv.block.ip.exit == fw.block.ip.entrance &&
                 rv.block.ip.entrance == fw.block.ip.exit,
             tag + ": exit/entrance do not swap");
    f.expect(rv.partition.a_star == fw.partition.r_star &&
                 rv.partition.r_star == fw.partition.a_star,
             tag + ": A*/R* do not swap");
    f.expect(rv.dissonance.positively == fw.dissonance.negatively &&
                 rv.dissonance.negatively == fw.dissonance.positively,
             tag + ": dissonant polarities do not swap");
    ConleyIndexReport cf = conley_indices(fw.block.ip);
    ConleyIndexReport cr = conley_indices(rv.block.ip);
    f.expect(cr.ch_plus.betti == cf.ch_minus.betti &&
                 cr.ch_minus.betti == cf.ch_plus.betti,
             tag + ": CH ranks do not swap");
  }
}

void crit9_robustness(Failures& f) {
  ContinuationRun up = continue_family("robust_family", "lambda",
                                       {0.0, 0.01, 0.04, 0.09, 0.16}, 256);
  RobustnessVerdict rv = robustness_verdict(up);
  f.expect(rv.dynamically_robust, "sweep not dynamically robust");
  f.expect(rv.topologically_robust, "sweep not topologically robust");
  f.expect(!up.breakdown_bracket.has_value(), "unexpected breakdown on the sweep");
  f.expect(rv.analyzable_count == 5, "not all 5 values analyzable");
  for (const LambdaRecord& r : up.records) {
    std::ostringstream msg;
    msg << "lambda " << r.lambda << ": ";
    f.expect(r.analyzable(), msg.str() + "not analyzable");
    f.expect(r.profile.betti == std::array<int64_t, 3>{1, 1, 0},
             msg.str() + "profile not (1,1,0)");
  }

  ContinuationRun down =
      continue_family("robust_family", "lambda", {-0.05}, 256);
  f.expect(down.breakdown_bracket.has_value(),
           "lambda=-0.05 did not record a breakdown");
  if (down.breakdown_bracket)
    f.expect(*down.breakdown_bracket == std::pair<double, double>{-0.05, -0.05},
             "breakdown bracket not (-0.05,-0.05)");
  f.expect(down.records.size() == 1 && down.records[0].empty,
           "lambda=-0.05 continuation not empty");
}

void crit10_reproducibility(Failures& f) {
  AnalysisConfig cfg;
  cfg.flow_id = "planar_cycle";
  cfg.resolution = 64;
  cfg.stages = {Stage::Classify, Stage::Influence};
  std::string a = render_report(run_analysis(cfg));
  std::string b = render_report(run_analysis(cfg));
  f.expect(!a.empty() && a == b, "analysis report not byte-identical");

  AnalysisConfig rb;
  rb.flow_id = "robust_family";
  rb.resolution = 64;
  rb.sweep_param = "lambda";
  rb.sweep_values = {0.0, 0.04};
  rb.stages = {Stage::Classify, Stage::Robustness};
  std::string c = render_report(run_analysis(rb));
  std::string d = render_report(run_analysis(rb));
  f.expect(!c.empty() && c == d, "robustness report not byte-identical");
}

}  // namespace

int main() {
  struct Entry {
    int num;
    const char* label;
    void (*fn)(Failures&);
  };
  const Entry table[] = {
      {1, "homology oracles and chi additivity", crit1_homology},
      {2, "index-pair invariants and verdicts at 256^2", crit2_blocks},
      {3, "cohomological certificates", crit3_conley},
      {4, "dissonant components and locations", crit4_dissonance},
      {5, "euler test and resolution stability", crit5_euler},
      {6, "fixed points in the complement", crit6_fixed_points},
      {7, "planar global influence dichotomy", crit7_global},
      {8, "reversal duality across the catalogue", crit8_duality},
      {9, "robustness sweep and breakdown", crit9_robustness},
      {10, "byte-identical reports", crit10_reproducibility},
  };

  int failed = 0;
  for (const Entry& e : table) {
    Failures f;
    try {
      e.fn(f);
    } catch (const std::exception& ex) {
      f.items.push_back(std::string("exception: ") + ex.what());
    }
    if (f.items.empty()) {
      std::printf("criterion %2d PASS  %s\n", e.num, e.label);
    } else {
      ++failed;
      std::printf("criterion %2d FAIL  %s\n", e.num, e.label);
      for (const std::string& why : f.items)
        std::printf("              - %s\n", why.c_str());
    }
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", 10 - failed,
              int(sizeof(table) / sizeof(table[0])));
  return failed == 0 ? 0 : 1;
}
