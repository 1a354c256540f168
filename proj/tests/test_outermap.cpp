// Combinatorial map checks. The pruning routines are verified against a
// naive fixpoint oracle that re-filters the whole cell set every sweep and
// shares no code with the library's worklist; index pairs are then checked
// for their structural guarantees on several catalogue flows.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nonsaddle/flowfield.hpp"
#include "nonsaddle/grid.hpp"
#include "nonsaddle/outermap.hpp"

using namespace nonsaddle;

namespace {

bool image_hits(const OuterMap& m, int64_t c, const CellSet& s) {
  auto [b, e] = m.image(c);
  for (auto it = b; it != e; ++it)
    if (*it != m.sink() && s.test(*it)) return true;
  return false;
}

// quadratic-time largest viable subset: keep cells whose image (under each
// listed map) still meets the survivor set, repeat until stable
CellSet naive_core(const std::vector<const OuterMap*>& maps, CellSet s) {
  for (;;) {
    CellSet next = s;
    s.for_each([&](int64_t c) {
      for (const OuterMap* m : maps)
        if (!image_hits(*m, c, s)) {
          next.reset(c);
          return;
        }
    });
    if (next == s) return s;
    s = std::move(next);
  }
}

struct Setup {
  FlowSpec spec;
  CubicalGrid grid;
  CellSet block;
  MapPair maps;
};

Setup make_setup(const std::string& id, int n, double tau = 0) {
  Setup s;
  s.spec = make_flow(id);
  const auto& d = descriptor(id);
  s.grid = CubicalGrid(d.space, n, n);
  s.block = recipe_cells(s.grid, d.block);
  if (tau == 0) tau = d.default_tau;
  if (tau == 0) tau = tau_policy(s.grid, s.spec, &s.block);
  s.maps = build_map_pair(s.grid, s.spec, tau);
  return s;
}

}  // namespace

TEST_CASE("maps are CSR-sane and transpose-closed") {
  Setup s = make_setup("planar_cycle", 32);
  const OuterMap& f = s.maps.fwd;
  const OuterMap& b = s.maps.bwd;

  REQUIRE(f.offsets.size() == size_t(f.n_cells()) + 1);
  for (int64_t c = 0; c < f.n_cells(); ++c) {
    auto [lo, hi] = f.image(c);
    CHECK(hi - lo >= 1);  // no empty images, the sink absorbs leavers
    CHECK(std::is_sorted(lo, hi));
    CHECK(std::adjacent_find(lo, hi) == hi);
    for (auto it = lo; it != hi; ++it) {
      CHECK(*it >= 0);
      CHECK(*it <= f.sink());
    }
  }

  // adjointness both ways, sink edges excluded by construction
  for (int64_t c = 0; c < f.n_cells(); ++c) {
    auto [lo, hi] = f.image(c);
    for (auto it = lo; it != hi; ++it)
      if (*it != f.sink()) CHECK(b.maps_to(*it, int32_t(c)));
  }
  for (int64_t c = 0; c < b.n_cells(); ++c) {
    auto [lo, hi] = b.image(c);
    for (auto it = lo; it != hi; ++it)
      if (*it != b.sink()) CHECK(f.maps_to(*it, int32_t(c)));
  }

  // transpose is an involution and merge is idempotent and symmetric
  OuterMap tt = transpose(transpose(f));
  CHECK(tt.offsets == f.offsets);
  CHECK(tt.targets == f.targets);
  OuterMap mm = merge(f, f);
  CHECK(mm.offsets == f.offsets);
  CHECK(mm.targets == f.targets);
  OuterMap ab = merge(f, b), ba = merge(b, f);
  CHECK(ab.offsets == ba.offsets);
  CHECK(ab.targets == ba.targets);
}

TEST_CASE("sampling lattice and inflation only ever add targets") {
  FlowSpec spec = make_flow("annulus_nonsaddle");
  CubicalGrid g(spec.space, 24, 24);

  // the 2-per-axis corner lattice is a sublattice of the 3-per-axis one
  OuterMap coarse = build_outer_map(g, spec, 0.5, 2, 1);
  OuterMap fine = build_outer_map(g, spec, 0.5, 3, 1);
  for (int64_t c = 0; c < coarse.n_cells(); ++c) {
    auto [lo, hi] = coarse.image(c);
    for (auto it = lo; it != hi; ++it) CHECK(fine.maps_to(c, *it));
  }

  OuterMap flat = build_outer_map(g, spec, 0.5, 3, 0);
  OuterMap fat = build_outer_map(g, spec, 0.5, 3, 1);
  for (int64_t c = 0; c < flat.n_cells(); ++c) {
    auto [lo, hi] = flat.image(c);
    for (auto it = lo; it != hi; ++it) CHECK(fat.maps_to(c, *it));
    CHECK(hi - lo <= fat.offsets[c + 1] - fat.offsets[c]);
  }
}

TEST_CASE("window leavers are routed to the sink") {
  FlowSpec spec = make_flow("planar_saddle");
  CubicalGrid g(spec.space, 32, 32);
  OuterMap f = build_outer_map(g, spec, 0.5);

  // far right edge, xdot = x pushes straight out of the window
  int64_t edge = *g.cell_of({1.45, 0.05});
  CHECK(f.maps_to(edge, f.sink()));

  // cells on the stable axis keep every image on the grid
  int64_t mid = *g.cell_of({0.0, 0.05});
  CHECK_FALSE(f.maps_to(mid, f.sink()));
}

TEST_CASE("worklist pruning agrees with the naive fixpoint") {
  for (const char* id : {"planar_cycle", "annulus_nonsaddle"}) {
    CAPTURE(id);
    Setup s = make_setup(id, 32);
    const OuterMap& f = s.maps.fwd;
    const OuterMap& b = s.maps.bwd;

    CellSet inv = invariant_part(f, b, s.block);
    CHECK(inv == naive_core({&f, &b}, s.block));
    CHECK_FALSE(inv.empty());
    CHECK(inv.subset_of(s.block));

    CellSet np = one_sided_core(f, b, s.block);
    CellSet nm = one_sided_core(b, f, s.block);
    CHECK(np == naive_core({&f}, s.block));
    CHECK(nm == naive_core({&b}, s.block));
    CHECK((np & nm) == inv);
    CHECK(inv.subset_of(np));
  }
}

TEST_CASE("index pairs carry their structural guarantees") {
  // the annulus block needs the finer grid before its slow inner rim
  // separates from the invariant rings
  for (auto [id, n] : {std::pair<std::string, int>{"planar_cycle", 64},
                       {"annulus_nonsaddle", 128},
                       {"planar_saddle", 64}}) {
    CAPTURE(id);
    BlockAnalysis ba = analyze_block(id, n);
    const IndexPair& ip = ba.ip;

    CHECK(ip.N == ba.block);
    CHECK((ip.nplus & ip.nminus) == ip.inv);
    CHECK(ip.inv == invariant_part(ba.maps.fwd, ba.maps.bwd, ba.block));
    CHECK(ip.inv.subset_of(interior(ip.N)));
    CHECK(boundary(ip.N).subset_of(ip.exit | ip.entrance));
    CHECK_FALSE(ip.exit.intersects(ip.nplus));
    CHECK_FALSE(ip.entrance.intersects(ip.nminus));
    CHECK(ip.exit.subset_of(boundary(ip.N)));
    CHECK(ip.entrance.subset_of(boundary(ip.N)));
    CHECK(ip.nplus.subset_of(ip.N));
    CHECK(is_isolating(ba.maps.fwd, ba.maps.bwd, ba.block));
    CHECK(ip.tau == ba.tau);
  }
}

TEST_CASE("a crawling map is flagged as not isolating") {
  // tau at the clamp floor moves points well under a cell width, so the
  // dilation makes every cell chain to itself and the "invariant part"
  // floods the whole block out to its boundary
  FlowSpec spec = make_flow("planar_cycle");
  CubicalGrid g(spec.space, 32, 32);
  CellSet block = annulus_cells(g, {0, 0}, 0.5, 1.5);
  MapPair mp = build_map_pair(g, spec, 0.01);

  CHECK_FALSE(is_isolating(mp.fwd, mp.bwd, block));
  try {
    index_pair(mp.fwd, mp.bwd, block);
    FAIL("expected NotIsolatingError");
  } catch (const NotIsolatingError& e) {
    CHECK_FALSE(e.offending.empty());
    CHECK(e.offending.subset_of(boundary(block)));
    CHECK(std::string(e.what()).find("isolat") != std::string::npos);
  }
}

TEST_CASE("verdicts sort the catalogue blocks") {
  CHECK(nonsaddle_test(analyze_block("planar_cycle", 64).ip) ==
        Verdict::Attractor);
  CHECK(nonsaddle_test(analyze_block("planar_cycle", 64, {{"sigma", -1.0}}).ip) ==
        Verdict::Repeller);
  CHECK(nonsaddle_test(analyze_block("annulus_nonsaddle", 128).ip) ==
        Verdict::NonSaddle);
  CHECK(nonsaddle_test(analyze_block("planar_saddle", 64).ip) ==
        Verdict::Saddle);

  CHECK(std::string(to_string(Verdict::Attractor)) == "attractor");
  CHECK(std::string(to_string(Verdict::Repeller)) == "repeller");
  CHECK(std::string(to_string(Verdict::NonSaddle)) == "non-saddle");
  CHECK(std::string(to_string(Verdict::Saddle)) == "saddle");
}

TEST_CASE("tau selection: clamps, medians and catalogue overrides") {
  // slow sink on a coarse grid: the formula overshoots, clamp to 1
  FlowSpec sink = make_flow("linear_node");
  CubicalGrid coarse(sink.space, 16, 16);
  CellSet blk = disk_cells(coarse, {0, 0}, 0.5);
  CHECK(tau_policy(coarse, sink, &blk) == 1.0);

  // crank the rate three orders up and the clamp floor takes over
  FlowSpec fast = make_flow("linear_node", {{"sigma", -400.0}});
  CubicalGrid fine(fast.space, 256, 256);
  CHECK(tau_policy(fine, fast, nullptr) == 0.01);

  for (const char* id : {"planar_cycle", "planar_saddle", "mendelson"}) {
    FlowSpec spec = make_flow(id);
    CubicalGrid g(spec.space, 48, 48);
    double t = tau_policy(g, spec, nullptr);
    CHECK(t >= 0.01);
    CHECK(t <= 1.0);
  }

  // analyze_block prefers a positive catalogue tau over the policy
  CHECK(analyze_block("annulus_nonsaddle", 128).tau == 0.5);
  BlockAnalysis pc = analyze_block("planar_cycle", 64);
  CHECK(pc.tau == tau_policy(pc.grid, pc.spec, &pc.block));
}

TEST_CASE("recipe cells match the shape constructors") {
  CubicalGrid plane(descriptor("planar_cycle").space, 40, 40);
  CHECK(recipe_cells(plane, {BlockRecipe::Annulus, 0, 0, 0.5, 1.5}) ==
        annulus_cells(plane, {0, 0}, 0.5, 1.5));
  CHECK(recipe_cells(plane, {BlockRecipe::Disk, 1, 0, 0.25, 0}) ==
        disk_cells(plane, {1, 0}, 0.25));
  CHECK(recipe_cells(plane, {BlockRecipe::Box, -1, -1, 1, 1}) ==
        box_cells(plane, {-1, -1}, {1, 1}));

  CubicalGrid torus(descriptor("saddle_node_torus").space, 40, 40);
  CHECK(recipe_cells(torus, {BlockRecipe::Band, 0, 1, 0.2, 0}) ==
        band_cells(torus, 0, 1.0, 0.2));

  BlockAnalysis ba = analyze_block("planar_saddle", 64);
  CHECK(ba.block == box_cells(ba.grid, {-1, -1}, {1, 1}));
}

TEST_CASE("orbit probes recognize settling tails") {
  FlowSpec cyc = make_flow("planar_cycle");
  CubicalGrid g(cyc.space, 64, 64);
  CellSet circle = annulus_cells(g, {0, 0}, 0.9, 1.1);
  CellSet origin = disk_cells(g, {0, 0}, 0.15);

  // forward tail settles on the cycle through every shrinking stage
  std::vector<CellSet> around_cycle = {dilate(circle, 3), dilate(circle, 1)};
  CHECK(strong_influence_probe(cyc, g, {0.3, 0.0}, around_cycle, 20.0));

  // mixed family: the cycle stages hold forward, the origin stage backward
  std::vector<CellSet> mixed = {dilate(circle, 2), origin};
  CHECK(strong_influence_probe(cyc, g, {0.3, 0.0}, mixed, 20.0));

  // neither tail visits a box away from both limit sets
  CellSet corner = box_cells(g, {1.3, 1.3}, {1.7, 1.7});
  CHECK_FALSE(strong_influence_probe(cyc, g, {0.3, 0.0}, {corner}, 20.0));

  // saddle orbits escape, leaving no tail on either side
  FlowSpec sad = make_flow("planar_saddle");
  CubicalGrid gs(sad.space, 64, 64);
  CellSet near_origin = disk_cells(gs, {0, 0}, 0.3);
  CHECK_FALSE(strong_influence_probe(sad, gs, {1.0, 0.5}, {near_origin}, 20.0));
}
