// Grid and cell-set checks. Set algebra is verified against a std::set
// reference model driven by a seeded RNG; the shape constructors are checked
// two ways, against an explicit center-predicate rebuild and against the
// analytic area with a perimeter-proportional error bound.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <random>
#include <set>

#include "nonsaddle/grid.hpp"

using namespace nonsaddle;

namespace {

PhaseSpace plane_window() {
  return {{-2.0, -2.0}, {2.0, 2.0}, {false, false}};
}

PhaseSpace torus_window() {
  return {{-1.0, -1.0}, {1.0, 1.0}, {true, true}};
}

CellSet from_ids(GridShape sh, std::initializer_list<int64_t> ids) {
  CellSet s(sh);
  for (int64_t id : ids) s.set(id);
  return s;
}

}  // namespace

TEST_CASE("cell ids, coords and neighbor steps") {
  GridShape sh{5, 7, false, true};
  CHECK(sh.n_cells() == 35);
  for (int32_t i = 0; i < sh.n0; ++i)
    for (int32_t j = 0; j < sh.n1; ++j) {
      auto [ci, cj] = sh.coords(sh.id(i, j));
      CHECK(ci == i);
      CHECK(cj == j);
    }

  // axis 1 wraps, axis 0 does not
  CHECK(sh.offset(sh.id(2, 6), 0, 1) == sh.id(2, 0));
  CHECK(sh.offset(sh.id(2, 0), 0, -1) == sh.id(2, 6));
  CHECK(sh.offset(sh.id(0, 3), -1, 0) == -1);
  CHECK(sh.offset(sh.id(4, 3), 1, 0) == -1);
  CHECK(sh.offset(sh.id(3, 2), -1, 1) == sh.id(2, 3));

  GridShape torus{4, 4, true, true};
  // walking n0 steps in either direction is the identity
  int64_t id = torus.id(1, 2);
  CHECK(torus.offset(id, 4, 0) == id);
  CHECK(torus.offset(id, 0, -4) == id);
  CHECK(torus.offset(id, -5, 9) == torus.offset(id, -1, 1));
}

TEST_CASE("cell set algebra matches a reference model") {
  GridShape sh{13, 9, false, false};
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int64_t> pick(0, sh.n_cells() - 1);

  std::set<int64_t> ma, mb;
  CellSet a(sh), b(sh);
  for (int k = 0; k < 60; ++k) {
    int64_t ia = pick(rng), ib = pick(rng);
    a.set(ia);
    ma.insert(ia);
    b.set(ib);
    mb.insert(ib);
  }
  // drop a few again to exercise reset
  for (int k = 0; k < 10; ++k) {
    int64_t ia = pick(rng);
    a.reset(ia);
    ma.erase(ia);
  }

  CHECK(a.count() == int64_t(ma.size()));
  CHECK_FALSE(a.empty());
  CHECK(CellSet(sh).empty());

  auto as_model = [&](const CellSet& s) {
    std::set<int64_t> m;
    s.for_each([&](int64_t id) { m.insert(id); });
    return m;
  };

  std::set<int64_t> mu, mi, md;
  std::set_union(ma.begin(), ma.end(), mb.begin(), mb.end(),
                 std::inserter(mu, mu.end()));
  std::set_intersection(ma.begin(), ma.end(), mb.begin(), mb.end(),
                        std::inserter(mi, mi.end()));
  std::set_difference(ma.begin(), ma.end(), mb.begin(), mb.end(),
                      std::inserter(md, md.end()));
  CHECK(as_model(a | b) == mu);
  CHECK(as_model(a & b) == mi);
  CHECK(as_model(a - b) == md);

  CellSet comp = a.complement();
  CHECK(comp.count() + a.count() == sh.n_cells());
  CHECK_FALSE(comp.intersects(a));
  CHECK((comp | a).count() == sh.n_cells());

  CHECK((a & b).subset_of(a));
  CHECK((a & b).subset_of(b));
  CHECK(a.subset_of(a | b));
  CHECK(a.intersects(a | b));
  CHECK_FALSE((a - b).intersects(b));

  // ids() agrees with for_each and is sorted by construction
  auto ids = a.ids();
  CHECK(std::is_sorted(ids.begin(), ids.end()));
  CHECK(std::set<int64_t>(ids.begin(), ids.end()) == ma);
}

TEST_CASE("dilation, boundary and interior on known shapes") {
  CubicalGrid g(plane_window(), 16, 16);
  GridShape sh = g.shape;

  // lone interior cell grows as a Chebyshev ball
  CellSet one = from_ids(sh, {sh.id(8, 8)});
  CHECK(dilate(one, 0).count() == 1);
  CHECK(dilate(one, 1).count() == 9);
  CHECK(dilate(one, 2).count() == 25);
  CHECK(one.subset_of(dilate(one, 3)));

  // at a corner the ball clips against the frame
  CellSet corner = from_ids(sh, {sh.id(0, 0)});
  CHECK(dilate(corner, 1).count() == 4);
  CHECK(dilate(corner, 2).count() == 9);

  // full grid: every frame cell sees the outside, interior is the rest
  CellSet full = CellSet(sh).complement();
  CellSet rim = boundary(full);
  CHECK(rim.count() == 4 * 16 - 4);
  CHECK(interior(full).count() == 14 * 14);
  CHECK((rim | interior(full)) == full);
  CHECK_FALSE(rim.intersects(interior(full)));

  // a 4x4 box: boundary is the 12-cell ring, interior the 2x2 core
  CellSet box(sh);
  for (int32_t i = 5; i < 9; ++i)
    for (int32_t j = 5; j < 9; ++j) box.set(sh.id(i, j));
  CHECK(boundary(box).count() == 12);
  CHECK(interior(box).count() == 4);

  // on a torus the full grid has no boundary and dilation wraps the seam
  CubicalGrid t(torus_window(), 8, 8);
  CellSet tfull = CellSet(t.shape).complement();
  CHECK(boundary(tfull).empty());
  CellSet seam = from_ids(t.shape, {t.shape.id(0, 3)});
  CellSet grown = dilate(seam, 1);
  CHECK(grown.count() == 9);
  CHECK(grown.test(t.shape.id(7, 2)));
  CHECK(grown.test(t.shape.id(7, 4)));
}

TEST_CASE("connected components split and respect wrapping") {
  CubicalGrid g(plane_window(), 12, 12);
  GridShape sh = g.shape;

  CellSet blobs(sh);
  // diagonal pairs are not 4-adjacent, so this L of 5 stays one piece
  for (auto [i, j] : {std::pair{2, 2}, {2, 3}, {2, 4}, {3, 4}, {4, 4}})
    blobs.set(sh.id(i, j));
  for (auto [i, j] : {std::pair{8, 8}, {8, 9}, {9, 9}})
    blobs.set(sh.id(i, j));
  blobs.set(sh.id(0, 11));  // isolated corner cell

  auto comps = components4(blobs);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0].count() == 5);
  CHECK(comps[1].count() == 3);
  CHECK(comps[2].count() == 1);
  CHECK((comps[0] | comps[1] | comps[2]) == blobs);
  CHECK_FALSE(comps[0].intersects(comps[1]));

  // a strip touching both ends of a wrapped axis is a single component,
  // but splits in two when the same geometry sits on a bounded axis
  auto strip_ends = [](GridShape s) {
    CellSet c(s);
    for (int32_t j = 3; j < 6; ++j) {
      c.set(s.id(0, j));
      c.set(s.id(s.n0 - 1, j));
    }
    return c;
  };
  GridShape wrapped{10, 10, true, false};
  GridShape bounded{10, 10, false, false};
  CHECK(components4(strip_ends(wrapped)).size() == 1);
  CHECK(components4(strip_ends(bounded)).size() == 2);

  CHECK(components4(CellSet(sh)).empty());
}

TEST_CASE("shape constructors match center predicates and area") {
  CubicalGrid g(plane_window(), 64, 64);

  // each constructor must equal an explicit rebuild from cell centers
  CellSet disk = disk_cells(g, {0.25, -0.5}, 1.0);
  CHECK(disk == cells_where(g, [&](Vec2 p) {
          return std::hypot(p.x - 0.25, p.y + 0.5) <= 1.0;
        }));

  CellSet ann = annulus_cells(g, {0.0, 0.0}, 0.5, 1.5);
  CHECK(ann == cells_where(g, [](Vec2 p) {
          double r = std::hypot(p.x, p.y);
          return r >= 0.5 && r <= 1.5;
        }));
  CHECK(ann == (disk_cells(g, {0, 0}, 1.5) - interior(disk_cells(g, {0, 0}, 0.5)) -
                (disk_cells(g, {0, 0}, 0.5) - ann)));

  CellSet box = box_cells(g, {-1.0, -0.25}, {0.5, 1.0});
  CHECK(box == cells_where(g, [](Vec2 p) {
          return p.x >= -1.0 && p.x <= 0.5 && p.y >= -0.25 && p.y <= 1.0;
        }));

  // counted area converges to the analytic one; the discrepancy is a ring
  // of cells along the curve, so it is bounded by perimeter * diameter
  for (int n : {64, 128, 256}) {
    CubicalGrid gg(plane_window(), n, n);
    double cell_area = gg.dx() * gg.dy();
    double counted = double(disk_cells(gg, {0, 0}, 1.2).count()) * cell_area;
    double exact = M_PI * 1.2 * 1.2;
    double slack = 2 * M_PI * 1.2 * gg.cell_diameter();
    CHECK(std::abs(counted - exact) <= slack);
  }

  // bands measure distance with wrapping: around the seam of a torus the
  // two half-bands join up, on the plane the same request clips to nothing
  CubicalGrid t(torus_window(), 32, 32);
  CellSet band = band_cells(t, 0, 1.0, 0.2);
  CHECK(band == cells_where(t, [&](Vec2 p) {
          double d = std::abs(p.x - 1.0);
          d = std::min(d, std::abs(p.x - 1.0 + 2.0));
          d = std::min(d, std::abs(p.x - 1.0 - 2.0));
          return d <= 0.2;
        }));
  CHECK(band.count() == 6 * 32);
  CHECK(components4(band).size() == 1);

  CubicalGrid flat({{-1, -1}, {1, 1}, {false, false}}, 32, 32);
  CHECK(band_cells(flat, 0, 1.0, 0.2).count() == 3 * 32);
}

TEST_CASE("point location round trips") {
  CubicalGrid g({{-1.0, 0.0}, {3.0, 2.0}, {true, false}}, 20, 10);

  for (int64_t id = 0; id < g.shape.n_cells(); ++id) {
    auto back = g.cell_of(g.center(id));
    REQUIRE(back.has_value());
    CHECK(*back == id);
  }

  // corners index the cell to their upper right
  CHECK(g.corner(0, 0) == Vec2{-1.0, 0.0});
  CHECK(g.cell_of(Vec2{-1.0 + 0.5 * g.dx(), 0.5 * g.dy()}) == g.shape.id(0, 0));

  // wrapped axis: shifting by a full width lands in the same cell
  Vec2 p{0.37, 1.2};
  CHECK(g.cell_of(p) == g.cell_of(Vec2{p.x + 4.0, p.y}));
  CHECK(g.cell_of(p) == g.cell_of(Vec2{p.x - 8.0, p.y}));

  // the closed top edge of a bounded axis belongs to the last row
  auto top = g.cell_of(Vec2{0.1, 2.0});
  REQUIRE(top.has_value());
  CHECK(g.shape.coords(*top).second == 9);

  // off the bounded axis there is no cell
  CHECK_FALSE(g.cell_of(Vec2{0.1, 2.0001}).has_value());
  CHECK_FALSE(g.cell_of(Vec2{0.1, -0.5}).has_value());

  CHECK(g.dx() == doctest::Approx(0.2));
  CHECK(g.dy() == doctest::Approx(0.2));
  CHECK(g.cell_diameter() == doctest::Approx(std::hypot(0.2, 0.2)));
}
