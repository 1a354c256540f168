#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nonsaddle/geometry.hpp"

namespace nonsaddle {

// Grid topology only: cell counts and which axes wrap. Kept as a small value
// type so CellSet can carry its own copy and never dangle.
struct GridShape {
  int32_t n0 = 1;
  int32_t n1 = 1;
  bool per0 = false;
  bool per1 = false;

  bool operator==(const GridShape&) const = default;

  int64_t n_cells() const { return int64_t(n0) * n1; }
  int64_t id(int32_t i, int32_t j) const { return int64_t(i) * n1 + j; }
  std::pair<int32_t, int32_t> coords(int64_t id) const {
    return {int32_t(id / n1), int32_t(id % n1)};
  }

  // Neighbor at offset (di, dj), wrapping periodic axes. -1 when the step
  // falls off a non-periodic edge.
  int64_t offset(int64_t id, int di, int dj) const {
    auto [i, j] = coords(id);
    i += di;
    j += dj;
    if (per0) {
      i %= n0;
      if (i < 0) i += n0;
    } else if (i < 0 || i >= n0) {
      return -1;
    }
    if (per1) {
      j %= n1;
      if (j < 0) j += n1;
    } else if (j < 0 || j >= n1) {
      return -1;
    }
    return this->id(i, j);
  }
};

// Uniform cubical grid over a PhaseSpace window. Cell (i, j) covers
// [lo.x + i*dx, lo.x + (i+1)*dx] x [lo.y + j*dy, lo.y + (j+1)*dy].
struct CubicalGrid {
  GridShape shape;
  PhaseSpace space;

  CubicalGrid() = default;
  CubicalGrid(PhaseSpace sp, int32_t nx, int32_t ny) : space(sp) {
    shape = {nx, ny, sp.periodic[0], sp.periodic[1]};
  }

  double dx() const { return space.width(0) / shape.n0; }
  double dy() const { return space.width(1) / shape.n1; }
  double cell_diameter() const { return std::hypot(dx(), dy()); }

  Vec2 center(int64_t id) const {
    auto [i, j] = shape.coords(id);
    return {space.lo.x + (i + 0.5) * dx(), space.lo.y + (j + 0.5) * dy()};
  }

  Vec2 corner(int32_t i, int32_t j) const {
    return {space.lo.x + i * dx(), space.lo.y + j * dy()};
  }

  // Cell containing p, or nullopt when p lies outside a non-periodic axis.
  std::optional<int64_t> cell_of(Vec2 p) const {
    p = space.wrap(p);
    int64_t i = int64_t(std::floor((p.x - space.lo.x) / dx()));
    int64_t j = int64_t(std::floor((p.y - space.lo.y) / dy()));
    if (shape.per0) {
      i %= shape.n0;
      if (i < 0) i += shape.n0;
    } else if (i == shape.n0 && p.x <= space.hi.x) {
      i = shape.n0 - 1;  // hi edge belongs to the last cell
    }
    if (shape.per1) {
      j %= shape.n1;
      if (j < 0) j += shape.n1;
    } else if (j == shape.n1 && p.y <= space.hi.y) {
      j = shape.n1 - 1;
    }
    if (i < 0 || i >= shape.n0 || j < 0 || j >= shape.n1) return std::nullopt;
    return shape.id(int32_t(i), int32_t(j));
  }
};

// Set of grid cells, bit per cell. All binary ops require equal shapes.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(GridShape s)
      : shape_(s), words_((s.n_cells() + 63) / 64, 0) {}

  const GridShape& shape() const { return shape_; }

  bool test(int64_t id) const {
    return (words_[id >> 6] >> (id & 63)) & 1;
  }
  void set(int64_t id) { words_[id >> 6] |= uint64_t(1) << (id & 63); }
  void reset(int64_t id) { words_[id >> 6] &= ~(uint64_t(1) << (id & 63)); }

  int64_t count() const;
  bool empty() const;
  bool operator==(const CellSet&) const = default;

  CellSet& operator|=(const CellSet& o);
  CellSet& operator&=(const CellSet& o);
  CellSet& operator-=(const CellSet& o);
  CellSet operator|(const CellSet& o) const { CellSet r = *this; return r |= o; }
  CellSet operator&(const CellSet& o) const { CellSet r = *this; return r &= o; }
  CellSet operator-(const CellSet& o) const { CellSet r = *this; return r -= o; }
  CellSet complement() const;
  bool subset_of(const CellSet& o) const;
  bool intersects(const CellSet& o) const;

  template <class F>
  void for_each(F&& f) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t bits = words_[w];
      while (bits) {
        int b = std::countr_zero(bits);
        f(int64_t(w) * 64 + b);
        bits &= bits - 1;
      }
    }
  }

  std::vector<int64_t> ids() const {
    std::vector<int64_t> out;
    out.reserve(count());
    for_each([&](int64_t id) { out.push_back(id); });
    return out;
  }

 private:
  GridShape shape_;
  std::vector<uint64_t> words_;
};

// Chebyshev-ball dilation: grow by r rings of 8-neighbors (wrap-aware).
CellSet dilate(const CellSet& s, int r);

// Cells of s with an 8-neighbor outside s; off-grid counts as outside.
CellSet boundary(const CellSet& s);
inline CellSet interior(const CellSet& s) { return s - boundary(s); }

// 4-adjacent connected components, wrap-aware, largest first.
std::vector<CellSet> components4(const CellSet& s);

// All cells whose center satisfies pred.
template <class F>
CellSet cells_where(const CubicalGrid& g, F&& pred) {
  CellSet out(g.shape);
  for (int64_t id = 0; id < g.shape.n_cells(); ++id)
    if (pred(g.center(id))) out.set(id);
  return out;
}

// Common block shapes, all defined through cell centers.
CellSet disk_cells(const CubicalGrid& g, Vec2 c, double radius);
CellSet annulus_cells(const CubicalGrid& g, Vec2 c, double r_in, double r_out);
CellSet box_cells(const CubicalGrid& g, Vec2 lo, Vec2 hi);
// Band |axis_coord - value| <= halfwidth measured with periodic wrapping.
CellSet band_cells(const CubicalGrid& g, int axis, double value,
                   double halfwidth);

}  // namespace nonsaddle
