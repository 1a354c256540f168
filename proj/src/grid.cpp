#include "nonsaddle/grid.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace nonsaddle {

namespace {

void check_shapes(const CellSet& a, const CellSet& b) {
  if (!(a.shape() == b.shape()))
    throw std::logic_error("CellSet shape mismatch");
}

}  // namespace

int64_t CellSet::count() const {
  int64_t c = 0;
  for (uint64_t w : words_) c += std::popcount(w);
  return c;
}

bool CellSet::empty() const {
  for (uint64_t w : words_)
    if (w) return false;
  return true;
}

CellSet& CellSet::operator|=(const CellSet& o) {
  check_shapes(*this, o);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

CellSet& CellSet::operator&=(const CellSet& o) {
  check_shapes(*this, o);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

CellSet& CellSet::operator-=(const CellSet& o) {
  check_shapes(*this, o);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

CellSet CellSet::complement() const {
  CellSet r = *this;
  for (auto& w : r.words_) w = ~w;
  int tail = int(shape_.n_cells() & 63);
  if (tail) r.words_.back() &= (uint64_t(1) << tail) - 1;
  return r;
}

bool CellSet::subset_of(const CellSet& o) const {
  check_shapes(*this, o);
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

bool CellSet::intersects(const CellSet& o) const {
  check_shapes(*this, o);
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & o.words_[i]) return true;
  return false;
}

CellSet dilate(const CellSet& s, int r) {
  CellSet cur = s;
  const GridShape& sh = s.shape();
  for (int ring = 0; ring < r; ++ring) {
    CellSet next = cur;
    cur.for_each([&](int64_t id) {
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          int64_t nb = sh.offset(id, di, dj);
          if (nb >= 0) next.set(nb);
        }
    });
    cur = std::move(next);
  }
  return cur;
}

CellSet boundary(const CellSet& s) {
  const GridShape& sh = s.shape();
  CellSet out(sh);
  s.for_each([&](int64_t id) {
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        int64_t nb = sh.offset(id, di, dj);
        if (nb < 0 || !s.test(nb)) {
          out.set(id);
          return;
        }
      }
  });
  return out;
}

std::vector<CellSet> components4(const CellSet& s) {
  const GridShape& sh = s.shape();
  std::vector<CellSet> comps;
  CellSet seen(sh);
  constexpr int kDi[4] = {1, -1, 0, 0};
  constexpr int kDj[4] = {0, 0, 1, -1};
  std::vector<int64_t> stack;
  s.for_each([&](int64_t seed) {
    if (seen.test(seed)) return;
    CellSet comp(sh);
    stack.push_back(seed);
    seen.set(seed);
    while (!stack.empty()) {
      int64_t id = stack.back();
      stack.pop_back();
      comp.set(id);
      for (int k = 0; k < 4; ++k) {
        int64_t nb = sh.offset(id, kDi[k], kDj[k]);
        if (nb >= 0 && s.test(nb) && !seen.test(nb)) {
          seen.set(nb);
          stack.push_back(nb);
        }
      }
    }
    comps.push_back(std::move(comp));
  });
  std::sort(comps.begin(), comps.end(),
            [](const CellSet& a, const CellSet& b) {
              return a.count() > b.count();
            });
  return comps;
}

CellSet disk_cells(const CubicalGrid& g, Vec2 c, double radius) {
  return cells_where(
      g, [&](Vec2 p) { return g.space.distance(p, c) <= radius; });
}

CellSet annulus_cells(const CubicalGrid& g, Vec2 c, double r_in,
                      double r_out) {
  return cells_where(g, [&](Vec2 p) {
    double d = g.space.distance(p, c);
    return d >= r_in && d <= r_out;
  });
}

CellSet box_cells(const CubicalGrid& g, Vec2 lo, Vec2 hi) {
  return cells_where(g, [&](Vec2 p) {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  });
}

CellSet band_cells(const CubicalGrid& g, int axis, double value,
                   double halfwidth) {
  return cells_where(g, [&](Vec2 p) {
    double d = axis == 0 ? p.x - value : p.y - value;
    if (g.space.periodic[axis]) {
      double w = g.space.width(axis);
      d -= w * std::round(d / w);
    }
    return std::abs(d) <= halfwidth;
  });
}

}  // namespace nonsaddle
