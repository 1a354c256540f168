#include "nonsaddle/cubhom.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace nonsaddle {
namespace {

using boost::multiprecision::cpp_int;

// Face indexing for a grid's cubical complex. Vertices sit at lattice
// corners, folded together on periodic axes; hedges run along axis 0,
// vedges along axis 1. All ids are dense per face dimension.
struct Faces {
  int32_t n0, n1;
  bool per0, per1;
  int64_t vx, vy;  // corner counts per axis
  int64_t n_vert, n_hedge, n_vedge;

  explicit Faces(const GridShape& s)
      : n0(s.n0), n1(s.n1), per0(s.per0), per1(s.per1) {
    vx = per0 ? n0 : int64_t(n0) + 1;
    vy = per1 ? n1 : int64_t(n1) + 1;
    n_vert = vx * vy;
    n_hedge = int64_t(n0) * vy;
    n_vedge = vx * int64_t(n1);
  }

  int64_t n_edges() const { return n_hedge + n_vedge; }

  int64_t vert(int64_t i, int64_t j) const { return i * vy + j; }
  int64_t hedge(int64_t i, int64_t j) const { return i * vy + j; }
  int64_t vedge(int64_t i, int64_t j) const { return n_hedge + i * n1 + j; }

  // successor corner index along each axis, wrapping when periodic
  int64_t next0(int64_t i) const { return per0 ? (i + 1) % n0 : i + 1; }
  int64_t next1(int64_t j) const { return per1 ? (j + 1) % n1 : j + 1; }

  // Oriented endpoints, tail -> head. A period-1 wrap makes them equal and
  // the boundary coefficient cancels to zero.
  void ends(int64_t e, int64_t& tail, int64_t& head) const {
    if (e < n_hedge) {
      int64_t i = e / vy, j = e % vy;
      tail = vert(i, j);
      head = vert(next0(i), j);
    } else {
      int64_t k = e - n_hedge;
      int64_t i = k / n1, j = k % n1;
      tail = vert(i, j);
      head = vert(i, next1(j));
    }
  }

  // The up-to-two squares an edge borders; -1 when a side falls off a
  // non-periodic rim. Both sides can be the same square on a period-1 axis,
  // in which case the incidences cancel.
  void sides(const GridShape& shape, int64_t e, int64_t& s1,
             int64_t& s2) const {
    if (e < n_hedge) {
      int64_t i = e / vy, j = e % vy;
      s1 = (per1 || j < n1) ? shape.id(int32_t(i), int32_t(j % n1)) : -1;
      int64_t jp = per1 ? (j - 1 + n1) % n1 : j - 1;
      s2 = jp >= 0 ? shape.id(int32_t(i), int32_t(jp)) : -1;
    } else {
      int64_t k = e - n_hedge;
      int64_t i = k / n1, j = k % n1;
      s1 = (per0 || i < n0) ? shape.id(int32_t(i % n0), int32_t(j)) : -1;
      int64_t ip = per0 ? (i - 1 + n0) % n0 : i - 1;
      s2 = ip >= 0 ? shape.id(int32_t(ip), int32_t(j)) : -1;
    }
  }

  // Counterclockwise boundary of square (i, j): bottom and right enter with
  // +1, top and left with -1.
  void square_edges(int64_t i, int64_t j,
                    std::pair<int64_t, int> (&out)[4]) const {
    out[0] = {hedge(i, j), +1};
    out[1] = {vedge(next0(i), j), +1};
    out[2] = {hedge(i, next1(j)), -1};
    out[3] = {vedge(i, j), -1};
  }
};

struct UnionFind {
  std::vector<int64_t> parent;
  explicit UnionFind(int64_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), int64_t(0));
  }
  int64_t find(int64_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int64_t a, int64_t b) { parent[find(a)] = find(b); }
};

void mark_closure(const Faces& f, const GridShape& shape, const CellSet& cells,
                  std::vector<uint8_t>& vmark, std::vector<uint8_t>& emark) {
  cells.for_each([&](int64_t id) {
    auto [i, j] = shape.coords(id);
    int64_t i1 = f.next0(i), j1 = f.next1(j);
    vmark[f.vert(i, j)] = 1;
    vmark[f.vert(i1, j)] = 1;
    vmark[f.vert(i, j1)] = 1;
    vmark[f.vert(i1, j1)] = 1;
    emark[f.hedge(i, j)] = 1;
    emark[f.hedge(i, j1)] = 1;
    emark[f.vedge(i, j)] = 1;
    emark[f.vedge(i1, j)] = 1;
  });
}

void require_pair(const CellSet& n, const CellSet& a) {
  if (!a.subset_of(n))
    throw std::invalid_argument(
        "relative pair: second cell set must be contained in the first");
}

struct Survivors {
  Faces f;
  std::vector<uint8_t> vert, edge;  // in closure(N) and not in closure(A)
  CellSet squares;                  // generator squares, N - A

  Survivors(const GridShape& shape, const CellSet& n, const CellSet& a)
      : f(shape), squares(n - a) {
    std::vector<uint8_t> vn(f.n_vert, 0), en(f.n_edges(), 0);
    std::vector<uint8_t> va(f.n_vert, 0), ea(f.n_edges(), 0);
    mark_closure(f, shape, n, vn, en);
    mark_closure(f, shape, a, va, ea);
    vert.resize(f.n_vert);
    edge.resize(f.n_edges());
    for (int64_t v = 0; v < f.n_vert; ++v) vert[v] = vn[v] && !va[v];
    for (int64_t e = 0; e < f.n_edges(); ++e) edge[e] = en[e] && !ea[e];
  }
};

// GF(2) Betti numbers without assembling matrices. rank d1 is V' minus the
// number of components of the surviving-vertex graph untouched by any edge
// with exactly one surviving endpoint; ker d2 is spanned by components of
// generator squares (glued across surviving shared edges) in which no square
// leaves a surviving edge uncovered. Both facts are plain rank-nullity over
// GF(2): within a component the edge-boundary columns span the sum-zero
// subspace, and one half-edge supplies the missing coordinate.
BettiProfile betti_structural(const GridShape& shape, const CellSet& n,
                              const CellSet& a) {
  Survivors sv(shape, n, a);
  const Faces& f = sv.f;

  int64_t n_v = 0, n_e = 0;
  for (uint8_t m : sv.vert) n_v += m;
  for (uint8_t m : sv.edge) n_e += m;
  int64_t n_s = sv.squares.count();

  UnionFind vf(f.n_vert);
  std::vector<int64_t> half;
  for (int64_t e = 0; e < f.n_edges(); ++e) {
    if (!sv.edge[e]) continue;
    int64_t tail, head;
    f.ends(e, tail, head);
    if (tail == head) continue;  // boundary cancels, no constraint
    bool st = sv.vert[tail], sh = sv.vert[head];
    if (st && sh)
      vf.unite(tail, head);
    else if (st)
      half.push_back(tail);
    else if (sh)
      half.push_back(head);
  }
  std::vector<uint8_t> vkilled(f.n_vert, 0), vseen(f.n_vert, 0);
  for (int64_t w : half) vkilled[vf.find(w)] = 1;
  int64_t b0 = 0;
  for (int64_t v = 0; v < f.n_vert; ++v) {
    if (!sv.vert[v]) continue;
    int64_t r = vf.find(v);
    if (!vseen[r]) {
      vseen[r] = 1;
      if (!vkilled[r]) ++b0;
    }
  }

  UnionFind sf(shape.n_cells());
  std::vector<int64_t> exposed;
  for (int64_t e = 0; e < f.n_edges(); ++e) {
    if (!sv.edge[e]) continue;
    int64_t s1, s2;
    f.sides(shape, e, s1, s2);
    if (s1 == s2) continue;  // doubled incidence on a period-1 axis
    bool g1 = s1 >= 0 && sv.squares.test(s1);
    bool g2 = s2 >= 0 && sv.squares.test(s2);
    if (g1 && g2)
      sf.unite(s1, s2);
    else if (g1)
      exposed.push_back(s1);
    else if (g2)
      exposed.push_back(s2);
  }
  std::vector<uint8_t> skilled(shape.n_cells(), 0), sseen(shape.n_cells(), 0);
  for (int64_t w : exposed) skilled[sf.find(w)] = 1;
  int64_t b2 = 0;
  sv.squares.for_each([&](int64_t s) {
    int64_t r = sf.find(s);
    if (!sseen[r]) {
      sseen[r] = 1;
      if (!skilled[r]) ++b2;
    }
  });

  int64_t b1 = n_e - (n_v - b0) - (n_s - b2);
  BettiProfile p;
  p.betti = {b0, b1, b2};
  p.coefficients = Coefficients::Z2;
  return p;
}

// Sparse integer elimination to diagonal form. The diagonal is normalized
// into the divisibility chain afterwards; correctness needs only unimodular
// row and column operations throughout.
class SmithEliminator {
 public:
  SmithEliminator(int64_t rows, int64_t cols)
      : row_(rows), cols_(cols), row_done_(rows, 0), col_done_(cols, 0) {}

  void add(int64_t r, int64_t c, long long v) {
    if (v == 0) return;
    cpp_int& slot = row_[r][c];
    slot += v;
    if (slot == 0)
      row_[r].erase(c);
    else
      cols_[c].insert(r);
  }

  std::vector<cpp_int> run() {
    std::vector<cpp_int> diag;
    for (;;) {
      auto [pr, pc] = smallest_pivot();
      if (pr < 0) break;
      if (!clear_column(pr, pc)) continue;  // shrunk, re-pick pivot
      if (!clear_row(pr, pc)) continue;
      diag.push_back(abs(row_[pr][pc]));
      row_done_[pr] = 1;
      col_done_[pc] = 1;
      row_[pr].clear();
    }
    return diag;
  }

 private:
  std::vector<std::map<int64_t, cpp_int>> row_;
  std::vector<std::set<int64_t>> cols_;  // superset of rows hitting a column
  std::vector<uint8_t> row_done_, col_done_;

  std::pair<int64_t, int64_t> smallest_pivot() {
    int64_t pr = -1, pc = -1;
    cpp_int best;
    for (size_t r = 0; r < row_.size(); ++r) {
      if (row_done_[r]) continue;
      for (const auto& [c, v] : row_[r]) {
        if (col_done_[c] || v == 0) continue;
        cpp_int av = abs(v);
        if (pr < 0 || av < best) {
          best = av;
          pr = int64_t(r);
          pc = c;
          if (best == 1) return {pr, pc};
        }
      }
    }
    return {pr, pc};
  }

  // row[dst] -= q * row[src]
  void row_axpy(int64_t dst, int64_t src, const cpp_int& q) {
    for (const auto& [c, v] : row_[src]) {
      cpp_int& slot = row_[dst][c];
      slot -= q * v;
      if (slot == 0)
        row_[dst].erase(c);
      else
        cols_[c].insert(dst);
    }
  }

  bool clear_column(int64_t pr, int64_t pc) {
    const cpp_int p = row_[pr][pc];
    bool clean = true;
    std::vector<int64_t> hits(cols_[pc].begin(), cols_[pc].end());
    for (int64_t r : hits) {
      if (r == pr || row_done_[r]) continue;
      auto it = row_[r].find(pc);
      if (it == row_[r].end()) continue;
      cpp_int q = it->second / p;  // truncated, remainder shrinks below |p|
      if (q != 0) row_axpy(r, pr, q);
      if (row_[r].count(pc)) clean = false;
    }
    return clean;
  }

  // column ops: col[c2] -= q * col[pc], touching only rows present in pc
  bool clear_row(int64_t pr, int64_t pc) {
    const cpp_int p = row_[pr][pc];
    bool clean = true;
    std::vector<int64_t> targets;
    for (const auto& [c, v] : row_[pr])
      if (c != pc && !col_done_[c] && v != 0) targets.push_back(c);
    for (int64_t c2 : targets) {
      cpp_int q = row_[pr][c2] / p;
      if (q != 0) {
        std::vector<int64_t> hits(cols_[pc].begin(), cols_[pc].end());
        for (int64_t r : hits) {
          if (row_done_[r]) continue;
          auto it = row_[r].find(pc);
          if (it == row_[r].end()) continue;
          cpp_int& slot = row_[r][c2];
          slot -= q * it->second;
          if (slot == 0)
            row_[r].erase(c2);
          else
            cols_[c2].insert(r);
        }
      }
      if (row_[pr].count(c2)) clean = false;
    }
    return clean;
  }
};

}  // namespace

ChainComplex build_complex(const GridShape& shape, const CellSet& n,
                           const CellSet& a) {
  require_pair(n, a);
  Survivors sv(shape, n, a);
  const Faces& f = sv.f;

  std::vector<int64_t> vidx(f.n_vert, -1), eidx(f.n_edges(), -1);
  ChainComplex cx;
  for (int64_t v = 0; v < f.n_vert; ++v)
    if (sv.vert[v]) vidx[v] = cx.n_vertices++;
  for (int64_t e = 0; e < f.n_edges(); ++e)
    if (sv.edge[e]) eidx[e] = cx.n_edges++;

  cx.d1.resize(cx.n_edges);
  for (int64_t e = 0; e < f.n_edges(); ++e) {
    if (!sv.edge[e]) continue;
    int64_t tail, head;
    f.ends(e, tail, head);
    auto& out = cx.d1[eidx[e]];
    if (tail != head) {
      if (sv.vert[tail]) out.push_back({vidx[tail], -1});
      if (sv.vert[head]) out.push_back({vidx[head], +1});
    }
  }

  cx.n_squares = sv.squares.count();
  cx.d2.resize(cx.n_squares);
  int64_t sidx = 0;
  sv.squares.for_each([&](int64_t s) {
    auto [i, j] = shape.coords(s);
    std::pair<int64_t, int> raw[4];
    f.square_edges(i, j, raw);
    auto& out = cx.d2[sidx++];
    for (auto [e, c] : raw) {
      if (!sv.edge[e]) continue;
      bool merged = false;
      for (auto& [oe, oc] : out)
        if (oe == eidx[e]) {
          oc += c;
          merged = true;
          break;
        }
      if (!merged) out.push_back({eidx[e], c});
    }
    std::erase_if(out, [](const auto& p) { return p.second == 0; });
  });
  return cx;
}

GeneratorCounts relative_generators(const GridShape& shape, const CellSet& n,
                                    const CellSet& a) {
  require_pair(n, a);
  Survivors sv(shape, n, a);
  GeneratorCounts g;
  for (uint8_t m : sv.vert) g.vertices += m;
  for (uint8_t m : sv.edge) g.edges += m;
  g.squares = sv.squares.count();
  return g;
}

int64_t euler_characteristic(const GridShape& shape, const CellSet& n,
                             const CellSet& a) {
  GeneratorCounts g = relative_generators(shape, n, a);
  return g.vertices - g.edges + g.squares;
}

BettiProfile relative_betti(const GridShape& shape, const CellSet& n,
                            const CellSet& a, Coefficients c) {
  require_pair(n, a);
  if (c == Coefficients::Z2) return betti_structural(shape, n, a);

  ChainComplex cx = build_complex(shape, n, a);
  std::vector<std::tuple<int64_t, int64_t, long long>> e1, e2;
  for (int64_t e = 0; e < cx.n_edges; ++e)
    for (auto [v, coef] : cx.d1[e]) e1.push_back({v, e, coef});
  for (int64_t s = 0; s < cx.n_squares; ++s)
    for (auto [e, coef] : cx.d2[s]) e2.push_back({e, s, coef});
  auto f1 = smith_invariant_factors(cx.n_vertices, cx.n_edges, e1);
  auto f2 = smith_invariant_factors(cx.n_edges, cx.n_squares, e2);
  int64_t r1 = int64_t(f1.size()), r2 = int64_t(f2.size());

  BettiProfile p;
  p.coefficients = Coefficients::Z;
  p.betti = {cx.n_vertices - r1, cx.n_edges - r1 - r2, cx.n_squares - r2};
  for (long long d : f1)
    if (d > 1) p.torsion_present = true;
  for (long long d : f2)
    if (d > 1) p.torsion_present = true;
  return p;
}

BettiProfile betti(const GridShape& shape, const CellSet& cells,
                   Coefficients c) {
  return relative_betti(shape, cells, CellSet(shape), c);
}

int64_t euler_pair(const GridShape& shape, const CellSet& n,
                   const CellSet& a) {
  return euler(relative_betti(shape, n, a, Coefficients::Z2));
}

std::vector<long long> smith_invariant_factors(
    int64_t rows, int64_t cols,
    const std::vector<std::tuple<int64_t, int64_t, long long>>& entries) {
  SmithEliminator el(rows, cols);
  for (auto [r, c, v] : entries) el.add(r, c, v);
  std::vector<cpp_int> diag = el.run();

  // normalize into the divisibility chain d1 | d2 | ...
  std::sort(diag.begin(), diag.end());
  for (size_t i = 0; i < diag.size(); ++i)
    for (size_t j = i + 1; j < diag.size(); ++j)
      if (diag[j] % diag[i] != 0) {
        cpp_int g = gcd(diag[i], diag[j]);
        diag[j] = diag[i] / g * diag[j];
        diag[i] = g;
      }
  std::vector<long long> out;
  out.reserve(diag.size());
  for (const cpp_int& d : diag) out.push_back(d.convert_to<long long>());
  return out;
}

}  // namespace nonsaddle
