#pragma once

#include <array>
#include <cstdint>
#include <tuple>
#include <vector>

#include "nonsaddle/grid.hpp"

namespace nonsaddle {

// Homology of full cubical sets: squares are grid cells, edges and vertices
// their faces, with identifications on periodic axes. A relative pair (N, A)
// with A a subset of N's cells quotients out every face of A's closure.
// GF(2) ranks come from a linear-time structural count, integer ranks from a
// sparse Smith normal form (small inputs only).

enum class Coefficients { Z2, Z };

struct BettiProfile {
  std::array<int64_t, 3> betti{0, 0, 0};
  bool torsion_present = false;
  Coefficients coefficients = Coefficients::Z2;

  bool operator==(const BettiProfile&) const = default;
};

// Alternating rank sum. Torsion never contributes.
inline int64_t euler(const BettiProfile& p) {
  return p.betti[0] - p.betti[1] + p.betti[2];
}

// Chain complex of a relative pair with dense generator indices. Boundary
// coefficients are +-1 after geometric cancellation (a square meeting the
// same edge twice through a period-1 wrap contributes zero).
struct ChainComplex {
  int64_t n_vertices = 0;
  int64_t n_edges = 0;
  int64_t n_squares = 0;
  // d1[e] = (vertex, coeff) pairs; d2[s] = (edge, coeff) pairs.
  std::vector<std::vector<std::pair<int64_t, int>>> d1;
  std::vector<std::vector<std::pair<int64_t, int>>> d2;
};

// a must be a subset of n (throws std::invalid_argument otherwise).
ChainComplex build_complex(const GridShape& shape, const CellSet& n,
                           const CellSet& a);

// Surviving generator counts of the relative complex; the alternating sum
// V - E + S is the Euler characteristic without any rank computation.
struct GeneratorCounts {
  int64_t vertices = 0;
  int64_t edges = 0;
  int64_t squares = 0;
};
GeneratorCounts relative_generators(const GridShape& shape, const CellSet& n,
                                    const CellSet& a);
int64_t euler_characteristic(const GridShape& shape, const CellSet& n,
                             const CellSet& a);

BettiProfile relative_betti(const GridShape& shape, const CellSet& n,
                            const CellSet& a,
                            Coefficients c = Coefficients::Z2);
BettiProfile betti(const GridShape& shape, const CellSet& cells,
                   Coefficients c = Coefficients::Z2);
int64_t euler_pair(const GridShape& shape, const CellSet& n, const CellSet& a);

// Invariant factors d1 | d2 | ... of an integer matrix, smallest-magnitude
// pivoting, arbitrary-precision arithmetic inside. Zero factors dropped, so
// the length is the rank.
std::vector<long long> smith_invariant_factors(
    int64_t rows, int64_t cols,
    const std::vector<std::tuple<int64_t, int64_t, long long>>& entries);

}  // namespace nonsaddle
