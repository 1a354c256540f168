#pragma once

#include <vector>

#include "nonsaddle/cubhom.hpp"
#include "nonsaddle/outermap.hpp"

namespace nonsaddle {

// Cohomological indices of an isolating block: Betti profiles of the block
// relative to its exit set (forward index) and to its entrance set (backward
// index). Field reversal exchanges the two.
struct ConleyIndexReport {
  BettiProfile ch_plus;   // (N, exit)
  BettiProfile ch_minus;  // (N, entrance)
  const IndexPair* block = nullptr;  // non-owning
};

ConleyIndexReport conley_indices(const IndexPair& ip,
                                 Coefficients c = Coefficients::Z2);

enum class ConleyCertificate { Certified, Inconclusive };
const char* to_string(ConleyCertificate v);

// Non-saddle certificate. Certified iff W is connected, W - Inv has exactly
// two components, both first index ranks vanish, and exit and entrance are
// both nonempty; the conclusion reads "non-saddle, neither attractor nor
// repeller", so attractor and repeller blocks are out by definition.
// Needs Inv <= W <= N, throws std::invalid_argument otherwise.
ConleyCertificate nonsaddle_by_conley(const IndexPair& ip, const CellSet& w);

enum class SmallNeighborhoodVerdict { Attractor, Repeller, Inconclusive };
const char* to_string(SmallNeighborhoodVerdict v);

struct SmallNeighborhoodResult {
  SmallNeighborhoodVerdict verdict = SmallNeighborhoodVerdict::Inconclusive;
  int decisive_depth = 0;               // smallest deciding block, 0 = none
  std::vector<uint8_t> ring_connected;  // per depth: W_k - Inv connected
};

// Recomputes one-sided cores inside shrinking blocks W_k = dilate(Inv,k) & N
// for k = 1..depth. When the backward core of some W_k collapses onto Inv,
// nothing near Inv survives backwards and Inv is an attractor; dually for
// repellers. Connectivity of each W_k - Inv is recorded alongside.
SmallNeighborhoodResult small_neighborhood_test(const MapPair& maps,
                                                const IndexPair& ip,
                                                int depth);

struct TorusShapeReport {
  bool complement_connected = false;
  Verdict verdict = Verdict::Saddle;
  bool proper_nonsaddle = false;  // non-saddle, not attractor or repeller
  BettiProfile profile;           // of nplus | nminus over GF(2)
  bool circle_profile = false;    // profile == (1, 1, 0)
  bool all_hold = false;
};

// Only meaningful on a fully periodic space (throws std::invalid_argument
// otherwise): Inv must not separate the torus, the verdict must be properly
// non-saddle, and the nplus | nminus block must carry circle Betti numbers.
TorusShapeReport torus_shape_check(const IndexPair& ip,
                                   const PhaseSpace& space);

}  // namespace nonsaddle
