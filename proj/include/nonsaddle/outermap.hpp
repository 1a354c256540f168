#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nonsaddle/flowfield.hpp"
#include "nonsaddle/grid.hpp"

namespace nonsaddle {

// Combinatorial multivalued map on grid cells (CSR, sorted unique targets).
// The extra id n_cells() is the "outside" sink: samples that leave a
// non-periodic window, escape, or whose dilation spills off the grid land
// there. Every cell has a nonempty image by construction.
struct OuterMap {
    GridShape shape;
    double tau = 0;
    int direction = +1;
    std::vector<int64_t> offsets; // n_cells + 1
    std::vector<int32_t> targets;

    int64_t n_cells() const { return shape.n_cells(); }
    int32_t sink() const { return static_cast<int32_t>(shape.n_cells()); }

    std::pair<const int32_t*, const int32_t*> image(int64_t c) const {
        return {targets.data() + offsets[static_cast<size_t>(c)],
                targets.data() + offsets[static_cast<size_t>(c) + 1]};
    }
    bool maps_to(int64_t c, int32_t t) const;
};

// Forward/backward enclosure pair. build_map_pair keeps it transpose-closed:
// fwd = raw(+tau) merged with transpose(raw(-tau)) and bwd = transpose(fwd),
// so "c' in fwd(c) iff c in bwd(c')" is a structural identity. Pruning
// routines below rely on that adjointness.
struct MapPair {
    OuterMap fwd;
    OuterMap bwd;
};

// tau policy: 5 * cell diameter / median sampled speed, the median taken
// over the block's cell centers (whole grid if block is null/empty), clamped
// to [0.01, 1.0]. Catalogue-aware callers (analyze_block, continuation
// sweeps) prefer a positive descriptor default_tau over this formula.
double tau_policy(const CubicalGrid& grid, const FlowSpec& spec,
                  const CellSet* block = nullptr);

// Integrates samples_per_axis^2 corner-inclusive lattice points per cell for
// time tau (step <= 0 picks tau/50 clamped to [1e-3, 0.02]) and dilates the
// hit cells by a Chebyshev radius of `inflate`.
OuterMap build_outer_map(const CubicalGrid& grid, const FlowSpec& spec,
                         double tau, int samples_per_axis = 3, int inflate = 1,
                         double step = 0);

OuterMap transpose(const OuterMap& m);
OuterMap merge(const OuterMap& a, const OuterMap& b);

MapPair build_map_pair(const CubicalGrid& grid, const FlowSpec& spec,
                       double tau, int samples_per_axis = 3, int inflate = 1,
                       double step = 0);

// Largest S inside N with every cell keeping a forward and a backward image
// cell in S; equivalently the cells lying on bi-infinite cell chains in N.
// Precondition: bwd == transpose(fwd).
CellSet invariant_part(const OuterMap& fwd, const OuterMap& bwd,
                       const CellSet& N);

// One-sided variant: cells admitting an infinite chain under `step_map`
// inside N. With the forward map this is the combinatorial N+, with the
// backward map N-. Precondition: adjoint == transpose(step_map).
CellSet one_sided_core(const OuterMap& step_map, const OuterMap& adjoint,
                       const CellSet& N);

bool is_isolating(const OuterMap& fwd, const OuterMap& bwd, const CellSet& N);

struct NotIsolatingError : std::runtime_error {
    CellSet offending; // invariant-part cells sitting on the boundary of N
    NotIsolatingError(std::string msg, CellSet cells)
        : std::runtime_error(std::move(msg)), offending(std::move(cells)) {}
};

struct IndexPair {
    CellSet N;
    CellSet inv;      // invariant part
    CellSet nplus;    // forward-viable cells
    CellSet nminus;   // backward-viable cells
    CellSet exit;     // boundary cells with no forward future in N
    CellSet entrance; // boundary cells with no backward past in N
    double tau = 0;
};

// Throws NotIsolatingError when the invariant part touches the boundary of
// N. Guarantees: nplus & nminus == inv, exit | entrance covers boundary(N),
// exit & nplus == entrance & nminus == empty.
IndexPair index_pair(const OuterMap& fwd, const OuterMap& bwd,
                     const CellSet& N);

enum class Verdict { Attractor, Repeller, NonSaddle, Saddle };
const char* to_string(Verdict v);

// attractor iff exit is empty, repeller iff entrance is empty; otherwise
// non-saddle iff nplus | nminus covers the 1-dilation of inv within N.
Verdict nonsaddle_test(const IndexPair& ip);

// True iff for every V in the shrinking family some tail (forward or
// backward) of the probe orbit eventually stays in V: the sampled orbit's
// last time outside V lies before 0.9 * T_max on at least one side.
bool strong_influence_probe(const FlowSpec& spec, const CubicalGrid& grid,
                            Vec2 probe, const std::vector<CellSet>& shrinking,
                            double T_max, double step = 0.05);

CellSet recipe_cells(const CubicalGrid& grid, const BlockRecipe& recipe);

// One default block analysis of a catalogue flow: the descriptor's block on
// an n x n grid over the default window, catalogue tau (or the policy when
// the catalogue leaves it at 0), transpose-closed maps, index pair.
struct BlockAnalysis {
    FlowSpec spec;
    CubicalGrid grid;
    CellSet block;
    double tau = 0;
    MapPair maps;
    IndexPair ip;
};

BlockAnalysis analyze_block(const std::string& id, int resolution,
                            const std::map<std::string, double>& params = {},
                            bool reversed = false);

} // namespace nonsaddle
