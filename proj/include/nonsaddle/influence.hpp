#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nonsaddle/outermap.hpp"

namespace nonsaddle {

// Where a point sits relative to the invariant set K: attracted only,
// repelled only, both (homoclinic), inside K's cell hull, or neither.
enum class PointClass : uint8_t { AStar, RStar, Homoclinic, InK, Outside };
const char* to_string(PointClass c);

struct InfluenceOptions {
    double t_max = 200.0;
    double step = 0.05;
    // "tail within tol of K" halo: dilate(K, 3) is about two cell diameters
    int ktol_radius = 3;
    // continuous time inside the halo that counts as having arrived
    double dwell_time = 20.0;
    // rest-point detector: displacement over the trailing window below
    // settle_factor * cell diameter means the orbit has stopped moving
    double settle_window = 2.0;
    double settle_factor = 0.02;
    // per non-periodic axis, how many window widths an orbit may stray
    // before it is declared escaped (escapes that return are not escapes)
    double escape_factor = 4.0;
    int threads = 1;
    uint64_t seed = 0x636f6e6c6579ULL;
    // dissonant cells per class whose witnesses get the sampled J+/- check
    int confirm_cap = 8;
    double confirm_horizon = 60.0;
    int n_perturb = 64;
    double perturb_delta = 0.0; // 0 = one cell diameter
};

// Does the orbit of x, run in the given direction (+1 forward, -1 backward),
// end up inside the halo around K? Detects early arrival (dwell), early
// divergence (escape, rest point elsewhere) and falls back to requiring the
// whole post-burn-in tail inside the halo at the horizon. All decisions
// depend only on the visited positions, so reversing the field and flipping
// the direction gives bitwise identical answers.
bool tail_in_k(const FlowSpec& spec, const CubicalGrid& grid,
               const CellSet& k_halo, Vec2 x, int direction,
               const InfluenceOptions& opt = {});

PointClass classify_point(const FlowSpec& spec, const CubicalGrid& grid,
                          const CellSet& k, Vec2 x,
                          const InfluenceOptions& opt = {});

// Per-cell record backing the partition verdicts: the center sample, its two
// tail outcomes and the tally of the five sample classes (center + corners).
struct CellWitness {
    float x = 0, y = 0;
    uint8_t fwd_in = 0, bwd_in = 0;
    uint8_t n_astar = 0, n_rstar = 0, n_hom = 0, n_out = 0;
};

struct InfluencePartition {
    CellSet a_star, r_star, h_minus_k, k_cells, outside;
    std::vector<CellWitness> witnesses; // indexed by cell id

    CellSet influence() const {
        return (a_star | r_star) | (h_minus_k | k_cells);
    }
};

// Classifies every grid cell by five samples (center plus the four corners,
// shared corners classified once). A cell listed in k is K regardless of
// samples; any Outside sample makes the cell Outside; otherwise an AStar or
// RStar sample decides unless both appear (then Outside, the cell straddles
// the divide); cells whose samples are all homoclinic form H(K)-K.
InfluencePartition influence_partition(const FlowSpec& spec,
                                       const CubicalGrid& grid,
                                       const CellSet& k,
                                       const InfluenceOptions& opt = {});

// Monte-Carlo under-approximation of the prolongational limit set J+ (or J-
// for direction -1): late-orbit samples over n_perturb starts within delta
// of x, deduplicated per grid cell. The unperturbed start is always
// included, so rest points contain themselves.
std::vector<Vec2> prolongational_limit(const FlowSpec& spec,
                                       const CubicalGrid& grid, Vec2 x,
                                       int direction, double delta,
                                       int n_perturb, double t_max,
                                       uint64_t seed = 0);

struct DissonanceReport {
    CellSet positively, negatively, externally;
    int64_t euler_k = 0, euler_i = 0;
    // does the Euler characteristic drop K -> I(K) predict dissonance, and
    // does that prediction match the adjacency detector
    bool euler_verdict = false;
    bool agreement = false;
    // sampled J+/- confirmation on capped witnesses, logged not enforced
    int confirm_attempted = 0;
    int confirm_agreed = 0;

    bool any() const {
        return !positively.empty() || !negatively.empty() ||
               !externally.empty();
    }
};

// Dissonant cells are the non-homoclinic, non-K cells touching H(K)-K
// (8-adjacency), split by which class they carry. Euler characteristics of
// K and of the I(K) cell hull feed the prediction cross-check.
DissonanceReport dissonance_report(const FlowSpec& spec,
                                   const CubicalGrid& grid, const CellSet& k,
                                   const InfluencePartition& part,
                                   const InfluenceOptions& opt = {});

// Externally dissonant points force positively and negatively dissonant
// ones; on a compact space the converse holds too.
bool three_types_check(const DissonanceReport& report, bool compact_space);

// Newton refinement of rest points seeded at local speed minima over the
// region's cell centers. Returns deduplicated roots with |velocity| <= tol
// whose cells lie in the region.
std::vector<Vec2> fixed_points(const FlowSpec& spec, const CubicalGrid& grid,
                               const CellSet& region, int newton_iters = 60,
                               double tol = 1e-10);

enum class GlobalInfluence { GlobalAttractor, GlobalRepeller, HypothesisNotMet };
const char* to_string(GlobalInfluence v);

// Planar criterion: when I(K) covers the whole window the block verdict must
// be attractor or repeller (anything else throws, the dichotomy is a
// theorem); a nonempty outside leaves the hypothesis unmet.
GlobalInfluence planar_global_influence_check(const InfluencePartition& part,
                                              Verdict block_verdict);

struct ComplementStructure {
    CellSet l;   // invariant hull of the cells outside I(K)
    CellSet l_s; // components carrying externally dissonant cells
    CellSet l_n; // the remaining (non-saddle) components
    int n_components = 0;
};

ComplementStructure complement_structure(const MapPair& maps,
                                         const InfluencePartition& part,
                                         const DissonanceReport& diss);

struct ParallelizabilityReport {
    int checked_components = 0; // dissonance-free components of I(K)-K
    int exempt_components = 0;  // components carrying dissonant cells
    int witnesses = 0;
    bool all_single_crossing = true;
};

// Components of I(K)-K without dissonant cells are parallelizable with a
// block boundary component as section: every witness orbit crosses each
// boundary component inside its own region component exactly once and the
// others not at all.
ParallelizabilityReport parallelizability_check(
    const FlowSpec& spec, const CubicalGrid& grid, const CellSet& block,
    const InfluencePartition& part, const DissonanceReport& diss,
    const InfluenceOptions& opt = {});

struct InfluenceAnalysis {
    BlockAnalysis block;
    InfluencePartition partition;
    DissonanceReport dissonance;
};

// Block analysis plus the influence partition and dissonance report for K =
// the block's invariant-part approximation.
InfluenceAnalysis influence_analysis(const std::string& id, int resolution,
                                     const std::map<std::string, double>& params = {},
                                     bool reversed = false,
                                     const InfluenceOptions& opt = {});

} // namespace nonsaddle
