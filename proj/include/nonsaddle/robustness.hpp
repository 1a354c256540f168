#pragma once
// Parameter continuation of an invariant set inside a fixed block: sweep one
// family parameter, rebuild the combinatorial machinery per value with the
// same grid, block and time step, and compare dynamical persistence (the
// verdict stays non-saddle) against persistence of the Betti profile of the
// viable sub-block, which stands in for the shape of the invariant set.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonsaddle/cubhom.hpp"
#include "nonsaddle/outermap.hpp"

namespace nonsaddle {

struct LambdaRecord {
    double lambda = 0;
    CellSet inv;
    bool empty = true;      // the invariant part came out empty
    bool isolating = false; // the block still isolates at this value
    Verdict verdict = Verdict::Saddle; // meaningful only when analyzable()
    BettiProfile profile;              // of nplus | nminus, the shape proxy
    bool analyzable() const { return !empty && isolating; }
};

struct ContinuationRun {
    std::string family_id;
    std::string param;
    std::vector<double> lambda_grid;
    PhaseSpace space;
    CellSet n_block; // shared across the whole sweep
    double tau = 0;  // likewise, fixed at the first value's policy
    std::vector<LambdaRecord> records;
    // last healthy value and first broken one in sweep order; equal entries
    // mean the sweep broke at its very first value
    std::optional<std::pair<double, double>> breakdown_bracket;
};

// Sweeps `param` over `lambdas` with everything else frozen. The block must
// isolate at the first value (empty invariant parts count as vacuously
// isolating); later values that lose isolation or come up empty are recorded
// as breakdowns, not errors.
ContinuationRun continue_family(
    const std::string& flow_id, const std::string& param,
    const std::vector<double>& lambdas, int resolution,
    const std::map<std::string, double>& base_params = {});

struct RobustnessVerdict {
    bool dynamically_robust = false;   // every analyzable record non-saddle
    bool topologically_robust = false; // every profile equals the first one
    bool equivalence_holds = false;    // the two flags agree
    // the equivalence theorem needs a cohomologically trivial phase space;
    // on a torus the comparison is reported, never asserted
    bool equivalence_asserted = false;
    int analyzable_count = 0;
};

RobustnessVerdict robustness_verdict(const ContinuationRun& run);

} // namespace nonsaddle
