#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonsaddle/geometry.hpp"

namespace nonsaddle {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FieldId {
    PlanarCycle,
    AnnulusNonsaddle,
    Mendelson,
    ProductCircle,
    SaddleNodeTorus,
    TorusHomoclinic,
    PlanarSaddle,
    RobustFamily,
    LinearNode,
};

// A concrete vector field instance: catalogue entry + resolved parameters +
// the phase space it lives on. `reversed` negates the field, which is the
// time-reversed flow. All analyses accept a FlowSpec, so running the dual
// system is a one-flag change.
struct FlowSpec {
    FieldId fid = FieldId::PlanarCycle;
    std::string id;
    std::map<std::string, double> params;
    PhaseSpace space;
    bool reversed = false;

    // hot-path copy of the single tunable parameter (sigma / lambda); fields
    // without parameters ignore it
    double p0 = 0.0;

    Vec2 velocity(Vec2 p) const;

    FlowSpec with_reversed(bool rev) const {
        FlowSpec s = *this;
        s.reversed = rev;
        return s;
    }
};

// Default isolating-block recipe shipped with each catalogue entry.
struct BlockRecipe {
    enum Kind { Annulus, Disk, Box, Band } kind = Disk;
    // Annulus: center (a,b), radii [c,d]. Disk: center (a,b), radius c.
    // Box: corners (a,b)-(c,d). Band: axis a (0 or 1), value b, halfwidth c.
    double a = 0, b = 0, c = 0, d = 0;
};

struct ParamSpec {
    std::string name;
    double value; // default
};

struct FieldDescriptor {
    std::string id;
    std::vector<ParamSpec> params;
    PhaseSpace space;   // default window / torus coordinates
    BlockRecipe block;  // default isolating block
    double default_tau; // 0 = derive from the cell-size/median-speed policy
    std::string summary;
    std::string fixed_points_doc;
    // analytically known rest points, used to sanity-check the field
    std::vector<Vec2> fixed_point_samples;
};

// Stable-ordered catalogue of the shipped fields.
const std::vector<FieldDescriptor>& catalogue();
const FieldDescriptor& descriptor(const std::string& id);

// Builds a FlowSpec from a catalogue id. Unknown id or unknown parameter
// name throws ConfigError. `space` overrides the default window.
FlowSpec make_flow(const std::string& id,
                   const std::map<std::string, double>& overrides = {},
                   std::optional<PhaseSpace> space = std::nullopt);

// One classical RK4 step. Negating the field commutes bitwise with negating
// the step (IEEE signs propagate exactly through +,*,/), which is what makes
// time-reversal comparisons cell-for-cell reproducible downstream.
template <class F>
inline Vec2 rk4_step(F&& f, Vec2 p, double h) {
    const Vec2 k1 = f(p);
    const Vec2 k2 = f(p + (h / 2) * k1);
    const Vec2 k3 = f(p + (h / 2) * k2);
    const Vec2 k4 = f(p + h * k3);
    return p + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct FlowOutcome {
    Vec2 p;               // wrapped end point (meaningful when !escaped)
    bool escaped = false; // left the window beyond the escape radius
    double exit_time = 0; // |time| at which escape was declared
};

// Integrates for signed time tau with fixed step size (n = ceil(|tau|/step)
// equal substeps). Periodic axes integrate on the covering space and wrap at
// the end; on non-periodic windows the orbit is followed until it passes
// escape_factor * window diameter from the window center, then declared
// escaped.
FlowOutcome flow_map(const FlowSpec& spec, Vec2 p, double tau,
                     double step = 1e-3, double escape_factor = 4.0);

struct TrajectorySample {
    double t;
    Vec2 p; // wrapped
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool escaped = false;
};

// Samples the orbit of p at ~stride spacing up to |horizon| (signed for
// direction). Stops early on escape.
Trajectory sample_trajectory(const FlowSpec& spec, Vec2 p, double horizon,
                             double step = 1e-3, double stride = 0.05);

// Late-orbit cluster: integrate in the given direction (+1 forward, -1
// backward), keep samples past burn_in, thin them to cluster_radius
// separation. Empty result means the orbit escaped (no limit set in the
// window).
std::vector<Vec2> omega_limit(const FlowSpec& spec, Vec2 p, double horizon,
                              double burn_in, int direction,
                              double cluster_radius, double step = 1e-3);

} // namespace nonsaddle
