#include "nonsaddle/flowfield.hpp"

#include <algorithm>
#include <cmath>

namespace nonsaddle {

namespace {

inline double sq(double v) { return v * v; }

// smoothstep ramp, clamped outside [0,1]
inline double smoothstep01(double u) {
    if (u <= 0) return 0;
    if (u >= 1) return 1;
    return u * u * (3 - 2 * u);
}

// Planar fields written without dividing by r: radial rate g = rdot/r is a
// polynomial in r for every catalogue entry that needs it, so the origin is
// evaluated exactly.
inline Vec2 polar_field(Vec2 p, double g, double theta_dot) {
    return {p.x * g - p.y * theta_dot, p.y * g + p.x * theta_dot};
}

constexpr double kPi = 3.14159265358979323846;

} // namespace

Vec2 FlowSpec::velocity(Vec2 p) const {
    p = space.wrap(p);
    Vec2 v{0, 0};
    switch (fid) {
    case FieldId::PlanarCycle: {
        // rdot = sigma r (1 - r^2), thetadot = 1
        const double r2 = p.x * p.x + p.y * p.y;
        v = polar_field(p, p0 * (1 - r2), 1.0);
        break;
    }
    case FieldId::AnnulusNonsaddle: {
        // rdot = -r (1-r)(r-2): attracting ring r=1, repelling ring r=2
        const double r = std::hypot(p.x, p.y);
        v = polar_field(p, -(1 - r) * (r - 2), 1.0);
        break;
    }
    case FieldId::Mendelson: {
        // rdot = r (1 - r), thetadot = sin^2(theta/2); the ray theta = 0 is
        // invariant and (1,0) attracts every orbit except the origin
        const double r = std::hypot(p.x, p.y);
        if (r < 1e-15) return {0, 0};
        // sin^2(theta/2) = (1 - cos theta)/2 with cos theta = x/r
        const double tdot = 0.5 * (1 - p.x / r);
        v = polar_field(p, 1 - r, tdot);
        break;
    }
    case FieldId::ProductCircle: {
        // coordinates (theta, s) on the unit torus; the circle s = 0 is
        // globally homoclinic
        v = {1.0, sq(std::sin(kPi * p.y))};
        break;
    }
    case FieldId::SaddleNodeTorus: {
        // xdot = psi(x)(x^2 + y^2 - 1/4), ydot = 0; psi kills the field on
        // the seam circle x = +-1, the circle x^2+y^2 = 1/4 is a curve of
        // rest points tangent to the rows y = +-1/2
        const double ax = std::fabs(p.x);
        const double psi = ax <= 0.5 ? 1.0 : smoothstep01((1 - ax) / 0.5);
        v = {psi * (p.x * p.x + p.y * p.y - 0.25), 0.0};
        break;
    }
    case FieldId::TorusHomoclinic: {
        // xdot >= 0, zero exactly on the seam circle x = +-1 and at
        // p = (0, 1/2); every other orbit runs from the seam back to itself
        const double a = sq(std::sin(kPi * (p.x + 1) / 2));
        const double b = sq(std::sin(kPi * p.x / 2)) +
                         sq(std::sin(kPi * (p.y - 0.5) / 2));
        v = {a * b, 0.0};
        break;
    }
    case FieldId::PlanarSaddle:
        v = {p.x, -p.y};
        break;
    case FieldId::RobustFamily: {
        // rdot = -r ((r^2-1)^2 - lambda): for lambda in (0, 1/4] an
        // attracting ring at r^2 = 1+sqrt(lambda) and a repelling one at
        // r^2 = 1-sqrt(lambda); lambda = 0 collapses them onto r = 1;
        // lambda < 0 leaves no invariant set near r = 1
        const double r2 = p.x * p.x + p.y * p.y;
        v = polar_field(p, -(sq(r2 - 1) - p0), 1.0);
        break;
    }
    case FieldId::LinearNode:
        v = {p0 * p.x, p0 * p.y};
        break;
    }
    return reversed ? -v : v;
}

const std::vector<FieldDescriptor>& catalogue() {
    static const std::vector<FieldDescriptor> cat = [] {
        std::vector<FieldDescriptor> c;
        PhaseSpace plane2{{-2, -2}, {2, 2}, {false, false}};
        PhaseSpace torus11{{-1, -1}, {1, 1}, {true, true}};

        c.push_back({"planar_cycle",
                     {{"sigma", 1.0}},
                     plane2,
                     {BlockRecipe::Annulus, 0, 0, 0.5, 1.5},
                     0.0,
                     "unit circle limit cycle, sign of sigma picks attracting "
                     "or repelling",
                     "origin (and the invariant unit circle as a periodic "
                     "orbit)",
                     {{0, 0}}});

        c.push_back({"annulus_nonsaddle",
                     {},
                     PhaseSpace{{-3.2, -3.2}, {3.2, 3.2}, {false, false}},
                     {BlockRecipe::Annulus, 0, 0, 0.5, 2.5},
                     // radial speed at the inner boundary r=0.5 is ~0.375, so
                     // the policy step would move those cells under two cell
                     // widths and let backward chains stall on the boundary
                     0.5,
                     "invariant annulus 1 <= r <= 2; r=1 attracts from "
                     "inside, r=2 repels outward, so the annulus is "
                     "non-saddle but neither attractor nor repeller",
                     "origin; every point of the rings r=1 and r=2 is "
                     "periodic, not at rest",
                     {{0, 0}}});

        c.push_back({"mendelson",
                     {},
                     plane2,
                     {BlockRecipe::Disk, 1, 0, 0.25, 0},
                     // angular speed dies quadratically along the circle, so
                     // cells near the block rim creep ~ tau theta^2/4 per
                     // step; tau=8 pushes that past the two-cell chain slack
                     // out to theta ~ 0.15 at 128^2, well inside the 0.25
                     // arc, where the policy tau stalls at every resolution
                     8.0,
                     "unstable attractor at (1,0): attracts the punctured "
                     "plane yet orbits leave every small neighborhood along "
                     "the unit circle",
                     "origin and (1,0)",
                     {{0, 0}, {1, 0}}});

        c.push_back({"product_circle",
                     {},
                     PhaseSpace{{0, 0}, {1, 1}, {true, true}},
                     {BlockRecipe::Band, 1, 0, 0.2, 0},
                     0.0,
                     "torus flow with the circle s=0 globally homoclinic: "
                     "every orbit leaves it and returns to it",
                     "none (the invariant circle carries rotation)",
                     {}});

        // both torus bands use halfwidth 0.2: horizontal speed grows like
        // the square of the distance from the seam, and 0.2 keeps the edge
        // columns fast enough to clear two cell widths per step on the
        // slowest rows even at fine resolutions
        c.push_back({"saddle_node_torus",
                     {},
                     torus11,
                     {BlockRecipe::Band, 0, 1, 0.2, 0},
                     0.0,
                     "seam circle x=+-1 of rest points plus a circle of rest "
                     "points x^2+y^2=1/4 tangent to the rows y=+-1/2; the "
                     "seam circle is non-saddle with two externally "
                     "dissonant tangency points",
                     "seam circle x=+-1 and the circle x^2+y^2=1/4",
                     {{1, 0.3}, {-1, -0.7}, {0, 0.5}, {0, -0.5}, {0.3, 0.4}}});

        c.push_back({"torus_homoclinic",
                     {},
                     torus11,
                     {BlockRecipe::Band, 0, 1, 0.2, 0},
                     0.0,
                     "seam circle x=+-1 of rest points with one interior "
                     "rest point p=(0,1/2); all other orbits are homoclinic "
                     "to the seam, and p is the only externally dissonant "
                     "point",
                     "seam circle x=+-1 and p=(0,0.5)",
                     {{1, 0.2}, {-1, -0.9}, {0, 0.5}}});

        c.push_back({"planar_saddle",
                     {},
                     PhaseSpace{{-1.5, -1.5}, {1.5, 1.5}, {false, false}},
                     {BlockRecipe::Box, -1, -1, 1, 1},
                     0.0,
                     "linear saddle xdot=x, ydot=-y; the origin is isolated "
                     "but neither attractor, repeller nor non-saddle",
                     "origin",
                     {{0, 0}}});

        c.push_back({"robust_family",
                     {{"lambda", 0.0}},
                     plane2,
                     {BlockRecipe::Annulus, 0, 0, 0.6, 1.4},
                     // breakdown detection at lambda < 0 needs the slowest
                     // radial drift (|lambda| near r=1) to clear the full
                     // sampling + dilation slack in one step; the policy
                     // formula would undershoot
                     1.0,
                     "parametrized ring family: non-saddle invariant set "
                     "near r=1 for lambda in [0, 1/4], nothing for "
                     "lambda < 0",
                     "origin",
                     {{0, 0}}});

        c.push_back({"linear_node",
                     {{"sigma", -1.0}},
                     PhaseSpace{{-1.5, -1.5}, {1.5, 1.5}, {false, false}},
                     {BlockRecipe::Disk, 0, 0, 0.5, 0},
                     0.0,
                     "linear node xdot=sigma x, ydot=sigma y; global sink "
                     "for sigma<0 (influence region is the whole plane)",
                     "origin",
                     {{0, 0}}});
        return c;
    }();
    return cat;
}

const FieldDescriptor& descriptor(const std::string& id) {
    for (const auto& d : catalogue())
        if (d.id == id) return d;
    throw ConfigError("unknown flow id: " + id);
}

FlowSpec make_flow(const std::string& id,
                   const std::map<std::string, double>& overrides,
                   std::optional<PhaseSpace> space) {
    const FieldDescriptor& d = descriptor(id);
    FlowSpec s;
    s.id = d.id;
    s.space = space ? *space : d.space;
    for (const auto& ps : d.params) s.params[ps.name] = ps.value;
    for (const auto& [k, v] : overrides) {
        auto it = s.params.find(k);
        if (it == s.params.end())
            throw ConfigError("flow " + id + " has no parameter '" + k + "'");
        it->second = v;
    }
    if (!s.params.empty()) s.p0 = s.params.begin()->second;

    if (id == "planar_cycle") s.fid = FieldId::PlanarCycle;
    else if (id == "annulus_nonsaddle") s.fid = FieldId::AnnulusNonsaddle;
    else if (id == "mendelson") s.fid = FieldId::Mendelson;
    else if (id == "product_circle") s.fid = FieldId::ProductCircle;
    else if (id == "saddle_node_torus") s.fid = FieldId::SaddleNodeTorus;
    else if (id == "torus_homoclinic") s.fid = FieldId::TorusHomoclinic;
    else if (id == "planar_saddle") s.fid = FieldId::PlanarSaddle;
    else if (id == "robust_family") s.fid = FieldId::RobustFamily;
    else s.fid = FieldId::LinearNode;
    return s;
}

FlowOutcome flow_map(const FlowSpec& spec, Vec2 p, double tau, double step,
                     double escape_factor) {
    FlowOutcome out;
    if (tau == 0) {
        out.p = spec.space.wrap(p);
        return out;
    }
    const auto f = [&spec](Vec2 q) { return spec.velocity(q); };
    const long n = std::max(1L, std::lround(std::ceil(std::fabs(tau) / step - 1e-12)));
    const double h = tau / static_cast<double>(n);
    const Vec2 center = 0.5 * (spec.space.lo + spec.space.hi);
    const double esc = escape_factor * spec.space.diameter();
    const bool bounded = !spec.space.periodic[0] || !spec.space.periodic[1];
    for (long i = 0; i < n; ++i) {
        p = rk4_step(f, p, h);
        if (bounded && (p - center).norm() > esc) {
            out.escaped = true;
            out.exit_time = std::fabs(h) * static_cast<double>(i + 1);
            out.p = p;
            return out;
        }
    }
    out.p = spec.space.wrap(p);
    return out;
}

Trajectory sample_trajectory(const FlowSpec& spec, Vec2 p, double horizon,
                             double step, double stride) {
    Trajectory tr;
    const auto f = [&spec](Vec2 q) { return spec.velocity(q); };
    const double dir = horizon < 0 ? -1.0 : 1.0;
    const long n = std::max(1L, std::lround(std::ceil(std::fabs(horizon) / step)));
    const double h = dir * std::fabs(horizon) / static_cast<double>(n);
    const long keep = std::max(1L, std::lround(stride / std::fabs(h)));
    const Vec2 center = 0.5 * (spec.space.lo + spec.space.hi);
    const double esc = 4.0 * spec.space.diameter();
    const bool bounded = !spec.space.periodic[0] || !spec.space.periodic[1];
    tr.samples.push_back({0.0, spec.space.wrap(p)});
    for (long i = 0; i < n; ++i) {
        p = rk4_step(f, p, h);
        if (bounded && (p - center).norm() > esc) {
            tr.escaped = true;
            return tr;
        }
        if ((i + 1) % keep == 0 || i + 1 == n)
            tr.samples.push_back({h * static_cast<double>(i + 1), spec.space.wrap(p)});
    }
    return tr;
}

std::vector<Vec2> omega_limit(const FlowSpec& spec, Vec2 p, double horizon,
                              double burn_in, int direction,
                              double cluster_radius, double step) {
    Trajectory tr = sample_trajectory(spec, p, direction >= 0 ? horizon : -horizon,
                                      step, std::max(step, 0.02));
    if (tr.escaped) return {};
    std::vector<Vec2> pts;
    for (const auto& s : tr.samples) {
        if (std::fabs(s.t) < burn_in) continue;
        bool fresh = true;
        for (const auto& q : pts)
            if (spec.space.distance(s.p, q) < cluster_radius) {
                fresh = false;
                break;
            }
        if (fresh) pts.push_back(s.p);
    }
    return pts;
}

} // namespace nonsaddle
