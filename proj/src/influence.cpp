#include "nonsaddle/influence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <optional>
#include <stdexcept>
#include <thread>

#include "nonsaddle/cubhom.hpp"

namespace nonsaddle {

namespace {

uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_double(uint64_t& state) {
    state = splitmix64(state);
    return double(state >> 11) * 0x1.0p-53;
}

// Chunked worker pool. Bodies write disjoint slots, so scheduling order
// never shows in the results.
template <class F>
void parallel_for(int64_t n, int threads, F&& body) {
    if (threads <= 1 || n < 256) {
        for (int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int64_t> next{0};
    const int64_t chunk = std::max<int64_t>(16, n / (8 * threads));
    auto worker = [&] {
        for (;;) {
            const int64_t lo = next.fetch_add(chunk);
            if (lo >= n) return;
            const int64_t hi = std::min(n, lo + chunk);
            for (int64_t i = lo; i < hi; ++i) body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(size_t(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

PointClass combine_tails(bool fwd_in, bool bwd_in) {
    if (fwd_in && bwd_in) return PointClass::Homoclinic;
    if (fwd_in) return PointClass::AStar;
    if (bwd_in) return PointClass::RStar;
    return PointClass::Outside;
}

} // namespace

const char* to_string(PointClass c) {
    switch (c) {
    case PointClass::AStar: return "a_star";
    case PointClass::RStar: return "r_star";
    case PointClass::Homoclinic: return "homoclinic";
    case PointClass::InK: return "k";
    case PointClass::Outside: return "outside";
    }
    return "?";
}

const char* to_string(GlobalInfluence v) {
    switch (v) {
    case GlobalInfluence::GlobalAttractor: return "global-attractor";
    case GlobalInfluence::GlobalRepeller: return "global-repeller";
    case GlobalInfluence::HypothesisNotMet: return "hypothesis-not-met";
    }
    return "?";
}

bool tail_in_k(const FlowSpec& spec, const CubicalGrid& grid,
               const CellSet& k_halo, Vec2 x, int direction,
               const InfluenceOptions& opt) {
    const PhaseSpace& sp = grid.space;
    const double h = direction >= 0 ? opt.step : -opt.step;
    // integer step bookkeeping keeps every comparison exact, so the
    // reversed-field run reproduces each decision bit for bit
    const int64_t n_steps = llround(opt.t_max / opt.step);
    const int64_t dwell_steps = llround(opt.dwell_time / opt.step);
    const int64_t settle_steps = llround(opt.settle_window / opt.step);
    const int64_t burn_in = n_steps / 2;
    const double settle_eps = opt.settle_factor * grid.cell_diameter();
    const Vec2 mid = (sp.lo + sp.hi) * 0.5;

    auto vel = [&spec](Vec2 q) { return spec.velocity(q); };

    std::vector<Vec2> ring(static_cast<size_t>(settle_steps));
    Vec2 p = sp.wrap(x);
    int64_t streak = -1; // first step of the current run inside the halo

    for (int64_t s = 0;; ++s) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
        const auto cell = grid.cell_of(p);
        const bool inside = cell && k_halo.test(*cell);
        if (inside) {
            if (streak < 0) streak = s;
            if (s - streak >= dwell_steps) return true;
        } else {
            streak = -1;
        }
        if (s == n_steps) return inside && streak <= burn_in;
        if (!sp.periodic[0] &&
            std::abs(p.x - mid.x) > opt.escape_factor * sp.width(0))
            return false;
        if (!sp.periodic[1] &&
            std::abs(p.y - mid.y) > opt.escape_factor * sp.width(1))
            return false;
        // orbit has stopped moving: the verdict is wherever it parked
        if (s >= settle_steps &&
            sp.distance(p, ring[size_t(s % settle_steps)]) < settle_eps)
            return inside;
        ring[size_t(s % settle_steps)] = p;
        p = sp.wrap(rk4_step(vel, p, h));
    }
}

PointClass classify_point(const FlowSpec& spec, const CubicalGrid& grid,
                          const CellSet& k, Vec2 x,
                          const InfluenceOptions& opt) {
    const auto cell = grid.cell_of(x);
    if (cell && k.test(*cell)) return PointClass::InK;
    const CellSet halo = dilate(k, opt.ktol_radius);
    const bool f = tail_in_k(spec, grid, halo, x, +1, opt);
    const bool b = tail_in_k(spec, grid, halo, x, -1, opt);
    return combine_tails(f, b);
}

InfluencePartition influence_partition(const FlowSpec& spec,
                                       const CubicalGrid& grid,
                                       const CellSet& k,
                                       const InfluenceOptions& opt) {
    const GridShape& sh = grid.shape;
    const int64_t n = sh.n_cells();
    const CellSet halo = dilate(k, opt.ktol_radius);

    // periodic axes identify the last corner line with the first
    const int32_t cnx = sh.per0 ? sh.n0 : sh.n0 + 1;
    const int32_t cny = sh.per1 ? sh.n1 : sh.n1 + 1;
    auto corner_index = [cny](int32_t i, int32_t j) {
        return int64_t(i) * cny + j;
    };

    // classify each corner once; corners touching only K cells never vote
    std::vector<uint8_t> corner_used(size_t(cnx) * cny, 0);
    for (int64_t id = 0; id < n; ++id) {
        if (k.test(id)) continue;
        const auto [i, j] = sh.coords(id);
        const int32_t i1 = sh.per0 ? (i + 1) % sh.n0 : i + 1;
        const int32_t j1 = sh.per1 ? (j + 1) % sh.n1 : j + 1;
        corner_used[size_t(corner_index(i, j))] = 1;
        corner_used[size_t(corner_index(i1, j))] = 1;
        corner_used[size_t(corner_index(i, j1))] = 1;
        corner_used[size_t(corner_index(i1, j1))] = 1;
    }

    std::vector<uint8_t> corner_class(size_t(cnx) * cny,
                                      uint8_t(PointClass::Homoclinic));
    parallel_for(int64_t(cnx) * cny, opt.threads, [&](int64_t cid) {
        if (!corner_used[size_t(cid)]) return;
        const int32_t i = int32_t(cid / cny);
        const int32_t j = int32_t(cid % cny);
        const Vec2 p = grid.corner(i, j);
        const bool f = tail_in_k(spec, grid, halo, p, +1, opt);
        const bool b = tail_in_k(spec, grid, halo, p, -1, opt);
        corner_class[size_t(cid)] = uint8_t(combine_tails(f, b));
    });

    InfluencePartition part;
    part.a_star = CellSet(sh);
    part.r_star = CellSet(sh);
    part.h_minus_k = CellSet(sh);
    part.k_cells = CellSet(sh);
    part.outside = CellSet(sh);
    part.witnesses.assign(size_t(n), {});

    std::vector<uint8_t> center_class(size_t(n), uint8_t(PointClass::InK));
    parallel_for(n, opt.threads, [&](int64_t id) {
        const Vec2 c = grid.center(id);
        CellWitness& w = part.witnesses[size_t(id)];
        w.x = float(c.x);
        w.y = float(c.y);
        if (k.test(id)) {
            w.fwd_in = w.bwd_in = 1; // the orbit of a K cell starts home
            return;
        }
        const bool f = tail_in_k(spec, grid, halo, c, +1, opt);
        const bool b = tail_in_k(spec, grid, halo, c, -1, opt);
        w.fwd_in = f;
        w.bwd_in = b;
        center_class[size_t(id)] = uint8_t(combine_tails(f, b));
    });

    for (int64_t id = 0; id < n; ++id) {
        if (k.test(id)) {
            part.k_cells.set(id);
            continue;
        }
        const auto [i, j] = sh.coords(id);
        const int32_t i1 = sh.per0 ? (i + 1) % sh.n0 : i + 1;
        const int32_t j1 = sh.per1 ? (j + 1) % sh.n1 : j + 1;
        const uint8_t votes[5] = {
            center_class[size_t(id)],
            corner_class[size_t(corner_index(i, j))],
            corner_class[size_t(corner_index(i1, j))],
            corner_class[size_t(corner_index(i, j1))],
            corner_class[size_t(corner_index(i1, j1))],
        };
        CellWitness& w = part.witnesses[size_t(id)];
        for (uint8_t v : votes) {
            switch (PointClass(v)) {
            case PointClass::AStar: ++w.n_astar; break;
            case PointClass::RStar: ++w.n_rstar; break;
            case PointClass::Homoclinic: ++w.n_hom; break;
            default: ++w.n_out; break;
            }
        }
        // any sample off the region of influence taints the cell; a mix of
        // purely-attracted and purely-repelled samples means the cell
        // straddles the divide between the two open sides, which meets the
        // complement as well
        if (w.n_out > 0 || (w.n_astar > 0 && w.n_rstar > 0))
            part.outside.set(id);
        else if (w.n_astar > 0)
            part.a_star.set(id);
        else if (w.n_rstar > 0)
            part.r_star.set(id);
        else
            part.h_minus_k.set(id);
    }
    return part;
}

namespace {

// Integrates one start and reports whether any sample past burn-in lands in
// the halo. Used by the sampled prolongational-limit confirmations.
bool late_orbit_hits(const FlowSpec& spec, const CubicalGrid& grid,
                     const CellSet& halo, Vec2 p, int direction,
                     double horizon, double step, double escape_factor) {
    const PhaseSpace& sp = grid.space;
    const double h = direction >= 0 ? step : -step;
    const int64_t n_steps = llround(horizon / step);
    const int64_t burn_in = n_steps / 2;
    const Vec2 mid = (sp.lo + sp.hi) * 0.5;
    auto vel = [&spec](Vec2 q) { return spec.velocity(q); };
    p = sp.wrap(p);
    for (int64_t s = 0; s <= n_steps; ++s) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
        if (s >= burn_in) {
            const auto cell = grid.cell_of(p);
            if (cell && halo.test(*cell)) return true;
        }
        if (!sp.periodic[0] && std::abs(p.x - mid.x) > escape_factor * sp.width(0))
            return false;
        if (!sp.periodic[1] && std::abs(p.y - mid.y) > escape_factor * sp.width(1))
            return false;
        p = sp.wrap(rk4_step(vel, p, h));
    }
    return false;
}

Vec2 disk_offset(double delta, uint64_t& state) {
    const double u = unit_double(state);
    const double a = unit_double(state) * 2.0 * M_PI;
    const double r = delta * std::sqrt(u);
    return {r * std::cos(a), r * std::sin(a)};
}

// mode 0: some perturbed J+ sample reaches the halo. mode 1: same for J-.
// mode 2: one perturbed start must reach it in both time directions (the
// two-sided limit pairs forward and backward tails of the same sequence).
bool prolongational_hits(const FlowSpec& spec, const CubicalGrid& grid,
                         const CellSet& halo, Vec2 x, int mode,
                         const InfluenceOptions& opt, uint64_t seed) {
    const double delta =
        opt.perturb_delta > 0 ? opt.perturb_delta : grid.cell_diameter();
    for (int j = 0; j < opt.n_perturb; ++j) {
        uint64_t state = splitmix64(seed ^ uint64_t(j) * 0xd1342543de82ef95ULL);
        const Vec2 start =
            j == 0 ? x : grid.space.wrap(x + disk_offset(delta, state));
        const bool need_f = mode != 1;
        const bool need_b = mode != 0;
        bool ok = true;
        if (need_f)
            ok = late_orbit_hits(spec, grid, halo, start, +1,
                                 opt.confirm_horizon, opt.step,
                                 opt.escape_factor);
        if (ok && need_b)
            ok = late_orbit_hits(spec, grid, halo, start, -1,
                                 opt.confirm_horizon, opt.step,
                                 opt.escape_factor);
        if (ok) return true;
    }
    return false;
}

} // namespace

std::vector<Vec2> prolongational_limit(const FlowSpec& spec,
                                       const CubicalGrid& grid, Vec2 x,
                                       int direction, double delta,
                                       int n_perturb, double t_max,
                                       uint64_t seed) {
    const PhaseSpace& sp = grid.space;
    const double step = 0.05;
    const double h = direction >= 0 ? step : -step;
    const int64_t n_steps = llround(t_max / step);
    const int64_t burn_in = n_steps / 2;
    const Vec2 mid = (sp.lo + sp.hi) * 0.5;
    auto vel = [&spec](Vec2 q) { return spec.velocity(q); };

    CellSet seen(grid.shape);
    std::vector<Vec2> out;
    for (int j = 0; j < n_perturb; ++j) {
        uint64_t state = splitmix64(seed ^ uint64_t(j) * 0xd1342543de82ef95ULL);
        Vec2 p = j == 0 ? sp.wrap(x) : sp.wrap(x + disk_offset(delta, state));
        for (int64_t s = 0; s <= n_steps; ++s) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) break;
            if (!sp.periodic[0] &&
                std::abs(p.x - mid.x) > 4.0 * sp.width(0))
                break;
            if (!sp.periodic[1] &&
                std::abs(p.y - mid.y) > 4.0 * sp.width(1))
                break;
            if (s >= burn_in) {
                const auto cell = grid.cell_of(p);
                if (cell && !seen.test(*cell)) {
                    seen.set(*cell);
                    out.push_back(p);
                }
            }
            p = sp.wrap(rk4_step(vel, p, h));
        }
    }
    return out;
}

DissonanceReport dissonance_report(const FlowSpec& spec,
                                   const CubicalGrid& grid, const CellSet& k,
                                   const InfluencePartition& part,
                                   const InfluenceOptions& opt) {
    DissonanceReport rep;
    const CellSet fringe = dilate(part.h_minus_k, 1);
    rep.positively = part.r_star & fringe;
    rep.negatively = part.a_star & fringe;
    rep.externally = part.outside & fringe;

    rep.euler_k = euler(betti(grid.shape, k));
    rep.euler_i = euler(betti(grid.shape, part.influence()));
    rep.euler_verdict = rep.euler_k != rep.euler_i;
    rep.agreement = rep.euler_verdict == rep.any();

    // spot-check a few witnesses per class against the sampled J+/- sets;
    // adjacency is the detector of record, this only logs agreement
    const CellSet halo = dilate(k, opt.ktol_radius);
    auto confirm = [&](const CellSet& cells, int mode) {
        int taken = 0;
        cells.for_each([&](int64_t id) {
            if (taken >= opt.confirm_cap) return;
            ++taken;
            ++rep.confirm_attempted;
            const uint64_t seed =
                splitmix64(opt.seed ^ (uint64_t(id) << 2) ^ uint64_t(mode));
            if (prolongational_hits(spec, grid, halo, grid.center(id), mode,
                                    opt, seed))
                ++rep.confirm_agreed;
        });
    };
    confirm(rep.positively, 0);
    confirm(rep.negatively, 1);
    confirm(rep.externally, 2);
    return rep;
}

bool three_types_check(const DissonanceReport& report, bool compact_space) {
    const bool pos = !report.positively.empty();
    const bool neg = !report.negatively.empty();
    const bool ext = !report.externally.empty();
    if (ext && !(pos && neg)) return false;
    if (compact_space && (pos || neg) && !ext) return false;
    return true;
}

namespace {

std::optional<Vec2> newton_root(const FlowSpec& spec, const PhaseSpace& sp,
                                Vec2 x, int iters, double tol) {
    for (int it = 0; it < iters; ++it) {
        const Vec2 v = spec.velocity(x);
        const double vn = v.norm();
        if (vn <= tol) return x;
        const double ex = 1e-6 * (1.0 + std::abs(x.x));
        const double ey = 1e-6 * (1.0 + std::abs(x.y));
        const Vec2 fxp = spec.velocity({x.x + ex, x.y});
        const Vec2 fxm = spec.velocity({x.x - ex, x.y});
        const Vec2 fyp = spec.velocity({x.x, x.y + ey});
        const Vec2 fym = spec.velocity({x.x, x.y - ey});
        const double a = (fxp.x - fxm.x) / (2 * ex);
        const double b = (fyp.x - fym.x) / (2 * ey);
        const double c = (fxp.y - fxm.y) / (2 * ex);
        const double d = (fyp.y - fym.y) / (2 * ey);
        const double det = a * d - b * c;
        const double scale = a * a + b * b + c * c + d * d;
        Vec2 step;
        if (std::abs(det) > 1e-12 * std::max(1.0, scale)) {
            step = {(-d * v.x + b * v.y) / det, (c * v.x - a * v.y) / det};
        } else {
            // singular Jacobian (curves of rest points): damped least squares
            const double mu = 1e-8 + 1e-3 * scale;
            const double g11 = a * a + c * c + mu;
            const double g12 = a * b + c * d;
            const double g22 = b * b + d * d + mu;
            const Vec2 rhs = {-(a * v.x + c * v.y), -(b * v.x + d * v.y)};
            const double gd = g11 * g22 - g12 * g12;
            step = {(g22 * rhs.x - g12 * rhs.y) / gd,
                    (g11 * rhs.y - g12 * rhs.x) / gd};
        }
        if (!std::isfinite(step.x) || !std::isfinite(step.y))
            return std::nullopt;
        double lam = 1.0;
        Vec2 xn = x;
        for (int bt = 0; bt < 30; ++bt) {
            xn = sp.wrap(x + lam * step);
            if (spec.velocity(xn).norm() < vn || lam < 1e-6) break;
            lam *= 0.5;
        }
        x = xn;
    }
    return spec.velocity(x).norm() <= tol ? std::optional<Vec2>(x)
                                          : std::nullopt;
}

} // namespace

std::vector<Vec2> fixed_points(const FlowSpec& spec, const CubicalGrid& grid,
                               const CellSet& region, int newton_iters,
                               double tol) {
    const GridShape& sh = grid.shape;
    std::vector<double> speed2(size_t(sh.n_cells()),
                               std::numeric_limits<double>::infinity());
    region.for_each([&](int64_t id) {
        speed2[size_t(id)] = spec.velocity(grid.center(id)).norm2();
    });

    std::vector<Vec2> roots;
    region.for_each([&](int64_t id) {
        const double s2 = speed2[size_t(id)];
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                if (!di && !dj) continue;
                const int64_t nb = sh.offset(id, di, dj);
                if (nb >= 0 && speed2[size_t(nb)] < s2) return;
            }
        const auto root =
            newton_root(spec, grid.space, grid.center(id), newton_iters, tol);
        if (!root) return;
        const auto cell = grid.cell_of(*root);
        if (!cell || !region.test(*cell)) return;
        for (const Vec2& kept : roots)
            if (grid.space.distance(kept, *root) < 0.5 * grid.cell_diameter())
                return;
        roots.push_back(*root);
    });
    return roots;
}

GlobalInfluence planar_global_influence_check(const InfluencePartition& part,
                                              Verdict block_verdict) {
    if (!part.outside.empty()) return GlobalInfluence::HypothesisNotMet;
    if (block_verdict == Verdict::Attractor)
        return GlobalInfluence::GlobalAttractor;
    if (block_verdict == Verdict::Repeller)
        return GlobalInfluence::GlobalRepeller;
    throw std::logic_error(
        "influence covers the window but the block verdict is neither "
        "attractor nor repeller");
}

ComplementStructure complement_structure(const MapPair& maps,
                                         const InfluencePartition& part,
                                         const DissonanceReport& diss) {
    ComplementStructure cs;
    cs.l = invariant_part(maps.fwd, maps.bwd, part.outside);
    cs.l_s = CellSet(cs.l.shape());
    cs.l_n = CellSet(cs.l.shape());
    for (const CellSet& comp : components4(cs.l)) {
        ++cs.n_components;
        if (comp.intersects(diss.externally))
            cs.l_s |= comp;
        else
            cs.l_n |= comp;
    }
    return cs;
}

ParallelizabilityReport parallelizability_check(
    const FlowSpec& spec, const CubicalGrid& grid, const CellSet& block,
    const InfluencePartition& part, const DissonanceReport& diss,
    const InfluenceOptions& opt) {
    ParallelizabilityReport rep;
    const GridShape& sh = grid.shape;
    const PhaseSpace& sp = grid.space;

    const CellSet region = (part.a_star | part.r_star) | part.h_minus_k;
    const CellSet dissonant =
        (diss.positively | diss.negatively) | diss.externally;
    const auto bcomps = components4(boundary(block));
    if (bcomps.empty()) return rep;

    // nearest boundary component per cell, by multi-source ring growth;
    // crossings are attributed through this label
    std::vector<int32_t> label(size_t(sh.n_cells()), -1);
    std::deque<int64_t> queue;
    for (size_t bi = 0; bi < bcomps.size(); ++bi)
        bcomps[bi].for_each([&](int64_t id) {
            label[size_t(id)] = int32_t(bi);
            queue.push_back(id);
        });
    while (!queue.empty()) {
        const int64_t id = queue.front();
        queue.pop_front();
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                const int64_t nb = sh.offset(id, di, dj);
                if (nb < 0 || label[size_t(nb)] >= 0) continue;
                label[size_t(nb)] = label[size_t(id)];
                queue.push_back(nb);
            }
    }

    auto vel = [&spec](Vec2 q) { return spec.velocity(q); };
    const int64_t n_steps = llround(opt.t_max / opt.step);
    const Vec2 mid = (sp.lo + sp.hi) * 0.5;

    for (const CellSet& comp : components4(region)) {
        if (comp.intersects(dissonant)) {
            ++rep.exempt_components;
            continue;
        }
        ++rep.checked_components;
        const auto ids = comp.ids();
        const size_t stride = std::max<size_t>(1, ids.size() / 24);
        for (size_t w = 0; w < ids.size(); w += stride) {
            ++rep.witnesses;
            std::vector<int> crossings(bcomps.size(), 0);
            for (int dir : {+1, -1}) {
                Vec2 p = grid.center(ids[w]);
                int64_t prev = ids[w];
                bool in_n = block.test(prev);
                const double h = dir > 0 ? opt.step : -opt.step;
                for (int64_t s = 0; s < n_steps; ++s) {
                    p = sp.wrap(rk4_step(vel, p, h));
                    if (!std::isfinite(p.x) || !std::isfinite(p.y)) break;
                    if (!sp.periodic[0] &&
                        std::abs(p.x - mid.x) > opt.escape_factor * sp.width(0))
                        break;
                    if (!sp.periodic[1] &&
                        std::abs(p.y - mid.y) > opt.escape_factor * sp.width(1))
                        break;
                    const auto cell = grid.cell_of(p);
                    const bool now = cell && block.test(*cell);
                    if (now != in_n) {
                        const int64_t side = now ? *cell : prev;
                        const int32_t bi = label[size_t(side)];
                        if (bi >= 0) ++crossings[size_t(bi)];
                        in_n = now;
                    }
                    if (cell) prev = *cell;
                }
            }
            for (size_t bi = 0; bi < bcomps.size(); ++bi) {
                const int expect = bcomps[bi].subset_of(comp) ? 1 : 0;
                if (crossings[bi] != expect) rep.all_single_crossing = false;
            }
        }
    }
    return rep;
}

InfluenceAnalysis influence_analysis(const std::string& id, int resolution,
                                     const std::map<std::string, double>& params,
                                     bool reversed,
                                     const InfluenceOptions& opt) {
    BlockAnalysis block = analyze_block(id, resolution, params, reversed);
    InfluencePartition partition =
        influence_partition(block.spec, block.grid, block.ip.inv, opt);
    DissonanceReport dissonance = dissonance_report(
        block.spec, block.grid, block.ip.inv, partition, opt);
    return {std::move(block), std::move(partition), std::move(dissonance)};
}

} // namespace nonsaddle
