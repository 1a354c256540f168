#include "nonsaddle/outermap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nonsaddle/parallel.hpp"

namespace nonsaddle {

bool OuterMap::maps_to(int64_t c, int32_t t) const {
    auto [b, e] = image(c);
    return std::binary_search(b, e, t);
}

double tau_policy(const CubicalGrid& grid, const FlowSpec& spec,
                  const CellSet* block) {
    std::vector<double> speeds;
    if (block && !block->empty()) {
        speeds.reserve(static_cast<size_t>(block->count()));
        block->for_each([&](int64_t c) {
            speeds.push_back(spec.velocity(grid.center(c)).norm());
        });
    } else {
        speeds.reserve(static_cast<size_t>(grid.shape.n_cells()));
        for (int64_t c = 0; c < grid.shape.n_cells(); ++c)
            speeds.push_back(spec.velocity(grid.center(c)).norm());
    }
    const size_t mid = speeds.size() / 2;
    std::nth_element(speeds.begin(), speeds.begin() + static_cast<long>(mid),
                     speeds.end());
    const double med = speeds[mid];
    if (med < 1e-12) return 1.0;
    return std::clamp(5.0 * grid.cell_diameter() / med, 0.01, 1.0);
}

OuterMap build_outer_map(const CubicalGrid& grid, const FlowSpec& spec,
                         double tau, int samples_per_axis, int inflate,
                         double step) {
    const int64_t n = grid.shape.n_cells();
    const int32_t sink = static_cast<int32_t>(n);
    if (step <= 0) step = std::clamp(std::fabs(tau) / 50.0, 1e-3, 0.02);
    const int spa = std::max(1, samples_per_axis);

    std::vector<std::vector<int32_t>> rows(static_cast<size_t>(n));
    parallel_for(n, [&](int64_t b, int64_t e) {
        std::vector<int32_t> tmp;
        for (int64_t c = b; c < e; ++c) {
            const auto [ci, cj] = grid.shape.coords(c);
            const Vec2 base = grid.corner(ci, cj);
            tmp.clear();
            for (int si = 0; si < spa; ++si)
                for (int sj = 0; sj < spa; ++sj) {
                    Vec2 q = base;
                    if (spa == 1) {
                        q.x += grid.dx() / 2;
                        q.y += grid.dy() / 2;
                    } else {
                        q.x += grid.dx() * si / (spa - 1);
                        q.y += grid.dy() * sj / (spa - 1);
                    }
                    const FlowOutcome o = flow_map(spec, q, tau, step);
                    int32_t t = sink;
                    if (!o.escaped)
                        if (auto id = grid.cell_of(o.p))
                            t = static_cast<int32_t>(*id);
                    if (t == sink) {
                        tmp.push_back(sink);
                        continue;
                    }
                    for (int di = -inflate; di <= inflate; ++di)
                        for (int dj = -inflate; dj <= inflate; ++dj) {
                            const int64_t nb = grid.shape.offset(t, di, dj);
                            tmp.push_back(nb < 0 ? sink
                                                 : static_cast<int32_t>(nb));
                        }
                }
            std::sort(tmp.begin(), tmp.end());
            tmp.erase(std::unique(tmp.begin(), tmp.end()), tmp.end());
            rows[static_cast<size_t>(c)] = tmp;
        }
    });

    OuterMap m;
    m.shape = grid.shape;
    m.tau = tau;
    m.direction = tau < 0 ? -1 : +1;
    m.offsets.resize(static_cast<size_t>(n) + 1, 0);
    for (int64_t c = 0; c < n; ++c)
        m.offsets[static_cast<size_t>(c) + 1] =
            m.offsets[static_cast<size_t>(c)] +
            static_cast<int64_t>(rows[static_cast<size_t>(c)].size());
    m.targets.resize(static_cast<size_t>(m.offsets.back()));
    for (int64_t c = 0; c < n; ++c)
        std::copy(rows[static_cast<size_t>(c)].begin(),
                  rows[static_cast<size_t>(c)].end(),
                  m.targets.begin() + m.offsets[static_cast<size_t>(c)]);
    return m;
}

OuterMap transpose(const OuterMap& m) {
    const int64_t n = m.n_cells();
    const int32_t sink = m.sink();
    OuterMap t;
    t.shape = m.shape;
    t.tau = -m.tau;
    t.direction = -m.direction;
    std::vector<int64_t> cnt(static_cast<size_t>(n) + 1, 0);
    for (int32_t v : m.targets)
        if (v != sink) ++cnt[static_cast<size_t>(v) + 1];
    t.offsets.resize(static_cast<size_t>(n) + 1, 0);
    std::partial_sum(cnt.begin(), cnt.end(), t.offsets.begin());
    t.targets.resize(static_cast<size_t>(t.offsets.back()));
    std::vector<int64_t> cur(t.offsets.begin(), t.offsets.end() - 1);
    for (int64_t c = 0; c < n; ++c) {
        auto [b, e] = m.image(c);
        for (const int32_t* p = b; p != e; ++p)
            if (*p != sink)
                t.targets[static_cast<size_t>(cur[static_cast<size_t>(*p)]++)] =
                    static_cast<int32_t>(c);
    }
    // sources arrive in increasing c, so each row is already sorted
    return t;
}

OuterMap merge(const OuterMap& a, const OuterMap& b) {
    OuterMap m;
    m.shape = a.shape;
    m.tau = a.tau;
    m.direction = a.direction;
    const int64_t n = a.n_cells();
    m.offsets.resize(static_cast<size_t>(n) + 1, 0);
    m.targets.reserve(a.targets.size() + b.targets.size());
    for (int64_t c = 0; c < n; ++c) {
        auto [ab, ae] = a.image(c);
        auto [bb, be] = b.image(c);
        const size_t before = m.targets.size();
        std::set_union(ab, ae, bb, be, std::back_inserter(m.targets));
        m.offsets[static_cast<size_t>(c) + 1] =
            m.offsets[static_cast<size_t>(c)] +
            static_cast<int64_t>(m.targets.size() - before);
    }
    return m;
}

MapPair build_map_pair(const CubicalGrid& grid, const FlowSpec& spec,
                       double tau, int samples_per_axis, int inflate,
                       double step) {
    OuterMap raw_f =
        build_outer_map(grid, spec, tau, samples_per_axis, inflate, step);
    OuterMap raw_b =
        build_outer_map(grid, spec, -tau, samples_per_axis, inflate, step);
    MapPair pair;
    pair.fwd = merge(raw_f, transpose(raw_b));
    pair.fwd.tau = tau;
    pair.fwd.direction = +1;
    pair.bwd = transpose(pair.fwd);
    pair.bwd.tau = -tau;
    pair.bwd.direction = -1;
    return pair;
}

namespace {

// Worklist deletion of cells that lose all images in `alive` under any map
// in `maps` (each paired with its transpose for decrement propagation).
CellSet prune_to_core(const CellSet& N,
                      std::vector<std::pair<const OuterMap*, const OuterMap*>>
                          maps) {
    const GridShape shape = N.shape();
    const int64_t n = shape.n_cells();
    CellSet alive = N;
    const size_t k = maps.size();
    std::vector<std::vector<int32_t>> cnt(k);
    for (auto& v : cnt) v.assign(static_cast<size_t>(n), 0);

    // Counts are taken against the full N first; removals are deferred to
    // the worklist so each dead cell decrements its neighbors exactly once.
    std::vector<int64_t> stack;
    N.for_each([&](int64_t c) {
        for (size_t m = 0; m < k; ++m) {
            auto [b, e] = maps[m].first->image(c);
            int32_t live = 0;
            for (const int32_t* p = b; p != e; ++p)
                if (*p < n && N.test(*p)) ++live;
            cnt[m][static_cast<size_t>(c)] = live;
            if (live == 0) {
                stack.push_back(c);
                break;
            }
        }
    });
    for (int64_t c : stack) alive.reset(c);

    while (!stack.empty()) {
        const int64_t c = stack.back();
        stack.pop_back();
        for (size_t m = 0; m < k; ++m) {
            // removing c starves cells whose m-image contained c; those are
            // exactly the transpose images of c
            auto [b, e] = maps[m].second->image(c);
            for (const int32_t* p = b; p != e; ++p) {
                const int64_t t = *p;
                if (t >= n || !alive.test(t)) continue;
                if (--cnt[m][static_cast<size_t>(t)] == 0) {
                    alive.reset(t);
                    stack.push_back(t);
                }
            }
        }
    }
    return alive;
}

} // namespace

CellSet invariant_part(const OuterMap& fwd, const OuterMap& bwd,
                       const CellSet& N) {
    return prune_to_core(N, {{&fwd, &bwd}, {&bwd, &fwd}});
}

CellSet one_sided_core(const OuterMap& step_map, const OuterMap& adjoint,
                       const CellSet& N) {
    return prune_to_core(N, {{&step_map, &adjoint}});
}

bool is_isolating(const OuterMap& fwd, const OuterMap& bwd, const CellSet& N) {
    const CellSet inv = invariant_part(fwd, bwd, N);
    return !inv.intersects(boundary(N));
}

IndexPair index_pair(const OuterMap& fwd, const OuterMap& bwd,
                     const CellSet& N) {
    IndexPair ip;
    ip.N = N;
    ip.tau = fwd.tau;
    ip.inv = invariant_part(fwd, bwd, N);
    const CellSet bnd = boundary(N);
    if (ip.inv.intersects(bnd))
        throw NotIsolatingError(
            "block is not isolating: invariant part touches its boundary",
            ip.inv & bnd);
    ip.nplus = one_sided_core(fwd, bwd, N);
    ip.nminus = one_sided_core(bwd, fwd, N);
    ip.exit = bnd - ip.nplus;
    ip.entrance = bnd - ip.nminus;
    if (!((ip.nplus & ip.nminus) == ip.inv))
        throw std::logic_error("index_pair: one-sided cores do not meet in "
                               "the invariant part (map pair not adjoint?)");
    if (!bnd.subset_of(ip.exit | ip.entrance))
        throw std::logic_error("index_pair: boundary cell in both cores");
    return ip;
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Attractor: return "attractor";
    case Verdict::Repeller: return "repeller";
    case Verdict::NonSaddle: return "non-saddle";
    case Verdict::Saddle: return "saddle";
    }
    return "?";
}

Verdict nonsaddle_test(const IndexPair& ip) {
    if (ip.exit.empty()) return Verdict::Attractor;
    if (ip.entrance.empty()) return Verdict::Repeller;
    const CellSet hull = dilate(ip.inv, 1) & ip.N;
    if (hull.subset_of(ip.nplus | ip.nminus)) return Verdict::NonSaddle;
    return Verdict::Saddle;
}

bool strong_influence_probe(const FlowSpec& spec, const CubicalGrid& grid,
                            Vec2 probe, const std::vector<CellSet>& shrinking,
                            double T_max, double step) {
    const auto run = [&](double dir) {
        std::vector<int64_t> cells;
        const long n = std::lround(std::ceil(T_max / step));
        cells.reserve(static_cast<size_t>(n) + 1);
        Vec2 p = probe;
        const auto f = [&spec](Vec2 q) { return spec.velocity(q); };
        const Vec2 center = 0.5 * (spec.space.lo + spec.space.hi);
        const double esc = 4.0 * spec.space.diameter();
        const bool bounded =
            !spec.space.periodic[0] || !spec.space.periodic[1];
        auto cell_or_sink = [&](Vec2 q) {
            auto id = grid.cell_of(q);
            return id ? *id : int64_t{-1};
        };
        cells.push_back(cell_or_sink(p));
        for (long i = 0; i < n; ++i) {
            p = rk4_step(f, p, dir * step);
            if (bounded && (p - center).norm() > esc) break;
            cells.push_back(cell_or_sink(spec.space.wrap(p)));
        }
        return cells;
    };
    const std::vector<int64_t> fw = run(+1.0), bw = run(-1.0);
    const double cutoff = 0.9 * T_max;
    const size_t full =
        static_cast<size_t>(std::lround(std::ceil(T_max / step))) + 1;
    for (const CellSet& V : shrinking) {
        auto tail_ok = [&](const std::vector<int64_t>& path) {
            if (path.size() < full) return false; // escaped, no tail in V
            for (size_t i = path.size(); i-- > 0;)
                if (path[i] < 0 || !V.test(path[i]))
                    return static_cast<double>(i) * step <= cutoff;
            return true; // never left V
        };
        if (!tail_ok(fw) && !tail_ok(bw)) return false;
    }
    return true;
}

CellSet recipe_cells(const CubicalGrid& grid, const BlockRecipe& r) {
    switch (r.kind) {
        case BlockRecipe::Annulus:
            return annulus_cells(grid, {r.a, r.b}, r.c, r.d);
        case BlockRecipe::Disk:
            return disk_cells(grid, {r.a, r.b}, r.c);
        case BlockRecipe::Box:
            return box_cells(grid, {r.a, r.b}, {r.c, r.d});
        case BlockRecipe::Band:
            return band_cells(grid, int(r.a), r.b, r.c);
    }
    return CellSet(grid.shape);
}

BlockAnalysis analyze_block(const std::string& id, int resolution,
                            const std::map<std::string, double>& params,
                            bool reversed) {
    const FieldDescriptor& d = descriptor(id);
    BlockAnalysis a;
    a.spec = make_flow(id, params).with_reversed(reversed);
    a.grid = CubicalGrid(a.spec.space, resolution, resolution);
    a.block = recipe_cells(a.grid, d.block);
    a.tau = d.default_tau > 0 ? d.default_tau
                              : tau_policy(a.grid, a.spec, &a.block);
    a.maps = build_map_pair(a.grid, a.spec, a.tau);
    a.ip = index_pair(a.maps.fwd, a.maps.bwd, a.block);
    return a;
}

} // namespace nonsaddle
