#include "nonsaddle/robustness.hpp"

#include "nonsaddle/flowfield.hpp"

namespace nonsaddle {

ContinuationRun continue_family(const std::string& flow_id,
                                const std::string& param,
                                const std::vector<double>& lambdas,
                                int resolution,
                                const std::map<std::string, double>& base_params) {
    if (lambdas.empty()) throw ConfigError("continuation needs a lambda grid");

    const FieldDescriptor& d = descriptor(flow_id);
    std::map<std::string, double> params = base_params;
    params[param] = lambdas.front();
    FlowSpec spec = make_flow(flow_id, params); // validates the param name

    CubicalGrid grid(d.space, resolution, resolution);
    ContinuationRun run;
    run.family_id = flow_id;
    run.param = param;
    run.lambda_grid = lambdas;
    run.space = d.space;
    run.n_block = recipe_cells(grid, d.block);
    run.tau = d.default_tau > 0 ? d.default_tau
                                : tau_policy(grid, spec, &run.n_block);

    for (size_t i = 0; i < lambdas.size(); ++i) {
        params[param] = lambdas[i];
        spec = make_flow(flow_id, params);
        MapPair maps = build_map_pair(grid, spec, run.tau);

        LambdaRecord rec;
        rec.lambda = lambdas[i];
        rec.inv = invariant_part(maps.fwd, maps.bwd, run.n_block);
        rec.empty = rec.inv.empty();
        rec.isolating = is_isolating(maps.fwd, maps.bwd, run.n_block);
        if (i == 0 && !rec.isolating)
            throw ConfigError("block does not isolate at the first "
                              "parameter value of " + flow_id);
        if (rec.analyzable()) {
            IndexPair ip = index_pair(maps.fwd, maps.bwd, run.n_block);
            rec.verdict = nonsaddle_test(ip);
            rec.profile = betti(grid.shape, ip.nplus | ip.nminus);
        } else if (!run.breakdown_bracket) {
            run.breakdown_bracket = {i ? lambdas[i - 1] : lambdas[i],
                                     lambdas[i]};
        }
        run.records.push_back(std::move(rec));
    }
    return run;
}

RobustnessVerdict robustness_verdict(const ContinuationRun& run) {
    RobustnessVerdict v;
    v.equivalence_asserted =
        !run.space.periodic[0] && !run.space.periodic[1];

    const BettiProfile* reference = nullptr;
    bool dyn = true, topo = true;
    for (const LambdaRecord& rec : run.records) {
        if (!rec.analyzable()) continue;
        ++v.analyzable_count;
        if (!reference) reference = &rec.profile;
        if (rec.verdict == Verdict::Saddle) dyn = false;
        if (!(rec.profile == *reference)) topo = false;
    }
    v.dynamically_robust = v.analyzable_count > 0 && dyn;
    v.topologically_robust = v.analyzable_count > 0 && topo;
    v.equivalence_holds = v.dynamically_robust == v.topologically_robust;
    return v;
}

} // namespace nonsaddle
