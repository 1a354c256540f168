#include "nonsaddle/report.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace nonsaddle {

namespace {

using nlohmann::json;

const char* coeff_name(Coefficients c) {
    return c == Coefficients::Z2 ? "z2" : "z";
}

json jprofile(const BettiProfile& p) {
    return json::array({p.betti[0], p.betti[1], p.betti[2]});
}

json jspace(const PhaseSpace& sp) {
    return {{"hi", json::array({sp.hi.x, sp.hi.y})},
            {"lo", json::array({sp.lo.x, sp.lo.y})}};
}

json jconfig(const AnalysisConfig& cfg) {
    const InfluenceOptions& io = cfg.influence;
    json stages = json::array();
    for (Stage s : cfg.stages) stages.push_back(to_string(s));
    json space = nullptr;
    if (cfg.space) {
        space = jspace(*cfg.space);
        space["periodic"] =
            json::array({cfg.space->periodic[0], cfg.space->periodic[1]});
    }
    return {
        {"cells_path", cfg.cells_path},
        {"coefficients", coeff_name(cfg.coefficients)},
        {"emit_timings", cfg.emit_timings},
        {"fixed_point_tol", cfg.fixed_point_tol},
        {"flow_id", cfg.flow_id},
        {"inflate", cfg.inflate},
        {"influence",
         {{"confirm_cap", io.confirm_cap},
          {"confirm_horizon", io.confirm_horizon},
          {"dwell_time", io.dwell_time},
          {"escape_factor", io.escape_factor},
          {"ktol_radius", io.ktol_radius},
          {"n_perturb", io.n_perturb},
          {"perturb_delta", io.perturb_delta},
          {"seed", io.seed},
          {"settle_factor", io.settle_factor},
          {"settle_window", io.settle_window},
          {"step", io.step},
          {"t_max", io.t_max},
          {"threads", io.threads}}},
        {"params", json(cfg.params)},
        {"report_path", cfg.report_path},
        {"resolution", cfg.resolution},
        {"reversed", cfg.reversed},
        {"samples_per_axis", cfg.samples_per_axis},
        {"space", space},
        {"stages", stages},
        {"step", cfg.integrator_step},
        {"sweep_param", cfg.sweep_param},
        {"sweep_values", json(cfg.sweep_values)},
        {"tau", cfg.tau},
    };
}

std::string counts3(const char* a, int64_t na, const char* b, int64_t nb,
                    const char* c, int64_t nc) {
    std::ostringstream os;
    os << a << "=" << na << " " << b << "=" << nb << " " << c << "=" << nc;
    return os.str();
}

bool touches_frame(const CellSet& comp, const GridShape& shape) {
    bool hit = false;
    comp.for_each([&](int64_t id) {
        auto [i, j] = shape.coords(id);
        if ((!shape.per0 && (i == 0 || i == shape.n0 - 1)) ||
            (!shape.per1 && (j == 0 || j == shape.n1 - 1)))
            hit = true;
    });
    return hit;
}

} // namespace

AnalysisReport run_analysis(const AnalysisConfig& cfg) {
    AnalysisReport rep;
    rep.config = cfg;

    auto run_stage = [&](Stage st, auto&& body) {
        if (!has_stage(cfg, st)) return;
        auto t0 = std::chrono::steady_clock::now();
        try {
            body();
        } catch (const ConfigError&) {
            throw;
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(to_string(st), e.what());
        }
        std::chrono::duration<double> dt =
            std::chrono::steady_clock::now() - t0;
        rep.timings.push_back({to_string(st), dt.count()});
    };

    run_stage(Stage::Classify, [&] {
        FlowSpec spec = make_flow(cfg.flow_id, cfg.params, cfg.space)
                            .with_reversed(cfg.reversed);
        const FieldDescriptor& d = descriptor(cfg.flow_id);
        CubicalGrid grid(spec.space, cfg.resolution, cfg.resolution);
        CellSet block = recipe_cells(grid, d.block);
        double tau = cfg.tau > 0          ? cfg.tau
                     : d.default_tau > 0 ? d.default_tau
                                         : tau_policy(grid, spec, &block);
        MapPair maps = build_map_pair(grid, spec, tau, cfg.samples_per_axis,
                                      cfg.inflate, cfg.integrator_step);
        IndexPair ip = index_pair(maps.fwd, maps.bwd, block);
        rep.verdict = nonsaddle_test(ip);

        bool disjoint = (ip.nplus & ip.nminus) == ip.inv &&
                        (ip.exit & ip.nplus).empty() &&
                        (ip.entrance & ip.nminus).empty();
        rep.checks.push_back(
            {"index-pair-disjointness", disjoint ? "pass" : "fail",
             counts3("inv", ip.inv.count(), "exit", ip.exit.count(),
                     "entrance", ip.entrance.count())});
        bool covered = boundary(ip.N).subset_of(ip.exit | ip.entrance);
        rep.checks.push_back({"boundary-covered", covered ? "pass" : "fail",
                              "every block boundary cell is an exit or an "
                              "entrance cell"});

        rep.conley = conley_indices(ip, cfg.coefficients);
        rep.conley->block = nullptr;
        rep.certificate = nonsaddle_by_conley(ip, block);
        {
            bool ok = !(*rep.certificate == ConleyCertificate::Certified &&
                        rep.verdict != Verdict::NonSaddle);
            rep.checks.push_back(
                {"certificate-verdict-consistency", ok ? "pass" : "fail",
                 std::string(to_string(*rep.certificate)) + " vs " +
                     to_string(rep.verdict)});
        }
        if (spec.space.periodic[0] && spec.space.periodic[1]) {
            rep.torus_shape = torus_shape_check(ip, spec.space);
            if (rep.torus_shape->proper_nonsaddle)
                rep.checks.push_back(
                    {"torus-circle-cohomology",
                     rep.torus_shape->all_hold ? "pass" : "fail",
                     counts3("b0", rep.torus_shape->profile.betti[0], "b1",
                             rep.torus_shape->profile.betti[1], "b2",
                             rep.torus_shape->profile.betti[2])});
            else
                rep.checks.push_back({"torus-circle-cohomology", "n-a",
                                      "verdict is not a proper non-saddle"});
        } else {
            rep.checks.push_back(
                {"torus-circle-cohomology", "n-a", "window is not a torus"});
        }

        rep.block.emplace(BlockAnalysis{std::move(spec), grid,
                                        std::move(block), tau,
                                        std::move(maps), std::move(ip)});
    });

    run_stage(Stage::Influence, [&] {
        if (!rep.block)
            throw std::logic_error("influence needs the classify stage");
        const BlockAnalysis& ba = *rep.block;
        const InfluenceOptions& opt = cfg.influence;
        rep.partition = influence_partition(ba.spec, ba.grid, ba.ip.inv, opt);
        rep.dissonance =
            dissonance_report(ba.spec, ba.grid, ba.ip.inv, *rep.partition, opt);
        const bool torus =
            ba.spec.space.periodic[0] && ba.spec.space.periodic[1];
        const bool planar =
            !ba.spec.space.periodic[0] && !ba.spec.space.periodic[1];
        rep.three_types = three_types_check(*rep.dissonance, torus);
        rep.complement =
            complement_structure(ba.maps, *rep.partition, *rep.dissonance);
        rep.parallel = parallelizability_check(ba.spec, ba.grid, ba.block,
                                               *rep.partition, *rep.dissonance,
                                               opt);
        rep.equilibria =
            fixed_points(ba.spec, ba.grid, rep.partition->k_cells.complement(),
                         60, cfg.fixed_point_tol);

        const DissonanceReport& dr = *rep.dissonance;
        rep.checks.push_back(
            {"euler-dissonance-agreement", dr.agreement ? "pass" : "fail",
             counts3("euler_k", dr.euler_k, "euler_i", dr.euler_i, "dissonant",
                     dr.positively.count() + dr.negatively.count() +
                         dr.externally.count())});
        rep.checks.push_back(
            {"dissonance-type-implications", rep.three_types ? "pass" : "fail",
             torus ? "compact space, both directions required"
                   : "open space, one direction suffices"});
        {
            bool ok = dr.externally.empty() == rep.complement->l_s.empty();
            rep.checks.push_back(
                {"external-dissonance-marks-saddle-components",
                 ok ? "pass" : "fail",
                 counts3("externally", dr.externally.count(), "l_s",
                         rep.complement->l_s.count(), "l_n",
                         rep.complement->l_n.count())});
        }
        rep.checks.push_back(
            {"dissonance-free-components-parallelizable",
             rep.parallel->all_single_crossing ? "pass" : "fail",
             counts3("checked", rep.parallel->checked_components, "exempt",
                     rep.parallel->exempt_components, "witnesses",
                     rep.parallel->witnesses)});

        if (planar) {
            try {
                rep.global_check =
                    planar_global_influence_check(*rep.partition, rep.verdict);
                rep.checks.push_back({"global-influence-dichotomy", "pass",
                                      to_string(*rep.global_check)});
            } catch (const std::logic_error& e) {
                rep.checks.push_back(
                    {"global-influence-dichotomy", "fail", e.what()});
            }

            std::vector<CellSet> comps =
                components4(rep.partition->k_cells.complement());
            int bounded = 0, satisfied = 0;
            for (const CellSet& comp : comps) {
                if (touches_frame(comp, ba.grid.shape)) continue;
                ++bounded;
                for (const Vec2& r : rep.equilibria) {
                    auto id = ba.grid.cell_of(r);
                    if (id && comp.test(*id)) {
                        ++satisfied;
                        break;
                    }
                }
            }
            rep.checks.push_back(
                {"bounded-complement-equilibria",
                 bounded == satisfied ? "pass" : "fail",
                 counts3("bounded", bounded, "with_root", satisfied, "roots",
                         int64_t(rep.equilibria.size()))});
        } else {
            rep.checks.push_back({"global-influence-dichotomy", "n-a",
                                  "window is not the plane"});
            rep.checks.push_back({"bounded-complement-equilibria", "n-a",
                                  "window is not the plane"});
        }
    });

    run_stage(Stage::Robustness, [&] {
        rep.continuation = continue_family(cfg.flow_id, cfg.sweep_param,
                                           cfg.sweep_values, cfg.resolution,
                                           cfg.params);
        rep.sweep_verdict = robustness_verdict(*rep.continuation);
        const RobustnessVerdict& rv = *rep.sweep_verdict;
        std::ostringstream detail;
        detail << "dynamic=" << (rv.dynamically_robust ? "yes" : "no")
               << " topological=" << (rv.topologically_robust ? "yes" : "no")
               << " analyzable=" << rv.analyzable_count;
        if (rv.equivalence_asserted)
            rep.checks.push_back({"robustness-equivalence",
                                  rv.equivalence_holds ? "pass" : "fail",
                                  detail.str()});
        else
            rep.checks.push_back({"robustness-equivalence", "n-a",
                                  "space is not planar; informational: " +
                                      detail.str()});
    });

    return rep;
}

namespace {

json jreport(const AnalysisReport& rep) {
    json j;
    j["schema_version"] = 1;
    j["config"] = jconfig(rep.config);

    {
        FlowSpec spec =
            make_flow(rep.config.flow_id, rep.config.params, rep.config.space);
        j["flow"] = {{"id", spec.id},
                     {"params", json(spec.params)},
                     {"periodic", json::array({spec.space.periodic[0],
                                               spec.space.periodic[1]})},
                     {"reversed", rep.config.reversed},
                     {"window", jspace(spec.space)}};
    }

    if (rep.block) {
        const IndexPair& ip = rep.block->ip;
        j["block"] = {{"cells", ip.N.count()},
                      {"entrance_cells", ip.entrance.count()},
                      {"exit_cells", ip.exit.count()},
                      {"inv_cells", ip.inv.count()},
                      {"isolating", true},
                      {"nminus_cells", ip.nminus.count()},
                      {"nplus_cells", ip.nplus.count()},
                      {"resolution", rep.config.resolution},
                      {"tau", rep.block->tau}};
        j["verdict"] = to_string(rep.verdict);
    }

    if (rep.conley) {
        json c = {{"certificate", to_string(*rep.certificate)},
                  {"coefficients", coeff_name(rep.conley->ch_plus.coefficients)},
                  {"minus",
                   {{"betti", jprofile(rep.conley->ch_minus)},
                    {"torsion", rep.conley->ch_minus.torsion_present}}},
                  {"plus",
                   {{"betti", jprofile(rep.conley->ch_plus)},
                    {"torsion", rep.conley->ch_plus.torsion_present}}}};
        if (rep.torus_shape) {
            const TorusShapeReport& ts = *rep.torus_shape;
            c["torus_shape"] = {
                {"all_hold", ts.all_hold},
                {"circle_profile", ts.circle_profile},
                {"complement_connected", ts.complement_connected},
                {"profile", jprofile(ts.profile)},
                {"proper_nonsaddle", ts.proper_nonsaddle}};
        }
        j["conley"] = c;
    }

    if (rep.partition) {
        const InfluencePartition& part = *rep.partition;
        json pts = json::array();
        size_t cap = std::min<size_t>(rep.equilibria.size(), 16);
        for (size_t i = 0; i < cap; ++i)
            pts.push_back(
                json::array({rep.equilibria[i].x, rep.equilibria[i].y}));
        json inf = {
            {"counts",
             {{"a_star", part.a_star.count()},
              {"h", part.h_minus_k.count()},
              {"k", part.k_cells.count()},
              {"outside", part.outside.count()},
              {"r_star", part.r_star.count()}}},
            {"equilibria",
             {{"count", int64_t(rep.equilibria.size())}, {"points", pts}}},
            {"three_types", rep.three_types}};
        if (rep.complement)
            inf["complement"] = {{"components", rep.complement->n_components},
                                 {"l_cells", rep.complement->l.count()},
                                 {"l_n_cells", rep.complement->l_n.count()},
                                 {"l_s_cells", rep.complement->l_s.count()}};
        if (rep.parallel)
            inf["parallelizability"] = {
                {"all_single_crossing", rep.parallel->all_single_crossing},
                {"checked", rep.parallel->checked_components},
                {"exempt", rep.parallel->exempt_components},
                {"witnesses", rep.parallel->witnesses}};
        if (rep.global_check)
            inf["global"] = to_string(*rep.global_check);
        j["influence"] = inf;
    }

    if (rep.dissonance) {
        const DissonanceReport& dr = *rep.dissonance;
        j["dissonance"] = {
            {"agreement", dr.agreement},
            {"confirm_agreed", dr.confirm_agreed},
            {"confirm_attempted", dr.confirm_attempted},
            {"euler_i", dr.euler_i},
            {"euler_k", dr.euler_k},
            {"euler_verdict", dr.euler_verdict},
            {"externally_cells", dr.externally.count()},
            {"externally_components",
             int64_t(dr.externally.empty()
                         ? 0
                         : components4(dr.externally).size())},
            {"negatively_cells", dr.negatively.count()},
            {"positively_cells", dr.positively.count()}};
    }

    if (rep.continuation) {
        const ContinuationRun& run = *rep.continuation;
        json records = json::array();
        for (const LambdaRecord& r : run.records) {
            json rec = {{"betti", nullptr},
                        {"empty", r.empty},
                        {"inv_cells", r.inv.count()},
                        {"isolating", r.isolating},
                        {"lambda", r.lambda},
                        {"verdict", nullptr}};
            if (r.analyzable()) {
                rec["betti"] = jprofile(r.profile);
                rec["verdict"] = to_string(r.verdict);
            }
            records.push_back(rec);
        }
        json breakdown = nullptr;
        if (run.breakdown_bracket)
            breakdown = json::array(
                {run.breakdown_bracket->first, run.breakdown_bracket->second});
        const RobustnessVerdict& rv = *rep.sweep_verdict;
        j["robustness"] = {
            {"block_cells", run.n_block.count()},
            {"breakdown", breakdown},
            {"family", run.family_id},
            {"param", run.param},
            {"records", records},
            {"tau", run.tau},
            {"verdict",
             {{"analyzable", rv.analyzable_count},
              {"dynamically_robust", rv.dynamically_robust},
              {"equivalence_asserted", rv.equivalence_asserted},
              {"equivalence_holds", rv.equivalence_holds},
              {"topologically_robust", rv.topologically_robust}}}};
    }

    json checks = json::array();
    for (const CheckRow& row : rep.checks)
        checks.push_back(
            {{"detail", row.detail}, {"name", row.name}, {"status", row.status}});
    j["checks"] = checks;

    if (rep.config.emit_timings) {
        json t = json::array();
        for (const StageTiming& st : rep.timings)
            t.push_back({{"seconds", st.seconds}, {"stage", st.stage}});
        j["timing"] = t;
    }
    return j;
}

} // namespace

std::string render_report(const AnalysisReport& rep) {
    return jreport(rep).dump(2) + "\n";
}

std::string cell_dump_csv(const AnalysisReport& rep) {
    if (!rep.block || !rep.partition || !rep.dissonance)
        throw StageError("dump-cells", "influence stage was not run");
    const InfluencePartition& part = *rep.partition;
    const DissonanceReport& dr = *rep.dissonance;
    const GridShape& shape = rep.block->grid.shape;
    std::ostringstream os;
    os << "i,j,class\n";
    const int64_t n = int64_t(shape.n0) * shape.n1;
    for (int64_t id = 0; id < n; ++id) {
        const char* cls = "OUT";
        if (part.k_cells.test(id))
            cls = "K";
        else if (dr.positively.test(id))
            cls = "DISS_P";
        else if (dr.negatively.test(id))
            cls = "DISS_N";
        else if (dr.externally.test(id))
            cls = "DISS_E";
        else if (part.a_star.test(id))
            cls = "ASTAR";
        else if (part.r_star.test(id))
            cls = "RSTAR";
        else if (part.h_minus_k.test(id))
            cls = "HOM";
        auto [i, j] = shape.coords(id);
        os << i << "," << j << "," << cls << "\n";
    }
    return os.str();
}

std::string write_artifacts(const AnalysisReport& rep) {
    std::string text = render_report(rep);
    if (rep.config.report_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(rep.config.report_path);
        if (!out)
            throw StageError("output",
                             "cannot write " + rep.config.report_path);
        out << text;
    }
    if (!rep.config.cells_path.empty()) {
        std::ofstream out(rep.config.cells_path);
        if (!out)
            throw StageError("output", "cannot write " + rep.config.cells_path);
        out << cell_dump_csv(rep);
    }
    return text;
}

namespace {

bool type_matches(const json& doc, const std::string& t) {
    if (t == "object") return doc.is_object();
    if (t == "array") return doc.is_array();
    if (t == "string") return doc.is_string();
    if (t == "number") return doc.is_number();
    if (t == "integer") return doc.is_number_integer();
    if (t == "boolean") return doc.is_boolean();
    if (t == "null") return doc.is_null();
    return false;
}

std::optional<std::string> check_node(const json& doc, const json& schema,
                                      const std::string& path) {
    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string())
            ok = type_matches(doc, t.get<std::string>());
        else
            for (const json& alt : t)
                ok = ok || type_matches(doc, alt.get<std::string>());
        if (!ok)
            return path + ": expected type " + t.dump() + ", got " +
                   doc.type_name();
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const json& alt : schema["enum"]) ok = ok || alt == doc;
        if (!ok) return path + ": " + doc.dump() + " not in enum";
    }
    if (schema.contains("minimum") && doc.is_number() &&
        doc.get<double>() < schema["minimum"].get<double>())
        return path + ": below minimum";
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const json& key : schema["required"])
                if (!doc.contains(key.get<std::string>()))
                    return path + ": missing required key '" +
                           key.get<std::string>() + "'";
        const json* props =
            schema.contains("properties") ? &schema["properties"] : nullptr;
        for (const auto& [key, val] : doc.items()) {
            if (props && props->contains(key)) {
                if (auto err = check_node(val, (*props)[key],
                                          path + "." + key))
                    return err;
            } else if (schema.contains("additionalProperties")) {
                const json& ap = schema["additionalProperties"];
                if (ap.is_boolean() && !ap.get<bool>())
                    return path + ": unexpected key '" + key + "'";
                if (ap.is_object())
                    if (auto err = check_node(val, ap, path + "." + key))
                        return err;
            }
        }
    }
    if (doc.is_array()) {
        if (schema.contains("minItems") &&
            doc.size() < schema["minItems"].get<size_t>())
            return path + ": too few items";
        if (schema.contains("maxItems") &&
            doc.size() > schema["maxItems"].get<size_t>())
            return path + ": too many items";
        if (schema.contains("items")) {
            size_t i = 0;
            for (const json& el : doc) {
                if (auto err = check_node(el, schema["items"],
                                          path + "[" + std::to_string(i) +
                                              "]"))
                    return err;
                ++i;
            }
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<std::string> validate_report_text(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) return "report is not valid JSON";
    json schema = json::parse(report_schema_text());
    return check_node(doc, schema, "$");
}

std::string report_schema_text() {
    static const char* text = R"SCHEMA({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "flow analysis report",
  "type": "object",
  "additionalProperties": false,
  "required": ["checks", "config", "flow", "schema_version"],
  "properties": {
    "schema_version": {"type": "integer", "minimum": 1},
    "config": {
      "type": "object",
      "additionalProperties": false,
      "required": ["flow_id", "resolution", "stages"],
      "properties": {
        "cells_path": {"type": "string"},
        "coefficients": {"enum": ["z2", "z"]},
        "emit_timings": {"type": "boolean"},
        "fixed_point_tol": {"type": "number"},
        "flow_id": {"type": "string"},
        "inflate": {"type": "integer", "minimum": 0},
        "influence": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "confirm_cap": {"type": "integer"},
            "confirm_horizon": {"type": "number"},
            "dwell_time": {"type": "number"},
            "escape_factor": {"type": "number"},
            "ktol_radius": {"type": "integer"},
            "n_perturb": {"type": "integer"},
            "perturb_delta": {"type": "number"},
            "seed": {"type": "integer"},
            "settle_factor": {"type": "number"},
            "settle_window": {"type": "number"},
            "step": {"type": "number"},
            "t_max": {"type": "number"},
            "threads": {"type": "integer"}
          }
        },
        "params": {"type": "object", "additionalProperties": {"type": "number"}},
        "report_path": {"type": "string"},
        "resolution": {"type": "integer", "minimum": 4},
        "reversed": {"type": "boolean"},
        "samples_per_axis": {"type": "integer", "minimum": 2},
        "space": {
          "type": ["object", "null"],
          "additionalProperties": false,
          "properties": {
            "hi": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
            "lo": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
            "periodic": {"type": "array", "items": {"type": "boolean"}, "minItems": 2, "maxItems": 2}
          }
        },
        "stages": {"type": "array", "items": {"enum": ["classify", "influence", "robustness"]}},
        "step": {"type": "number"},
        "sweep_param": {"type": "string"},
        "sweep_values": {"type": "array", "items": {"type": "number"}},
        "tau": {"type": "number"}
      }
    },
    "flow": {
      "type": "object",
      "additionalProperties": false,
      "required": ["id", "params", "periodic", "reversed", "window"],
      "properties": {
        "id": {"type": "string"},
        "params": {"type": "object", "additionalProperties": {"type": "number"}},
        "periodic": {"type": "array", "items": {"type": "boolean"}, "minItems": 2, "maxItems": 2},
        "reversed": {"type": "boolean"},
        "window": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "hi": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
            "lo": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
          }
        }
      }
    },
    "block": {
      "type": "object",
      "additionalProperties": false,
      "required": ["cells", "inv_cells", "isolating", "tau"],
      "properties": {
        "cells": {"type": "integer"},
        "entrance_cells": {"type": "integer"},
        "exit_cells": {"type": "integer"},
        "inv_cells": {"type": "integer"},
        "isolating": {"type": "boolean"},
        "nminus_cells": {"type": "integer"},
        "nplus_cells": {"type": "integer"},
        "resolution": {"type": "integer"},
        "tau": {"type": "number"}
      }
    },
    "verdict": {"enum": ["attractor", "repeller", "non-saddle", "saddle"]},
    "conley": {
      "type": "object",
      "additionalProperties": false,
      "required": ["certificate", "coefficients", "minus", "plus"],
      "properties": {
        "certificate": {"enum": ["non-saddle-certified", "inconclusive"]},
        "coefficients": {"enum": ["z2", "z"]},
        "minus": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "betti": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
            "torsion": {"type": "boolean"}
          }
        },
        "plus": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "betti": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
            "torsion": {"type": "boolean"}
          }
        },
        "torus_shape": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "all_hold": {"type": "boolean"},
            "circle_profile": {"type": "boolean"},
            "complement_connected": {"type": "boolean"},
            "profile": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
            "proper_nonsaddle": {"type": "boolean"}
          }
        }
      }
    },
    "influence": {
      "type": "object",
      "additionalProperties": false,
      "required": ["counts", "three_types"],
      "properties": {
        "complement": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "components": {"type": "integer"},
            "l_cells": {"type": "integer"},
            "l_n_cells": {"type": "integer"},
            "l_s_cells": {"type": "integer"}
          }
        },
        "counts": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "a_star": {"type": "integer"},
            "h": {"type": "integer"},
            "k": {"type": "integer"},
            "outside": {"type": "integer"},
            "r_star": {"type": "integer"}
          }
        },
        "equilibria": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "count": {"type": "integer"},
            "points": {"type": "array", "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}}
          }
        },
        "global": {"enum": ["global-attractor", "global-repeller", "hypothesis-not-met"]},
        "parallelizability": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "all_single_crossing": {"type": "boolean"},
            "checked": {"type": "integer"},
            "exempt": {"type": "integer"},
            "witnesses": {"type": "integer"}
          }
        },
        "three_types": {"type": "boolean"}
      }
    },
    "dissonance": {
      "type": "object",
      "additionalProperties": false,
      "required": ["agreement", "euler_i", "euler_k", "euler_verdict"],
      "properties": {
        "agreement": {"type": "boolean"},
        "confirm_agreed": {"type": "integer"},
        "confirm_attempted": {"type": "integer"},
        "euler_i": {"type": "integer"},
        "euler_k": {"type": "integer"},
        "euler_verdict": {"type": "boolean"},
        "externally_cells": {"type": "integer"},
        "externally_components": {"type": "integer"},
        "negatively_cells": {"type": "integer"},
        "positively_cells": {"type": "integer"}
      }
    },
    "robustness": {
      "type": "object",
      "additionalProperties": false,
      "required": ["family", "param", "records", "verdict"],
      "properties": {
        "block_cells": {"type": "integer"},
        "breakdown": {"type": ["array", "null"], "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "family": {"type": "string"},
        "param": {"type": "string"},
        "records": {
          "type": "array",
          "items": {
            "type": "object",
            "additionalProperties": false,
            "properties": {
              "betti": {"type": ["array", "null"], "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
              "empty": {"type": "boolean"},
              "inv_cells": {"type": "integer"},
              "isolating": {"type": "boolean"},
              "lambda": {"type": "number"},
              "verdict": {"type": ["string", "null"]}
            }
          }
        },
        "tau": {"type": "number"},
        "verdict": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "analyzable": {"type": "integer"},
            "dynamically_robust": {"type": "boolean"},
            "equivalence_asserted": {"type": "boolean"},
            "equivalence_holds": {"type": "boolean"},
            "topologically_robust": {"type": "boolean"}
          }
        }
      }
    },
    "checks": {
      "type": "array",
      "items": {
        "type": "object",
        "additionalProperties": false,
        "required": ["name", "status"],
        "properties": {
          "detail": {"type": "string"},
          "name": {"type": "string"},
          "status": {"enum": ["pass", "fail", "n-a"]}
        }
      }
    },
    "timing": {
      "type": "array",
      "items": {
        "type": "object",
        "additionalProperties": false,
        "properties": {
          "seconds": {"type": "number"},
          "stage": {"type": "string"}
        }
      }
    }
  }
}
)SCHEMA";
    return text;
}

} // namespace nonsaddle
