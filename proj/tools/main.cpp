#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nonsaddle/report.hpp"

using namespace nonsaddle;

namespace {

// Flag and option overrides shared by the analysis subcommands. They are
// folded into the parsed config, then the merged config is serialized and
// re-parsed so overrides go through exactly the same validation as file
// input.
struct CommonOpts {
    std::string config_path;
    int resolution = 0;
    bool reversed = false;
    std::string report_path;
    std::string cells_path;
    std::string stages;
    std::vector<std::string> params;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("config", o.config_path, "INI config file")->required();
    cmd->add_option("-r,--resolution", o.resolution,
                    "override the grid resolution");
    cmd->add_flag("--reversed", o.reversed, "analyze the time-reversed field");
    cmd->add_option("-o,--report", o.report_path,
                    "write the JSON report to this path");
    cmd->add_option("--cells", o.cells_path,
                    "write the cell-class CSV to this path");
    cmd->add_option("--stages", o.stages,
                    "comma-separated stages (classify,influence,robustness)");
    cmd->add_option("-p,--param", o.params,
                    "field parameter override name=value (repeatable)");
}

int env_threads() {
    const char* v = std::getenv("NONSADDLE_THREADS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (end == v || *end != '\0' || n < 1 || n > 4096)
        throw ConfigError("NONSADDLE_THREADS: not a positive thread count");
    return static_cast<int>(n);
}

AnalysisConfig build_config(const CommonOpts& o,
                            std::optional<Stage> force = std::nullopt) {
    AnalysisConfig cfg = parse_config_file(o.config_path);
    if (o.resolution > 0) cfg.resolution = o.resolution;
    if (o.reversed) cfg.reversed = true;
    if (!o.report_path.empty()) cfg.report_path = o.report_path;
    if (!o.cells_path.empty()) cfg.cells_path = o.cells_path;
    for (const std::string& p : o.params) {
        size_t eq = p.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--param expects name=value, got '" + p + "'");
        char* end = nullptr;
        const std::string val = p.substr(eq + 1);
        double num = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || *end != '\0')
            throw ConfigError("--param " + p + ": value is not a number");
        cfg.params[p.substr(0, eq)] = num;
    }
    if (!o.stages.empty()) {
        cfg.stages.clear();
        std::string word;
        std::istringstream in(o.stages);
        while (std::getline(in, word, ',')) {
            if (word == "classify")
                cfg.stages.push_back(Stage::Classify);
            else if (word == "influence")
                cfg.stages.push_back(Stage::Influence);
            else if (word == "robustness")
                cfg.stages.push_back(Stage::Robustness);
            else
                throw ConfigError("--stages: unknown stage '" + word + "'");
        }
    }
    if (int t = env_threads(); t > 0) cfg.influence.threads = t;
    if (force && !has_stage(cfg, *force)) cfg.stages.push_back(*force);
    // one round through the serializer re-runs stage closure and validation
    return parse_config_text(to_ini(cfg), o.config_path);
}

void print_catalogue() {
    for (const FieldDescriptor& d : catalogue()) {
        std::cout << d.id;
        for (const ParamSpec& p : d.params)
            std::cout << "  " << p.name << "=" << p.value;
        std::cout << "\n";
        std::cout << "  window [" << d.space.lo.x << ", " << d.space.hi.x
                  << "] x [" << d.space.lo.y << ", " << d.space.hi.y << "]";
        if (d.space.periodic[0] || d.space.periodic[1])
            std::cout << "  periodic " << (d.space.periodic[0] ? "x" : "")
                      << (d.space.periodic[1] ? "y" : "");
        if (d.default_tau > 0)
            std::cout << "  tau " << d.default_tau;
        else
            std::cout << "  tau from speed policy";
        std::cout << "\n  " << d.summary << "\n";
        if (!d.fixed_points_doc.empty())
            std::cout << "  rest points: " << d.fixed_points_doc << "\n";
        std::cout << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"isolating-block analysis of planar and toroidal flows"};
    app.require_subcommand(1);

    CLI::App* list = app.add_subcommand(
        "list-flows", "print the catalogue of shipped vector fields");

    CommonOpts analyze_opts, influence_opts, robustness_opts, dump_opts;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "run the stages configured in the file");
    add_common(analyze, analyze_opts);
    CLI::App* influence = app.add_subcommand(
        "influence", "block analysis plus the cell partition and dissonance");
    add_common(influence, influence_opts);
    CLI::App* robustness = app.add_subcommand(
        "robustness", "parameter sweep in the fixed catalogue block");
    add_common(robustness, robustness_opts);
    CLI::App* dump = app.add_subcommand(
        "dump-cells", "emit the per-cell class CSV for plotting");
    add_common(dump, dump_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) {
            print_catalogue();
            return 0;
        }
        if (analyze->parsed()) {
            write_artifacts(run_analysis(build_config(analyze_opts)));
            return 0;
        }
        if (influence->parsed()) {
            write_artifacts(
                run_analysis(build_config(influence_opts, Stage::Influence)));
            return 0;
        }
        if (robustness->parsed()) {
            write_artifacts(run_analysis(
                build_config(robustness_opts, Stage::Robustness)));
            return 0;
        }
        if (dump->parsed()) {
            AnalysisConfig cfg = build_config(dump_opts, Stage::Influence);
            AnalysisReport rep = run_analysis(cfg);
            std::string csv = cell_dump_csv(rep);
            if (cfg.cells_path.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(cfg.cells_path);
                if (!out)
                    throw StageError("output", "cannot write " + cfg.cells_path);
                out << csv;
            }
            if (!cfg.report_path.empty()) {
                std::ofstream out(cfg.report_path);
                if (!out)
                    throw StageError("output",
                                     "cannot write " + cfg.report_path);
                out << render_report(rep);
            }
            return 0;
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const StageError& e) {
        std::cerr << "stage error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
