#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nonsaddle/cubhom.hpp"
#include "nonsaddle/flowfield.hpp"
#include "nonsaddle/influence.hpp"

namespace nonsaddle {

// Minimal INI reader: [section] headers, key = value lines, # or ; comments
// (whole line, or trailing when preceded by whitespace). Section and key
// names are case-sensitive; duplicate keys within a section are rejected so
// typos fail loudly instead of silently winning.
class IniFile {
  public:
    static IniFile parse(const std::string& text,
                         const std::string& origin = "<config>");
    static IniFile load(const std::string& path);

    bool has_section(const std::string& sec) const;
    bool has(const std::string& sec, const std::string& key) const;

    // Getters return the fallback when the key is absent and throw
    // ConfigError naming origin, section and key on malformed values.
    std::string get(const std::string& sec, const std::string& key,
                    const std::string& fallback = "") const;
    double get_double(const std::string& sec, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& sec, const std::string& key,
                int fallback) const;
    bool get_bool(const std::string& sec, const std::string& key,
                  bool fallback) const;
    uint64_t get_u64(const std::string& sec, const std::string& key,
                     uint64_t fallback) const;
    // List-valued keys split on whitespace; absent key = empty list.
    std::vector<std::string> get_words(const std::string& sec,
                                       const std::string& key) const;
    std::vector<double> get_doubles(const std::string& sec,
                                    const std::string& key) const;

    const std::vector<std::string>& section_names() const { return order_; }
    const std::map<std::string, std::string>& section(
        const std::string& sec) const;
    const std::string& origin() const { return origin_; }

  private:
    std::string origin_;
    std::vector<std::string> order_;
    std::map<std::string, std::map<std::string, std::string>> data_;
};

// Pipeline stages a config can request. Classify covers the block, index
// pair, verdict and cohomology ranks; Influence adds the cell partition,
// dissonance, complement and parallelizability work; Robustness runs the
// parameter sweep. Influence implies Classify.
enum class Stage { Classify, Influence, Robustness };
const char* to_string(Stage s);

// One fully resolved pipeline run. Field defaults match the catalogue
// conventions, so `{.flow_id = "planar_cycle"}` is already runnable.
struct AnalysisConfig {
    std::string flow_id;
    std::map<std::string, double> params; // overrides of catalogue defaults
    bool reversed = false;
    std::optional<PhaseSpace> space; // window override, else catalogue window

    int resolution = 128;

    // outer-map knobs; tau = 0 defers to the catalogue tau or the
    // median-speed policy, step = 0 derives from tau
    double tau = 0;
    int samples_per_axis = 3;
    int inflate = 1;
    double integrator_step = 0;

    Coefficients coefficients = Coefficients::Z2;

    InfluenceOptions influence;
    double fixed_point_tol = 1e-10;

    // robustness sweep; values must be nonempty when the stage is requested
    std::string sweep_param;
    std::vector<double> sweep_values;

    std::vector<Stage> stages{Stage::Classify};

    std::string report_path; // empty = stdout
    std::string cells_path;  // empty = no CSV dump
    bool emit_timings = false;
};

// Sections and keys:
//   [flow]        id (required), reversed; every other key overrides the
//                 catalogue parameter of that name
//   [space]       lo, hi (two reals each), periodic (two booleans)
//   [grid]        resolution
//   [map]         tau, samples_per_axis, inflate, step
//   [conley]      coefficients = z2 | z
//   [influence]   t_max, step, ktol_radius, dwell_time, settle_window,
//                 settle_factor, escape_factor, threads, seed, confirm_cap,
//                 confirm_horizon, n_perturb, perturb_delta, fixed_point_tol
//   [robustness]  param, values
//   [run]         stages = classify influence robustness
//   [output]      report, cells, emit_timings
// Unknown sections or keys are errors (except the [flow] parameter names,
// which the catalogue validates). A cells path pulls in the influence stage;
// influence pulls in classify.
AnalysisConfig config_from_ini(const IniFile& ini);

AnalysisConfig parse_config_text(const std::string& text,
                                 const std::string& origin = "<config>");
AnalysisConfig parse_config_file(const std::string& path);

// Serializes a config back to INI text with full float precision;
// parse_config_text of the result reproduces the configuration.
std::string to_ini(const AnalysisConfig& cfg);

bool has_stage(const AnalysisConfig& cfg, Stage s);

} // namespace nonsaddle
