#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonsaddle/config.hpp"
#include "nonsaddle/conley.hpp"
#include "nonsaddle/robustness.hpp"

namespace nonsaddle {

// Pipeline failure wrapper: what() keeps the underlying message, stage names
// the phase that blew up. Config problems stay ConfigError; everything else
// a stage throws surfaces as one of these.
struct StageError : std::runtime_error {
    std::string stage;
    StageError(std::string st, const std::string& msg)
        : std::runtime_error(st + ": " + msg), stage(std::move(st)) {}
};

// One row of the cross-check table. Failures are recorded, never thrown:
// the table is data about the run, not a gate.
struct CheckRow {
    std::string name;
    std::string status; // "pass", "fail" or "n-a"
    std::string detail;
};

struct StageTiming {
    std::string stage;
    double seconds = 0;
};

// Everything a run produced. Stage outputs are optional: absent means the
// stage was not requested. The conley report's block pointer is nulled so
// the struct stays safely movable.
struct AnalysisReport {
    AnalysisConfig config;

    std::optional<BlockAnalysis> block;
    Verdict verdict = Verdict::Saddle;
    std::optional<ConleyIndexReport> conley;
    std::optional<ConleyCertificate> certificate;
    std::optional<TorusShapeReport> torus_shape;

    std::optional<InfluencePartition> partition;
    std::optional<DissonanceReport> dissonance;
    std::optional<ComplementStructure> complement;
    std::optional<ParallelizabilityReport> parallel;
    std::optional<GlobalInfluence> global_check;
    bool three_types = false;
    std::vector<Vec2> equilibria; // roots found outside K's cell hull

    std::optional<ContinuationRun> continuation;
    std::optional<RobustnessVerdict> sweep_verdict;

    std::vector<CheckRow> checks;
    std::vector<StageTiming> timings;
};

// Runs the configured stages in dependency order and assembles the report.
// Config mistakes throw ConfigError; anything failing inside a stage throws
// StageError with the stage name. The robustness sweep always uses the
// catalogue geometry for its fixed block, so [space]/[map] overrides apply
// to the classify and influence stages only.
AnalysisReport run_analysis(const AnalysisConfig& cfg);

// JSON text: stable key order, two-space indent, trailing newline. Identical
// configs render byte-identical text; timings appear only when the config
// asked for them.
std::string render_report(const AnalysisReport& rep);

// CSV dump of the partition, one line per cell in cell-id order after an
// "i,j,class" header. Classes are ASTAR, RSTAR, HOM, K, OUT, with dissonant
// cells refined to DISS_P, DISS_N, DISS_E. Requires the influence stage.
std::string cell_dump_csv(const AnalysisReport& rep);

// The schema shipped as share/report-schema.json. validate_report_text
// checks a rendered report against it (a structural interpreter for the
// subset of JSON Schema the file uses) and returns nullopt on success or a
// path-qualified reason.
std::string report_schema_text();
std::optional<std::string> validate_report_text(const std::string& text);

// Writes the report (and cell dump when configured) to the config's output
// paths; empty report path prints to stdout. Returns the rendered report.
std::string write_artifacts(const AnalysisReport& rep);

} // namespace nonsaddle
