#include "nonsaddle/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <climits>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace nonsaddle {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Cuts a trailing comment: # or ; preceded by whitespace (or at column 0).
std::string strip_comment(const std::string& line) {
    for (size_t i = 0; i < line.size(); ++i) {
        if ((line[i] == '#' || line[i] == ';') &&
            (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t'))
            return line.substr(0, i);
    }
    return line;
}

[[noreturn]] void fail(const std::string& origin, int lineno,
                       const std::string& msg) {
    std::ostringstream os;
    os << origin;
    if (lineno > 0) os << ":" << lineno;
    os << ": " << msg;
    throw ConfigError(os.str());
}

[[noreturn]] void fail_key(const std::string& origin, const std::string& sec,
                           const std::string& key, const std::string& msg) {
    throw ConfigError(origin + ": [" + sec + "] " + key + ": " + msg);
}

double parse_double(const std::string& origin, const std::string& sec,
                    const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    const char* b = v.data();
    const char* e = b + v.size();
    double out = 0;
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e)
        fail_key(origin, sec, key, "not a number: '" + v + "'");
    return out;
}

} // namespace

IniFile IniFile::parse(const std::string& text, const std::string& origin) {
    IniFile f;
    f.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string cur;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                fail(origin, lineno, "unterminated section header");
            cur = trim(s.substr(1, s.size() - 2));
            if (cur.empty()) fail(origin, lineno, "empty section name");
            if (!f.data_.count(cur)) {
                f.data_[cur];
                f.order_.push_back(cur);
            }
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            fail(origin, lineno, "expected key = value: '" + s + "'");
        if (cur.empty())
            fail(origin, lineno, "key before any [section]");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) fail(origin, lineno, "empty key");
        auto& sec = f.data_[cur];
        if (sec.count(key))
            fail(origin, lineno, "duplicate key '" + key + "' in [" + cur + "]");
        sec[key] = val;
    }
    return f;
}

IniFile IniFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

bool IniFile::has_section(const std::string& sec) const {
    return data_.count(sec) != 0;
}

bool IniFile::has(const std::string& sec, const std::string& key) const {
    auto it = data_.find(sec);
    return it != data_.end() && it->second.count(key) != 0;
}

const std::map<std::string, std::string>& IniFile::section(
    const std::string& sec) const {
    auto it = data_.find(sec);
    if (it == data_.end())
        throw ConfigError(origin_ + ": no such section [" + sec + "]");
    return it->second;
}

std::string IniFile::get(const std::string& sec, const std::string& key,
                         const std::string& fallback) const {
    auto it = data_.find(sec);
    if (it == data_.end()) return fallback;
    auto kt = it->second.find(key);
    return kt == it->second.end() ? fallback : kt->second;
}

double IniFile::get_double(const std::string& sec, const std::string& key,
                           double fallback) const {
    if (!has(sec, key)) return fallback;
    return parse_double(origin_, sec, key, get(sec, key));
}

int IniFile::get_int(const std::string& sec, const std::string& key,
                     int fallback) const {
    if (!has(sec, key)) return fallback;
    const std::string v = trim(get(sec, key));
    const char* b = v.data();
    const char* e = b + v.size();
    long out = 0;
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e || out < INT_MIN || out > INT_MAX)
        fail_key(origin_, sec, key, "not an integer: '" + v + "'");
    return static_cast<int>(out);
}

bool IniFile::get_bool(const std::string& sec, const std::string& key,
                       bool fallback) const {
    if (!has(sec, key)) return fallback;
    std::string v = trim(get(sec, key));
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    fail_key(origin_, sec, key, "not a boolean: '" + v + "'");
}

uint64_t IniFile::get_u64(const std::string& sec, const std::string& key,
                          uint64_t fallback) const {
    if (!has(sec, key)) return fallback;
    const std::string v = trim(get(sec, key));
    if (v.empty() || v[0] == '-')
        fail_key(origin_, sec, key, "not an unsigned integer: '" + v + "'");
    errno = 0;
    char* end = nullptr;
    unsigned long long out = std::strtoull(v.c_str(), &end, 0);
    if (errno != 0 || end != v.c_str() + v.size())
        fail_key(origin_, sec, key, "not an unsigned integer: '" + v + "'");
    return out;
}

std::vector<std::string> IniFile::get_words(const std::string& sec,
                                            const std::string& key) const {
    std::vector<std::string> out;
    std::istringstream in(get(sec, key));
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::vector<double> IniFile::get_doubles(const std::string& sec,
                                         const std::string& key) const {
    std::vector<double> out;
    for (const std::string& w : get_words(sec, key))
        out.push_back(parse_double(origin_, sec, key, w));
    return out;
}

const char* to_string(Stage s) {
    switch (s) {
    case Stage::Classify: return "classify";
    case Stage::Influence: return "influence";
    case Stage::Robustness: return "robustness";
    }
    return "?";
}

bool has_stage(const AnalysisConfig& cfg, Stage s) {
    return std::find(cfg.stages.begin(), cfg.stages.end(), s) !=
           cfg.stages.end();
}

namespace {

void require_keys(const IniFile& ini, const std::string& sec,
                  std::initializer_list<const char*> allowed) {
    if (!ini.has_section(sec)) return;
    for (const auto& [key, val] : ini.section(sec)) {
        (void)val;
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                return key == a;
            }) == allowed.end())
            fail_key(ini.origin(), sec, key, "unknown key");
    }
}

void check_positive(const IniFile& ini, const std::string& sec,
                    const std::string& key, double v, bool strict) {
    if (strict ? v <= 0 : v < 0)
        fail_key(ini.origin(), sec, key,
                 strict ? "must be positive" : "must be nonnegative");
}

std::vector<double> space_pair(const IniFile& ini, const std::string& key) {
    std::vector<double> v = ini.get_doubles("space", key);
    if (v.size() != 2)
        fail_key(ini.origin(), "space", key, "need exactly two values");
    return v;
}

} // namespace

AnalysisConfig config_from_ini(const IniFile& ini) {
    static const std::set<std::string> known_sections{
        "flow",      "space",      "grid", "map",   "conley",
        "influence", "robustness", "run",  "output"};
    for (const std::string& sec : ini.section_names())
        if (!known_sections.count(sec))
            throw ConfigError(ini.origin() + ": unknown section [" + sec + "]");

    AnalysisConfig cfg;

    cfg.flow_id = ini.get("flow", "id");
    if (cfg.flow_id.empty())
        throw ConfigError(ini.origin() + ": [flow] id is required");
    cfg.reversed = ini.get_bool("flow", "reversed", false);
    if (ini.has_section("flow"))
        for (const auto& [key, val] : ini.section("flow")) {
            if (key == "id" || key == "reversed") continue;
            cfg.params[key] =
                parse_double(ini.origin(), "flow", key, val);
        }
    // resolves the id and rejects parameter names the field does not have
    make_flow(cfg.flow_id, cfg.params);

    if (ini.has_section("space")) {
        require_keys(ini, "space", {"lo", "hi", "periodic"});
        if (!ini.has("space", "lo") || !ini.has("space", "hi"))
            throw ConfigError(ini.origin() + ": [space] needs lo and hi");
        std::vector<double> lo = space_pair(ini, "lo");
        std::vector<double> hi = space_pair(ini, "hi");
        PhaseSpace sp;
        sp.lo = {lo[0], lo[1]};
        sp.hi = {hi[0], hi[1]};
        if (ini.has("space", "periodic")) {
            std::vector<std::string> w = ini.get_words("space", "periodic");
            if (w.size() != 2)
                fail_key(ini.origin(), "space", "periodic",
                         "need exactly two values");
            IniFile tmp = IniFile::parse(
                "[p]\na = " + w[0] + "\nb = " + w[1] + "\n", ini.origin());
            sp.periodic = {tmp.get_bool("p", "a", false),
                           tmp.get_bool("p", "b", false)};
        }
        if (sp.hi.x <= sp.lo.x || sp.hi.y <= sp.lo.y)
            throw ConfigError(ini.origin() + ": [space] hi must exceed lo");
        cfg.space = sp;
    }

    require_keys(ini, "grid", {"resolution"});
    cfg.resolution = ini.get_int("grid", "resolution", cfg.resolution);
    if (cfg.resolution < 4 || cfg.resolution > 8192)
        fail_key(ini.origin(), "grid", "resolution", "must be in [4, 8192]");

    require_keys(ini, "map", {"tau", "samples_per_axis", "inflate", "step"});
    cfg.tau = ini.get_double("map", "tau", cfg.tau);
    check_positive(ini, "map", "tau", cfg.tau, false);
    cfg.samples_per_axis =
        ini.get_int("map", "samples_per_axis", cfg.samples_per_axis);
    if (cfg.samples_per_axis < 2)
        fail_key(ini.origin(), "map", "samples_per_axis", "must be at least 2");
    cfg.inflate = ini.get_int("map", "inflate", cfg.inflate);
    if (cfg.inflate < 0)
        fail_key(ini.origin(), "map", "inflate", "must be nonnegative");
    cfg.integrator_step = ini.get_double("map", "step", cfg.integrator_step);
    check_positive(ini, "map", "step", cfg.integrator_step, false);

    require_keys(ini, "conley", {"coefficients"});
    if (ini.has("conley", "coefficients")) {
        std::string c = ini.get("conley", "coefficients");
        if (c == "z2" || c == "Z2")
            cfg.coefficients = Coefficients::Z2;
        else if (c == "z" || c == "Z")
            cfg.coefficients = Coefficients::Z;
        else
            fail_key(ini.origin(), "conley", "coefficients",
                     "expected z2 or z, got '" + c + "'");
    }

    require_keys(ini, "influence",
                 {"t_max", "step", "ktol_radius", "dwell_time",
                  "settle_window", "settle_factor", "escape_factor", "threads",
                  "seed", "confirm_cap", "confirm_horizon", "n_perturb",
                  "perturb_delta", "fixed_point_tol"});
    InfluenceOptions& io = cfg.influence;
    io.t_max = ini.get_double("influence", "t_max", io.t_max);
    check_positive(ini, "influence", "t_max", io.t_max, true);
    io.step = ini.get_double("influence", "step", io.step);
    check_positive(ini, "influence", "step", io.step, true);
    io.ktol_radius = ini.get_int("influence", "ktol_radius", io.ktol_radius);
    if (io.ktol_radius < 1)
        fail_key(ini.origin(), "influence", "ktol_radius",
                 "must be at least 1");
    io.dwell_time = ini.get_double("influence", "dwell_time", io.dwell_time);
    check_positive(ini, "influence", "dwell_time", io.dwell_time, false);
    io.settle_window =
        ini.get_double("influence", "settle_window", io.settle_window);
    check_positive(ini, "influence", "settle_window", io.settle_window, true);
    io.settle_factor =
        ini.get_double("influence", "settle_factor", io.settle_factor);
    check_positive(ini, "influence", "settle_factor", io.settle_factor, true);
    io.escape_factor =
        ini.get_double("influence", "escape_factor", io.escape_factor);
    check_positive(ini, "influence", "escape_factor", io.escape_factor, true);
    io.threads = ini.get_int("influence", "threads", io.threads);
    if (io.threads < 1)
        fail_key(ini.origin(), "influence", "threads", "must be at least 1");
    io.seed = ini.get_u64("influence", "seed", io.seed);
    io.confirm_cap = ini.get_int("influence", "confirm_cap", io.confirm_cap);
    if (io.confirm_cap < 0)
        fail_key(ini.origin(), "influence", "confirm_cap",
                 "must be nonnegative");
    io.confirm_horizon =
        ini.get_double("influence", "confirm_horizon", io.confirm_horizon);
    check_positive(ini, "influence", "confirm_horizon", io.confirm_horizon,
                   true);
    io.n_perturb = ini.get_int("influence", "n_perturb", io.n_perturb);
    if (io.n_perturb < 1)
        fail_key(ini.origin(), "influence", "n_perturb", "must be at least 1");
    io.perturb_delta =
        ini.get_double("influence", "perturb_delta", io.perturb_delta);
    check_positive(ini, "influence", "perturb_delta", io.perturb_delta, false);
    cfg.fixed_point_tol =
        ini.get_double("influence", "fixed_point_tol", cfg.fixed_point_tol);
    check_positive(ini, "influence", "fixed_point_tol", cfg.fixed_point_tol,
                   true);

    require_keys(ini, "robustness", {"param", "values"});
    cfg.sweep_param = ini.get("robustness", "param");
    cfg.sweep_values = ini.get_doubles("robustness", "values");
    if (cfg.sweep_param.empty() != cfg.sweep_values.empty())
        throw ConfigError(ini.origin() +
                          ": [robustness] needs both param and values");

    require_keys(ini, "run", {"stages"});
    if (ini.has("run", "stages")) {
        cfg.stages.clear();
        for (const std::string& w : ini.get_words("run", "stages")) {
            Stage s;
            if (w == "classify")
                s = Stage::Classify;
            else if (w == "influence")
                s = Stage::Influence;
            else if (w == "robustness")
                s = Stage::Robustness;
            else
                fail_key(ini.origin(), "run", "stages",
                         "unknown stage '" + w + "'");
            if (!has_stage(cfg, s)) cfg.stages.push_back(s);
        }
        if (cfg.stages.empty())
            fail_key(ini.origin(), "run", "stages", "must not be empty");
    }

    require_keys(ini, "output", {"report", "cells", "emit_timings"});
    cfg.report_path = ini.get("output", "report");
    cfg.cells_path = ini.get("output", "cells");
    cfg.emit_timings = ini.get_bool("output", "emit_timings", false);

    // dependency closure: a cell dump needs the partition, the partition
    // needs the block
    if (!cfg.cells_path.empty() && !has_stage(cfg, Stage::Influence))
        cfg.stages.push_back(Stage::Influence);
    if (has_stage(cfg, Stage::Influence) && !has_stage(cfg, Stage::Classify))
        cfg.stages.push_back(Stage::Classify);
    if (has_stage(cfg, Stage::Robustness) && cfg.sweep_values.empty())
        throw ConfigError(ini.origin() +
                          ": robustness stage requested without a "
                          "[robustness] sweep");
    std::sort(cfg.stages.begin(), cfg.stages.end());

    return cfg;
}

AnalysisConfig parse_config_text(const std::string& text,
                                 const std::string& origin) {
    return config_from_ini(IniFile::parse(text, origin));
}

AnalysisConfig parse_config_file(const std::string& path) {
    return config_from_ini(IniFile::load(path));
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

} // namespace

std::string to_ini(const AnalysisConfig& cfg) {
    std::ostringstream os;
    os << "[flow]\nid = " << cfg.flow_id << "\n";
    os << "reversed = " << (cfg.reversed ? "true" : "false") << "\n";
    for (const auto& [k, v] : cfg.params) os << k << " = " << fmt(v) << "\n";
    if (cfg.space) {
        const PhaseSpace& sp = *cfg.space;
        os << "\n[space]\n";
        os << "lo = " << fmt(sp.lo.x) << " " << fmt(sp.lo.y) << "\n";
        os << "hi = " << fmt(sp.hi.x) << " " << fmt(sp.hi.y) << "\n";
        os << "periodic = " << (sp.periodic[0] ? "true" : "false") << " "
           << (sp.periodic[1] ? "true" : "false") << "\n";
    }
    os << "\n[grid]\nresolution = " << cfg.resolution << "\n";
    os << "\n[map]\n";
    os << "tau = " << fmt(cfg.tau) << "\n";
    os << "samples_per_axis = " << cfg.samples_per_axis << "\n";
    os << "inflate = " << cfg.inflate << "\n";
    os << "step = " << fmt(cfg.integrator_step) << "\n";
    os << "\n[conley]\ncoefficients = "
       << (cfg.coefficients == Coefficients::Z2 ? "z2" : "z") << "\n";
    const InfluenceOptions& io = cfg.influence;
    os << "\n[influence]\n";
    os << "t_max = " << fmt(io.t_max) << "\n";
    os << "step = " << fmt(io.step) << "\n";
    os << "ktol_radius = " << io.ktol_radius << "\n";
    os << "dwell_time = " << fmt(io.dwell_time) << "\n";
    os << "settle_window = " << fmt(io.settle_window) << "\n";
    os << "settle_factor = " << fmt(io.settle_factor) << "\n";
    os << "escape_factor = " << fmt(io.escape_factor) << "\n";
    os << "threads = " << io.threads << "\n";
    os << "seed = " << io.seed << "\n";
    os << "confirm_cap = " << io.confirm_cap << "\n";
    os << "confirm_horizon = " << fmt(io.confirm_horizon) << "\n";
    os << "n_perturb = " << io.n_perturb << "\n";
    os << "perturb_delta = " << fmt(io.perturb_delta) << "\n";
    os << "fixed_point_tol = " << fmt(cfg.fixed_point_tol) << "\n";
    if (!cfg.sweep_param.empty()) {
        os << "\n[robustness]\nparam = " << cfg.sweep_param << "\nvalues =";
        for (double v : cfg.sweep_values) os << " " << fmt(v);
        os << "\n";
    }
    os << "\n[run]\nstages =";
    for (Stage s : cfg.stages) os << " " << to_string(s);
    os << "\n";
    os << "\n[output]\n";
    if (!cfg.report_path.empty()) os << "report = " << cfg.report_path << "\n";
    if (!cfg.cells_path.empty()) os << "cells = " << cfg.cells_path << "\n";
    os << "emit_timings = " << (cfg.emit_timings ? "true" : "false") << "\n";
    return os.str();
}

} // namespace nonsaddle
