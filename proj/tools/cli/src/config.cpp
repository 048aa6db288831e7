#include "degenpde_cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace degenpde::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s, int line, std::string_view key) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError(line, "'" + std::string(key) + "' expects a number, got '" + std::string(s) + "'");
    return x;
}

long long parse_int(std::string_view s, int line, std::string_view key) {
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError(line, "'" + std::string(key) + "' expects an integer, got '" + std::string(s) + "'");
    return x;
}

bool parse_bool(std::string_view s, int line, std::string_view key) {
    if (s == "true" || s == "1" || s == "on") return true;
    if (s == "false" || s == "0" || s == "off") return false;
    throw ConfigError(line, "'" + std::string(key) + "' expects true or false, got '" + std::string(s) + "'");
}

using Setter = std::function<void(RunConfig&, std::string_view, int)>;

std::pair<const std::string, Setter> real(const char* key, double ProblemParams::*field) {
    return {key, [=](RunConfig& c, std::string_view v, int line) { c.problem.*field = parse_double(v, line, key); }};
}

std::pair<const std::string, Setter> solver_real(const char* key, double SolverConfig::*field) {
    return {key, [=](RunConfig& c, std::string_view v, int line) { c.solver.*field = parse_double(v, line, key); }};
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        real("k", &ProblemParams::k),
        real("m", &ProblemParams::m),
        real("p", &ProblemParams::p),
        real("q", &ProblemParams::q),
        real("n", &ProblemParams::n),
        real("n1", &ProblemParams::n1),
        real("l", &ProblemParams::l),
        real("beta", &ProblemParams::beta),
        real("t0", &ProblemParams::t0),
        real("a", &ProblemParams::a),
        {"epsilon", [](RunConfig& c, std::string_view v, int line) {
             c.problem.epsilon = static_cast<int>(parse_int(v, line, "epsilon"));
         }},
        {"N", [](RunConfig& c, std::string_view v, int line) {
             c.problem.N = static_cast<int>(parse_int(v, line, "N"));
         }},
        {"source", [](RunConfig& c, std::string_view v, int line) { c.problem.source = parse_bool(v, line, "source"); }},
        solver_real("dt", &SolverConfig::dt),
        solver_real("t_end", &SolverConfig::t_end),
        solver_real("picard_tol", &SolverConfig::picard_tol),
        solver_real("support_threshold", &SolverConfig::support_threshold),
        solver_real("blowup_cap", &SolverConfig::blowup_cap),
        solver_real("R", &SolverConfig::R),
        solver_real("rho", &SolverConfig::rho),
        {"picard_max", [](RunConfig& c, std::string_view v, int line) {
             c.solver.picard_max = static_cast<int>(parse_int(v, line, "picard_max"));
         }},
        {"M", [](RunConfig& c, std::string_view v, int line) {
             c.solver.M = static_cast<int>(parse_int(v, line, "M"));
         }},
        {"snapshot_times", [](RunConfig& c, std::string_view v, int line) {
             c.solver.snapshot_times.clear();
             while (!v.empty()) {
                 const auto comma = v.find(',');
                 const std::string_view item = trim(v.substr(0, comma));
                 if (!item.empty()) c.solver.snapshot_times.push_back(parse_double(item, line, "snapshot_times"));
                 if (comma == std::string_view::npos) break;
                 v.remove_prefix(comma + 1);
             }
         }},
        {"linearization", [](RunConfig& c, std::string_view v, int line) {
             if (v == "picard") c.solver.linearization = Linearization::picard;
             else if (v == "gradient_newton") c.solver.linearization = Linearization::gradient_newton;
             else throw ConfigError(line, "'linearization' expects picard or gradient_newton");
         }},
        {"seed", [](RunConfig& c, std::string_view v, int line) {
             const long long s = parse_int(v, line, "seed");
             if (s < 0) throw ConfigError(line, "'seed' must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
        {"comparison_rho", [](RunConfig& c, std::string_view v, int line) {
             c.comparison_rho = parse_double(v, line, "comparison_rho");
         }},
        {"lemma_trials", [](RunConfig& c, std::string_view v, int line) {
             c.lemma_trials = static_cast<int>(parse_int(v, line, "lemma_trials"));
         }},
        {"permissive", [](RunConfig& c, std::string_view v, int line) {
             c.validation.permissive = parse_bool(v, line, "permissive");
         }},
        {"log_branch", [](RunConfig& c, std::string_view v, int line) {
             c.validation.log_branch = parse_bool(v, line, "log_branch");
         }},
    };
    return table;
}

}  // namespace

const char* to_string(Command c) {
    switch (c) {
        case Command::analyze: return "analyze";
        case Command::profile: return "profile";
        case Command::solve: return "solve";
        case Command::verify: return "verify";
    }
    return "?";
}

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "missing key");
        if (value.empty()) throw ConfigError(line_no, "missing value for '" + std::string(key) + "'");

        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(line_no, "unknown key '" + std::string(key) + "'");
        if (!seen.emplace(key).second) throw ConfigError(line_no, "duplicate key '" + std::string(key) + "'");
        it->second(cfg, value, line_no);
    }

    for (const char* required : {"k", "m", "p"})
        if (!seen.count(required)) throw ConfigError(0, std::string("missing required key '") + required + "'");
    if (!seen.count("t_end")) cfg.solver.t_end = cfg.problem.t0 + 1.0;

    if (const auto bad = validate(cfg.problem, cfg.validation); !bad.empty()) {
        std::string msg = "parameter constraints violated:";
        for (const Violation& v : bad) msg += " " + v.field + " (" + v.bound + ");";
        throw ConfigError(0, msg);
    }
    if (const auto bad = validate(cfg.solver); !bad.empty()) {
        std::string msg = "solver settings violated:";
        for (const std::string& v : bad) msg += " " + v + ";";
        throw ConfigError(0, msg);
    }
    if (cfg.solver.t_end < cfg.problem.t0) throw ConfigError(0, "t_end must not precede t0");
    if (!(cfg.comparison_rho >= 0.0 && cfg.comparison_rho <= 1.0))
        throw ConfigError(0, "comparison_rho must lie in [0, 1]");
    if (cfg.lemma_trials < 1) throw ConfigError(0, "lemma_trials must be at least 1");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace degenpde::cli
