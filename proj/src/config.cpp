#include "khlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

namespace khlab {

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::dispersion, "dispersion"}, {Command::map, "map"},
    {Command::modes, "modes"},           {Command::pressure, "pressure"},
    {Command::evolve, "evolve"},         {Command::functionals, "functionals"},
    {Command::illposedness, "illposedness"}, {Command::verify, "verify"},
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void malformed(const std::string& key, std::string_view value, const char* expected) {
    throw ConfigError(exit_code::usage,
                      "config: key '" + key + "' has malformed value '" + std::string(value) + "' (" + expected + ")");
}

[[noreturn]] void invalid(const std::string& key, const char* rule) {
    throw ConfigError(exit_code::usage, "config: key '" + key + "' " + rule);
}

double parse_double(const std::string& key, std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) malformed(key, v, "real number");
    return out;
}

int parse_int(const std::string& key, std::string_view v) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) malformed(key, v, "integer");
    return out;
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = v.find(',', start);
        out.push_back(trim(v.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_bool(const std::string& key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    malformed(key, v, "true or false");
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"command",
         [](RunConfig& c, const std::string& key, std::string_view v) {
             for (const auto& [cmd, name] : kCommands) {
                 if (name == v) {
                     c.command = cmd;
                     return;
                 }
             }
             malformed(key, v, "one of dispersion, map, modes, pressure, evolve, functionals, illposedness, verify");
         }},
        {"a", [](RunConfig& c, const std::string& key, std::string_view v) { c.params.a = parse_double(key, v); }},
        {"b", [](RunConfig& c, const std::string& key, std::string_view v) { c.params.b = parse_double(key, v); }},
        {"n1", [](RunConfig& c, const std::string& key, std::string_view v) { c.params.n1 = parse_double(key, v); }},
        {"n2", [](RunConfig& c, const std::string& key, std::string_view v) { c.params.n2 = parse_double(key, v); }},
        {"m_i", [](RunConfig& c, const std::string& key, std::string_view v) { c.params.m_i = parse_double(key, v); }},
        {"k",
         [](RunConfig& c, const std::string& key, std::string_view v) {
             const auto parts = split_list(v);
             if (parts.size() != 2) malformed(key, v, "k1,k2");
             c.k = WaveVector{parse_int(key, parts[0]), parse_int(key, parts[1])};
         }},
        {"n_tan", [](RunConfig& c, const std::string& key, std::string_view v) { c.grid.n_tan = parse_int(key, v); }},
        {"n_ver", [](RunConfig& c, const std::string& key, std::string_view v) { c.grid.n_ver = parse_int(key, v); }},
        {"t", [](RunConfig& c, const std::string& key, std::string_view v) { c.t = parse_double(key, v); }},
        {"dt", [](RunConfig& c, const std::string& key, std::string_view v) { c.dt = parse_double(key, v); }},
        {"stepper",
         [](RunConfig& c, const std::string& key, std::string_view v) {
             if (v == "exact") c.stepper = Stepper::Kind::exact;
             else if (v == "rk4") c.stepper = Stepper::Kind::rk4;
             else malformed(key, v, "exact or rk4");
         }},
        {"n", [](RunConfig& c, const std::string& key, std::string_view v) { c.n_cutoff = parse_int(key, v); }},
        {"n_cutoff",
         [](RunConfig& c, const std::string& key, std::string_view v) { c.n_cutoff = parse_int(key, v); }},
        {"scale", [](RunConfig& c, const std::string& key, std::string_view v) { c.scale = parse_double(key, v); }},
        {"mus",
         [](RunConfig& c, const std::string& key, std::string_view v) {
             c.mus.clear();
             for (auto part : split_list(v)) c.mus.push_back(parse_double(key, part));
         }},
        {"steps", [](RunConfig& c, const std::string& key, std::string_view v) { c.steps = parse_int(key, v); }},
        {"samples", [](RunConfig& c, const std::string& key, std::string_view v) { c.samples = parse_int(key, v); }},
        {"refinements",
         [](RunConfig& c, const std::string& key, std::string_view v) { c.refinements = parse_int(key, v); }},
        {"a_min", [](RunConfig& c, const std::string& key, std::string_view v) { c.a_min = parse_double(key, v); }},
        {"a_max", [](RunConfig& c, const std::string& key, std::string_view v) { c.a_max = parse_double(key, v); }},
        {"b_min", [](RunConfig& c, const std::string& key, std::string_view v) { c.b_min = parse_double(key, v); }},
        {"b_max", [](RunConfig& c, const std::string& key, std::string_view v) { c.b_max = parse_double(key, v); }},
        {"map_points",
         [](RunConfig& c, const std::string& key, std::string_view v) { c.map_points = parse_int(key, v); }},
        {"assert",
         [](RunConfig& c, const std::string& key, std::string_view v) { c.assert_checks = parse_bool(key, v); }},
        {"output", [](RunConfig& c, const std::string&, std::string_view v) { c.output = std::string(v); }},
        {"format",
         [](RunConfig& c, const std::string& key, std::string_view v) {
             if (v == "csv") c.format = OutputFormat::csv;
             else if (v == "json") c.format = OutputFormat::json;
             else malformed(key, v, "csv or json");
         }},
    };
    return table;
}

void apply(RunConfig& c, std::string_view key, std::string_view value, bool& has_command) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(exit_code::unknown_key, "config: unknown key '" + std::string(key) + "'");
    if (value.empty()) malformed(it->first, value, "non-empty value");
    it->second(c, it->first, value);
    if (key == "command") has_command = true;
}

void validate(const RunConfig& c) {
    if (c.params.n1 <= 0.0) invalid("n1", "must be positive");
    if (c.params.n2 <= 0.0) invalid("n2", "must be positive");
    if (c.params.m_i <= 0.0) invalid("m_i", "must be positive");
    if (c.params.a < 0.0) invalid("a", "must be non-negative");
    if (c.params.b < 0.0) invalid("b", "must be non-negative");
    if (c.grid.n_tan < 8) invalid("n_tan", "must be at least 8");
    if (c.grid.n_ver < 8) invalid("n_ver", "must be at least 8");
    if (c.t < 0.0) invalid("t", "must be non-negative");
    if (c.dt && !(*c.dt > 0.0)) invalid("dt", "must be positive");
    if (c.n_cutoff < 1) invalid("n", "must be at least 1");
    if (c.scale <= 0.0) invalid("scale", "must be positive");
    if (c.mus.empty()) invalid("mus", "must list at least one exponent");
    if (c.steps < 1) invalid("steps", "must be at least 1");
    if (c.samples < 1) invalid("samples", "must be at least 1");
    if (c.refinements < 2) invalid("refinements", "must be at least 2");
    if (c.map_points < 1) invalid("map_points", "must be at least 1");
    if (c.a_min < 0.0 || c.a_max < c.a_min) invalid("a_min", "and a_max must satisfy 0 <= a_min <= a_max");
    if (c.b_min < 0.0 || c.b_max < c.b_min) invalid("b_min", "and b_max must satisfy 0 <= b_min <= b_max");
    if (c.k && c.k->is_zero()) invalid("k", "must be a nonzero wave vector");
    const bool needs_k = c.command == Command::dispersion || c.command == Command::modes ||
                         c.command == Command::pressure || c.command == Command::verify;
    if (needs_k && !c.k) {
        throw ConfigError(exit_code::missing_key,
                          "config: command '" + std::string(to_string(c.command)) + "' requires key 'k'");
    }
}

}  // namespace

std::string_view to_string(Command c) {
    for (const auto& [cmd, name] : kCommands) {
        if (cmd == c) return name;
    }
    return "unknown";
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("command", std::string(to_string(command)));
    out.emplace_back("a", format_double(params.a));
    out.emplace_back("b", format_double(params.b));
    out.emplace_back("n1", format_double(params.n1));
    out.emplace_back("n2", format_double(params.n2));
    out.emplace_back("m_i", format_double(params.m_i));
    if (k) out.emplace_back("k", std::to_string(k->k1) + "," + std::to_string(k->k2));
    out.emplace_back("n_tan", std::to_string(grid.n_tan));
    out.emplace_back("n_ver", std::to_string(grid.n_ver));
    out.emplace_back("t", format_double(t));
    if (dt) out.emplace_back("dt", format_double(*dt));
    out.emplace_back("stepper", stepper == Stepper::Kind::exact ? "exact" : "rk4");
    out.emplace_back("n", std::to_string(n_cutoff));
    out.emplace_back("scale", format_double(scale));
    std::string mu_list;
    for (double mu : mus) mu_list += (mu_list.empty() ? "" : ",") + format_double(mu);
    out.emplace_back("mus", mu_list);
    out.emplace_back("steps", std::to_string(steps));
    out.emplace_back("samples", std::to_string(samples));
    out.emplace_back("refinements", std::to_string(refinements));
    out.emplace_back("a_min", format_double(a_min));
    out.emplace_back("a_max", format_double(a_max));
    out.emplace_back("b_min", format_double(b_min));
    out.emplace_back("b_max", format_double(b_max));
    out.emplace_back("map_points", std::to_string(map_points));
    out.emplace_back("assert", assert_checks ? "true" : "false");
    return out;
}

Stepper RunConfig::make_stepper(double rate) const {
    if (stepper == Stepper::Kind::exact) return Stepper::exact();
    if (dt) return Stepper::rk4(*dt);
    const double auto_dt = rate > 0.0 ? std::min(0.01, kRk4StabilityLimit / (2.0 * rate)) : 0.01;
    return Stepper::rk4(auto_dt);
}

RunConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
    RunConfig c;
    bool has_command = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(exit_code::usage,
                              "config: line " + std::to_string(line_no) + " is not of the form key = value");
        }
        apply(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), has_command);
    }

    for (std::size_t i = 0; i < overrides.size(); ++i) {
        std::string_view flag = overrides[i];
        if (!flag.starts_with("--")) {
            throw ConfigError(exit_code::usage, "config: expected --key, got '" + std::string(flag) + "'");
        }
        flag.remove_prefix(2);
        std::string_view key = flag, value;
        if (const auto eq = flag.find('='); eq != std::string_view::npos) {
            key = flag.substr(0, eq);
            value = flag.substr(eq + 1);
        } else {
            if (!setters().contains(key)) {
                throw ConfigError(exit_code::unknown_key, "config: unknown key '" + std::string(key) + "'");
            }
            if (i + 1 >= overrides.size()) {
                throw ConfigError(exit_code::usage, "config: flag --" + std::string(key) + " needs a value");
            }
            value = overrides[++i];
        }
        apply(c, key, trim(value), has_command);
    }

    if (!has_command) throw ConfigError(exit_code::missing_key, "config: key 'command' is required");
    validate(c);
    return c;
}

}  // namespace khlab
