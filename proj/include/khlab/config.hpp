#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "khlab/evolution.hpp"
#include "khlab/grid.hpp"
#include "khlab/types.hpp"

namespace khlab {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int usage = 2;  // malformed or invalid value
inline constexpr int numerical = 3;
inline constexpr int unknown_key = 4;
inline constexpr int missing_key = 5;
}  // namespace exit_code

/// Configuration problem carrying the process exit code it maps to.
struct ConfigError : Error {
    ConfigError(int code, const std::string& what) : Error(what), exit_code(code) {}
    int exit_code;
};

enum class Command { dispersion, map, modes, pressure, evolve, functionals, illposedness, verify };
enum class OutputFormat { csv, json };

std::string_view to_string(Command c);

struct RunConfig {
    Command command = Command::dispersion;
    ShearParams params;
    std::optional<WaveVector> k;
    GridShape grid{64, 32};
    double t = 1.0;
    std::optional<double> dt;
    Stepper::Kind stepper = Stepper::Kind::exact;
    int n_cutoff = 4;
    double scale = 1.0;
    std::vector<double> mus{0.0, 1.0, 1.5};
    int steps = 20;
    int samples = 1000;
    int refinements = 3;
    double a_min = 0.0, a_max = 2.0, b_min = 0.0, b_max = 2.0;
    int map_points = 10;
    bool assert_checks = true;
    std::string output = "-";
    std::optional<OutputFormat> format;

    /// Canonical key = value listing of every field, in a fixed order.
    std::vector<std::pair<std::string, std::string>> echo() const;

    /// Stepper for the evolution commands. Without an explicit dt the rk4
    /// step is min(0.01, kRk4StabilityLimit / (2 rate)).
    Stepper make_stepper(double rate) const;
};

/// Parses `key = value` lines (`#` starts a comment) and then applies
/// `--key value` or `--key=value` overrides.
///
/// Throws ConfigError with exit_code::unknown_key, exit_code::usage for a
/// malformed or out-of-range value, exit_code::missing_key when the
/// command or a key it needs is absent.
RunConfig parse_config(std::string_view text, std::span<const std::string> overrides = {});

/// Runs one command. Output goes to config.output (written through a
/// temporary file and renamed into place) or to `out` when it is "-".
/// Returns an exit code and never throws for module errors.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace khlab
