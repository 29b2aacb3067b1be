#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "khlab/config.hpp"
#include "khlab/eigenmodes.hpp"
#include "khlab/functionals.hpp"
#include "khlab/pressure.hpp"
#include "khlab/stability.hpp"

namespace khlab {

namespace {

using nlohmann::json;

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Output {
    std::optional<Table> table;
    json report;  // command-specific result object
    bool passed = true;
};

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(double x) const { return format_double(x); }
        std::string operator()(long long x) const { return std::to_string(x); }
        std::string operator()(bool x) const { return x ? "1" : "0"; }
        std::string operator()(const std::string& x) const { return x; }
    };
    return std::visit(Visitor{}, c);
}

json cell_json(const Cell& c) {
    return std::visit([](const auto& x) { return json(x); }, c);
}

json table_json(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const Cell& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    return {{"columns", t.columns}, {"rows", std::move(rows)}};
}

std::string render_csv(const RunConfig& config, const Table& t) {
    std::string out;
    for (const auto& [key, value] : config.echo()) out += "# " + key + " = " + value + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
        out += "\n";
    }
    return out;
}

std::string render_json(const RunConfig& config, const json& result, bool passed) {
    json cfg = json::object();
    for (const auto& [key, value] : config.echo()) cfg[key] = value;
    json doc = {{"command", std::string(to_string(config.command))},
                {"config", std::move(cfg)},
                {"passed", passed},
                {"result", result}};
    return doc.dump(2) + "\n";
}

void write_atomically(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << content;
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw ConfigError(exit_code::usage, "output: cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ConfigError(exit_code::usage, "output: cannot rename into " + path);
    }
}

std::vector<double> sample_times(const RunConfig& c) {
    std::vector<double> out;
    for (int i = 0; i <= c.steps; ++i) out.push_back(c.t * i / c.steps);
    return out;
}

PerturbationState growing_family_state(const RunConfig& c) {
    const auto [chi, chi_dot] = perturbed_initial_data(c.n_cutoff, c.scale, c.grid);
    return decompose_perturbation(chi, chi_dot, c.n_cutoff);
}

// Commands ------------------------------------------------------------------

Output run_dispersion(const RunConfig& c) {
    const WaveVector k = *c.k;
    const StabilityVerdict v = evaluate_stability(c.params, k);
    const double lambda_sq = boundary_dispersion(k, c.params.a, c.params.b);
    Output out;
    out.table = Table{{"k1", "k2", "lambda_squared", "gamma_squared", "growing", "syr1", "syr2", "strong"},
                      {{static_cast<long long>(k.k1), static_cast<long long>(k.k2), lambda_sq, v.gamma_squared,
                        v.growing, v.syrovatskij_first, v.syrovatskij_second, v.strong_condition}}};
    out.report = {{"k", {k.k1, k.k2}},
                  {"lambda_squared", lambda_sq},
                  {"gamma_squared", v.gamma_squared},
                  {"growing", v.growing},
                  {"syrovatskij_first", v.syrovatskij_first},
                  {"syrovatskij_second", v.syrovatskij_second},
                  {"strong_condition", v.strong_condition}};
    return out;
}

Output run_map(const RunConfig& c) {
    const WaveVector k = c.k.value_or(WaveVector{1, 0});
    const auto as = linspace(c.a_min, c.a_max, c.map_points);
    const auto bs = linspace(c.b_min, c.b_max, c.map_points);
    const StabilityMap map = stability_map(c.params, as, bs, k);
    Table t{{"a", "b", "gamma_squared", "growing", "syr1", "syr2", "strong"}, {}};
    for (std::size_t i = 0; i < as.size(); ++i) {
        for (std::size_t j = 0; j < bs.size(); ++j) {
            const StabilityVerdict& v = map.at(i, j);
            t.rows.push_back({as[i], bs[j], v.gamma_squared, v.growing, v.syrovatskij_first, v.syrovatskij_second,
                              v.strong_condition});
        }
    }
    Output out;
    out.report = table_json(t);
    out.table = std::move(t);
    return out;
}

Output run_modes(const RunConfig& c) {
    const auto [W, V] = build_wall_bounded_profiles(*c.k);
    Table t{{"x3", "phase", "W_re", "V_im"}, {}};
    const int top = c.grid.n_ver - 1;
    for (int m = top; m >= 0; --m) {
        const double x3 = c.grid.x3(Phase::lower, m);
        t.rows.push_back({x3, std::string("lower"), W.eval(x3, Phase::lower).real(), V.eval(x3, Phase::lower).imag()});
    }
    for (int m = 0; m <= top; ++m) {
        const double x3 = c.grid.x3(Phase::upper, m);
        t.rows.push_back({x3, std::string("upper"), W.eval(x3, Phase::upper).real(), V.eval(x3, Phase::upper).imag()});
    }
    Output out;
    out.report = table_json(t);
    out.table = std::move(t);
    return out;
}

Output run_pressure(const RunConfig& c) {
    const WaveVector k = *c.k;
    const VerticalProfile exact = solve_mode_interface_flux({k, 0.0, 2.0, 0.0});
    auto flux_of = [&](int n) {
        return SurfaceField::sample(n, [&](double x1, double x2) { return 2.0 * std::cos(k.k1 * x1 + k.k2 * x2); });
    };

    Table t{{"n_tan", "n_ver", "h", "max_error"}, {}};
    json levels = json::array();
    std::vector<double> log_h, log_e;
    GridShape shape = c.grid;
    for (int level = 0; level < c.refinements; ++level) {
        const FdSolution fd =
            solve_two_phase_poisson_fd(TwoPhaseGridField(shape), SurfaceField(shape.n_tan), flux_of(shape.n_tan));
        const double err = (fd.q - sample_mode(exact, k, shape)).max_abs();
        t.rows.push_back({static_cast<long long>(shape.n_tan), static_cast<long long>(shape.n_ver), shape.h_ver(), err});
        levels.push_back({{"n_tan", shape.n_tan}, {"n_ver", shape.n_ver}, {"h", shape.h_ver()}, {"max_error", err}});
        log_h.push_back(std::log(shape.h_ver()));
        log_e.push_back(std::log(err));
        shape = {2 * shape.n_tan, 2 * (shape.n_ver - 1) + 1};
    }
    // Least-squares slope of log(error) against log(h).
    const double nl = static_cast<double>(log_h.size());
    double mh = 0.0, me = 0.0;
    for (std::size_t i = 0; i < log_h.size(); ++i) {
        mh += log_h[i] / nl;
        me += log_e[i] / nl;
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < log_h.size(); ++i) {
        num += (log_h[i] - mh) * (log_e[i] - me);
        den += (log_h[i] - mh) * (log_h[i] - mh);
    }
    const double order = num / den;

    const TwoPhaseGridField source = TwoPhaseGridField::sample(c.grid, [&](double x1, double x2, double x3, Phase) {
        return std::cos(k.k1 * x1 + k.k2 * x2) * (1.0 - x3 * x3);
    });
    const PressureDecomposition split = pressure_decomposition(source, flux_of(c.grid.n_tan));

    Output out;
    out.passed = std::abs(order - 2.0) <= 0.2 && split.superposition_error < 1e-9;
    out.report = {{"k", {k.k1, k.k2}},
                  {"kappa", k.kappa()},
                  {"levels", std::move(levels)},
                  {"fitted_order", order},
                  {"superposition_error", split.superposition_error}};
    out.table = std::move(t);
    return out;
}

Output run_evolve(const RunConfig& c) {
    const PerturbationState s0 = growing_family_state(c);
    const Stepper stepper = c.make_stepper(max_modal_rate(s0, c.params.a, c.params.b));
    static constexpr double kMu[] = {1.0};
    Table t{{"t", "E1_plus", "E1_minus", "G", "F", "norm_P_H2"}, {}};
    for (double time : sample_times(c)) {
        const PerturbationState s = evolve_state(s0, c.params.a, c.params.b, time, stepper);
        const FunctionalReport f = compute_functionals(s, kMu, c.params.a, c.params.b, time);
        t.rows.push_back({time, f.e_plus(1.0), f.e_minus(1.0), f.G, f.F, f.norm_P_H2});
    }
    Output out;
    out.report = table_json(t);
    out.table = std::move(t);
    return out;
}

json mu_series(const std::vector<std::pair<double, double>>& values) {
    json out = json::array();
    for (const auto& [mu, v] : values) out.push_back({{"mu", mu}, {"value", v}});
    return out;
}

Output run_functionals(const RunConfig& c) {
    const PerturbationState s0 = growing_family_state(c);
    const Stepper stepper = c.make_stepper(max_modal_rate(s0, c.params.a, c.params.b));
    const auto times = sample_times(c);
    const Trajectory traj = simulate(s0, c.params.a, c.params.b, times, stepper);

    json samples = json::array();
    for (const TrajectorySample& sample : traj) {
        const FunctionalReport f = compute_functionals(sample.state, c.mus, c.params.a, c.params.b, sample.t);
        samples.push_back({{"t", f.t},
                           {"E_plus", mu_series(f.E_plus)},
                           {"E_minus", mu_series(f.E_minus)},
                           {"G", f.G},
                           {"F", f.F},
                           {"norm_P_H2", f.norm_P_H2}});
    }
    const Proposition2Report prop = check_proposition2(traj, c.n_cutoff, c.params.a, c.params.b);
    const double tol = c.stepper == Stepper::Kind::exact ? 1e-8 : 1e-4;
    const GrowthReport growth = check_growth_corollary(traj, c.n_cutoff, tol);
    double min_margin = INFINITY;
    for (const auto& [time, m] : growth.margins) min_margin = std::min(min_margin, m);

    Output out;
    out.passed = prop.invariant && prop.auxiliary_bounds_hold && growth.holds;
    out.report = {{"n", c.n_cutoff},
                  {"samples", std::move(samples)},
                  {"proposition2",
                   {{"starts_in_region", prop.starts_in_region},
                    {"invariant", prop.invariant},
                    {"first_violation_time", prop.first_violation_time ? json(*prop.first_violation_time) : json()},
                    {"auxiliary_bounds_hold", prop.auxiliary_bounds_hold}}},
                  {"growth", {{"holds", growth.holds}, {"tolerance", tol}, {"min_margin", min_margin}}}};
    return out;
}

Output run_illposedness(const RunConfig& c) {
    const int n = c.n_cutoff;
    const auto [chi, chi_dot] = perturbed_initial_data(n, c.scale, c.grid);
    const PerturbationState s0 = decompose_perturbation(chi, chi_dot, n);
    const Stepper stepper = c.make_stepper(max_modal_rate(s0, c.params.a, c.params.b));
    static constexpr double kMu[] = {1.0};
    const FunctionalReport f0 = compute_functionals(s0, kMu, c.params.a, c.params.b, 0.0);
    const PerturbationState st = evolve_state(s0, c.params.a, c.params.b, c.t, stepper);
    const FunctionalReport ft = compute_functionals(st, kMu, c.params.a, c.params.b, c.t);
    const PerturbationState s1 = evolve_state(s0, c.params.a, c.params.b, 1.0, stepper);
    const FunctionalReport f1 = compute_functionals(s1, kMu, c.params.a, c.params.b, 1.0);

    const double growth = ft.e_plus(1.0) / f0.e_plus(1.0);
    const double bound = std::exp(n * c.t);
    const double tol = c.stepper == Stepper::Kind::exact ? 1e-6 : 1e-4;
    Output out;
    out.passed = growth >= bound * (1.0 - tol);
    out.report = {{"n", n},
                  {"t", c.t},
                  {"scale", c.scale},
                  {"initial_c0_size", max_abs(chi_dot)},
                  {"initial_size_factor", c.scale * std::exp(-std::sqrt(static_cast<double>(n)))},
                  {"E1_plus_initial", f0.e_plus(1.0)},
                  {"E1_plus_final", ft.e_plus(1.0)},
                  {"growth_factor", growth},
                  {"growth_bound", bound},
                  {"tolerance", tol},
                  {"h2_readout_t1", f1.norm_P_H2},
                  {"h2_readout_final", ft.norm_P_H2}};
    return out;
}

Output run_verify(const RunConfig& c) {
    const SpectralMode mode = build_linearized_mode(*c.k, Branch::growing, c.params.a, c.params.b);
    const ResidualReport r = verify_mode(mode, c.samples);
    Output out;
    out.passed = r.worst() < 1e-9;
    out.report = {{"k", {c.k->k1, c.k->k2}},
                  {"samples", c.samples},
                  {"max_harmonic_residual", r.max_harmonic_residual},
                  {"max_divergence_residual", r.max_divergence_residual},
                  {"wall_bc_residual", r.wall_bc_residual},
                  {"interface_continuity_residual", r.interface_continuity_residual},
                  {"worst", r.worst()}};
    out.table = Table{{"max_harmonic_residual", "max_divergence_residual", "wall_bc_residual",
                       "interface_continuity_residual"},
                      {{r.max_harmonic_residual, r.max_divergence_residual, r.wall_bc_residual,
                        r.interface_continuity_residual}}};
    return out;
}

bool tabular(Command c) {
    return c == Command::map || c == Command::modes || c == Command::evolve;
}

Output dispatch(const RunConfig& c) {
    switch (c.command) {
        case Command::dispersion: return run_dispersion(c);
        case Command::map: return run_map(c);
        case Command::modes: return run_modes(c);
        case Command::pressure: return run_pressure(c);
        case Command::evolve: return run_evolve(c);
        case Command::functionals: return run_functionals(c);
        case Command::illposedness: return run_illposedness(c);
        case Command::verify: return run_verify(c);
    }
    throw ArgumentError("run: unknown command");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const OutputFormat format =
            config.format.value_or(tabular(config.command) ? OutputFormat::csv : OutputFormat::json);
        const Output result = dispatch(config);
        std::string text;
        if (format == OutputFormat::csv) {
            if (!result.table) {
                throw ConfigError(exit_code::usage,
                                  "format: command '" + std::string(to_string(config.command)) + "' has no CSV form");
            }
            text = render_csv(config, *result.table);
        } else {
            text = render_json(config, result.report, result.passed);
        }
        if (config.output == "-") {
            out << text;
        } else {
            write_atomically(config.output, text);
        }
        if (config.assert_checks && !result.passed) {
            err << "khlab: " << to_string(config.command) << " check failed\n";
            return exit_code::check_failed;
        }
        return exit_code::ok;
    } catch (const ConfigError& e) {
        err << "khlab: " << e.what() << "\n";
        return e.exit_code;
    } catch (const SolvabilityError& e) {
        err << "khlab: solvability: " << e.what() << "\n";
        return exit_code::numerical;
    } catch (const NumericalError& e) {
        err << "khlab: numerical: " << e.what() << "\n";
        return exit_code::numerical;
    } catch (const Error& e) {
        err << "khlab: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const std::exception& e) {
        err << "khlab: internal: " << e.what() << "\n";
        return exit_code::numerical;
    }
}

}  // namespace khlab
