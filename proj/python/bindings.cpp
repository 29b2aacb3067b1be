#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "khlab/config.hpp"
#include "khlab/eigenmodes.hpp"
#include "khlab/functionals.hpp"
#include "khlab/pressure.hpp"
#include "khlab/stability.hpp"

namespace py = pybind11;
using namespace khlab;

namespace {

WaveVector wave(std::pair<int, int> k) { return {k.first, k.second}; }
Vec3 vec(std::array<double, 3> v) { return {v[0], v[1], v[2]}; }

py::dict verdict_dict(const StabilityVerdict& v) {
    py::dict d;
    d["gamma_squared"] = v.gamma_squared;
    d["growing"] = v.growing;
    d["syrovatskij_first"] = v.syrovatskij_first;
    d["syrovatskij_second"] = v.syrovatskij_second;
    d["strong_condition"] = v.strong_condition;
    return d;
}

ShearParams params(double a, double b) {
    ShearParams p;
    p.a = a;
    p.b = b;
    return p;
}

Stepper stepper(const std::string& kind, double dt) {
    if (kind == "exact") return Stepper::exact();
    if (kind == "rk4") return Stepper::rk4(dt);
    throw ArgumentError("stepper must be 'exact' or 'rk4'");
}

// Growing-family run: decomposes the vanishing-size initial data and
// reports functionals along an exact or rk4 trajectory.
py::dict growth_run(int n, double scale, int n_tan, int n_ver, std::vector<double> times, const std::string& kind,
                    double dt) {
    const auto [chi, chi_dot] = perturbed_initial_data(n, scale, {n_tan, n_ver});
    const PerturbationState s0 = decompose_perturbation(chi, chi_dot, n);
    const Trajectory traj = simulate(s0, 0.0, 0.0, times, stepper(kind, dt));
    static constexpr double kMus[] = {0.0, 1.0, 1.5};
    py::list samples;
    for (const TrajectorySample& ts : traj) {
        const FunctionalReport f = compute_functionals(ts.state, kMus, 0.0, 0.0, ts.t);
        py::dict d;
        d["t"] = f.t;
        d["E1_plus"] = f.e_plus(1.0);
        d["E1_minus"] = f.e_minus(1.0);
        d["G"] = f.G;
        d["F"] = f.F;
        d["norm_P_H2"] = f.norm_P_H2;
        samples.append(d);
    }
    const Proposition2Report prop = check_proposition2(traj, n);
    const GrowthReport growth = check_growth_corollary(traj, n, 1e-6);
    py::dict out;
    out["initial_c0_size"] = max_abs(chi_dot);
    out["P_dot"] = s0.P_dot;
    out["samples"] = samples;
    out["invariant"] = prop.invariant;
    out["growth_holds"] = growth.holds;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Kelvin-Helmholtz vortex-sheet verification toolkit";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<SolvabilityError>(m, "SolvabilityError", PyExc_ArithmeticError);
    py::register_exception<StabilityError>(m, "StabilityError", PyExc_ArithmeticError);
    py::register_exception<AliasingError>(m, "AliasingError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("boundary_dispersion", [](std::pair<int, int> k, double a, double b) {
        return boundary_dispersion(wave(k), a, b);
    }, py::arg("k"), py::arg("a") = 0.0, py::arg("b") = 0.0);

    m.def("sen_gamma_squared", [](std::pair<int, int> k, double a, double b) {
        return sen_gamma_squared(params(a, b), wave(k));
    }, py::arg("k"), py::arg("a") = 0.0, py::arg("b") = 0.0);

    m.def("evaluate_stability", [](std::pair<int, int> k, double a, double b) {
        return verdict_dict(evaluate_stability(params(a, b), wave(k)));
    }, py::arg("k"), py::arg("a") = 0.0, py::arg("b") = 0.0);

    m.def("check_syrovatskij", [](std::array<double, 3> jump, std::array<double, 3> hp, std::array<double, 3> hm) {
        return verdict_dict(check_syrovatskij(vec(jump), vec(hp), vec(hm)));
    }, py::arg("jump_u"), py::arg("h_plus"), py::arg("h_minus"));

    m.def("stability_map", [](std::vector<double> as, std::vector<double> bs, std::pair<int, int> k) {
        const StabilityMap map = stability_map(ShearParams{}, as, bs, wave(k));
        py::list rows;
        for (std::size_t i = 0; i < as.size(); ++i) {
            for (std::size_t j = 0; j < bs.size(); ++j) {
                py::dict d = verdict_dict(map.at(i, j));
                d["a"] = as[i];
                d["b"] = bs[j];
                rows.append(d);
            }
        }
        return rows;
    }, py::arg("a_values"), py::arg("b_values"), py::arg("k") = std::pair<int, int>{1, 0});

    m.def("verify_mode", [](std::pair<int, int> k, bool growing, double a, double b, int samples) {
        const ResidualReport r =
            verify_mode(build_linearized_mode(wave(k), growing ? Branch::growing : Branch::decaying, a, b), samples);
        py::dict d;
        d["max_harmonic_residual"] = r.max_harmonic_residual;
        d["max_divergence_residual"] = r.max_divergence_residual;
        d["wall_bc_residual"] = r.wall_bc_residual;
        d["interface_continuity_residual"] = r.interface_continuity_residual;
        d["worst"] = r.worst();
        return d;
    }, py::arg("k"), py::arg("growing") = true, py::arg("a") = 0.0, py::arg("b") = 0.0, py::arg("samples") = 1000);

    m.def("mode_exponent", [](std::pair<int, int> k, bool growing, double a, double b) {
        return build_linearized_mode(wave(k), growing ? Branch::growing : Branch::decaying, a, b).lambda;
    }, py::arg("k"), py::arg("growing") = true, py::arg("a") = 0.0, py::arg("b") = 0.0);

    m.def("wall_profiles", [](std::pair<int, int> k, std::vector<double> x3) {
        const auto [W, V] = build_wall_bounded_profiles(wave(k));
        std::vector<Complex> w, v;
        for (double z : x3) {
            w.push_back(W.eval(z));
            v.push_back(V.eval(z));
        }
        return std::make_pair(w, v);
    }, py::arg("k"), py::arg("x3"));

    m.def("interface_flux_profile", [](std::pair<int, int> k, Complex value_jump, Complex flux_jump, double shift,
                                       std::vector<double> x3) {
        const VerticalProfile q = solve_mode_interface_flux({wave(k), value_jump, flux_jump, shift});
        std::vector<std::pair<Complex, Complex>> out;
        for (double z : x3) out.emplace_back(q.eval(z, Phase::upper), q.eval(-z, Phase::lower));
        return out;
    }, py::arg("k"), py::arg("value_jump"), py::arg("flux_jump"), py::arg("shift") = 0.0, py::arg("x3"),
       "Upper-phase value at x3 and lower-phase value at -x3 for each x3 in [0, 1].");

    m.def("evolve_boundary_mode", [](std::pair<int, int> k, Complex amp, Complex vel, double a, double b, double t,
                                     const std::string& kind, double dt) {
        const BoundaryModeState s = evolve_boundary_mode({wave(k), amp, vel}, a, b, t, stepper(kind, dt));
        return std::make_pair(s.amplitude, s.velocity);
    }, py::arg("k"), py::arg("amplitude"), py::arg("velocity"), py::arg("a") = 0.0, py::arg("b") = 0.0,
       py::arg("t") = 1.0, py::arg("stepper") = "exact", py::arg("dt") = 1e-3);

    m.def("gradient_norm_sq", &gradient_norm_sq, py::arg("j"));

    m.def("growth_run", &growth_run, py::arg("n"), py::arg("scale") = 1.0, py::arg("n_tan") = 64,
          py::arg("n_ver") = 17, py::arg("times") = std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0},
          py::arg("stepper") = "exact", py::arg("dt") = 1e-3);

    m.def("run", [](const std::string& config_text, std::vector<std::string> overrides) {
        std::ostringstream out, err;
        int code;
        try {
            code = run(parse_config(config_text, overrides), out, err);
        } catch (const ConfigError& e) {
            code = e.exit_code;
            err << e.what() << "\n";
        }
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("config_text") = "", py::arg("overrides") = std::vector<std::string>{},
       "Runs one command; returns (exit_code, stdout_text, stderr_text).");
}
