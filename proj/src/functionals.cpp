#include "khlab/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "khlab/eigenmodes.hpp"
#include "khlab/fourier.hpp"
#include "khlab/pressure.hpp"

namespace khlab {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kBoundaryTol = 1e-9;
constexpr double kRegionSlack = 1e-12;

void check_aliasing(const std::array<TangentialSpectrum, 3>& spectra, double data_scale, const char* name) {
    const GridShape& s = spectra[0].shape();
    const int n = s.n_tan;
    if (n % 2 != 0) return;
    for (const TangentialSpectrum& sp : spectra) {
        for (Phase phase : {Phase::upper, Phase::lower}) {
            for (int m = 0; m < s.n_ver; ++m) {
                for (int i = 0; i < n; ++i) {
                    for (int k : {0, 1}) {
                        // Row i1 = n/2 and column i2 = n/2.
                        const WaveVector kv = k == 0 ? WaveVector{signed_frequency(n / 2, n), signed_frequency(i, n)}
                                                     : WaveVector{signed_frequency(i, n), signed_frequency(n / 2, n)};
                        if (std::abs(sp.at(phase, m, kv)) > kBoundaryTol * data_scale) {
                            throw AliasingError(std::string("decompose_perturbation: ") + name +
                                                " has content at the Nyquist frequency; refine the grid");
                        }
                    }
                }
            }
        }
    }
}

struct HarmonicSplit {
    ModeCoeffs odd;
    ModeCoeffs even;
};

// Expands the harmonic part of one field. chi3 on the interface, level 0 of
// each phase, is the Neumann datum of h from that side.
HarmonicSplit harmonic_coefficients(const TangentialSpectrum& chi3, double data_scale, double zero_tol,
                                    const char* name) {
    const GridShape& s = chi3.shape();
    const int top = s.n_ver - 1;
    HarmonicSplit out;
    for (WaveVector k : chi3.all_wave_vectors()) {
        const Complex cp = chi3.at(Phase::upper, 0, k);
        const Complex cm = chi3.at(Phase::lower, 0, k);
        const double wall = std::max(std::abs(chi3.at(Phase::upper, top, k)), std::abs(chi3.at(Phase::lower, top, k)));
        if (wall > kBoundaryTol * data_scale) {
            throw ArgumentError(std::string("decompose_perturbation: ") + name +
                                " has nonzero normal component on the walls");
        }
        const bool content = std::max(std::abs(cp), std::abs(cm)) > kBoundaryTol * data_scale;
        if (k.is_zero()) {
            if (content) {
                throw SolvabilityError(std::string("decompose_perturbation: ") + name +
                                       " has nonzero mean normal component on the interface");
            }
            continue;
        }
        if (k.k2 != 0) {
            if (content) {
                throw ArgumentError(std::string("decompose_perturbation: ") + name +
                                    " has interface motion at " + to_string(k) +
                                    "; only x1-aligned harmonic modes (k2 = 0) are representable");
            }
            continue;
        }
        if (k.k1 < 0) continue;  // conjugate of (-k1, 0)

        // dh/dx3 = cp from above and cm from below; as jump data this is
        // [dh/dx3] = cp - cm and a value jump fixed by the sum.
        const double kappa = k.kappa();
        const double tanh_k = std::tanh(kappa);
        InterfaceData data{k, -(cp + cm) / (kappa * tanh_k), cp - cm, 0.0};
        const VerticalProfile q = solve_mode_interface_flux(data);
        const Complex qp = q.eval(0.0, Phase::upper);
        const Complex qm = q.eval(0.0, Phase::lower);
        // Spectral coefficient at (j, 0) is c/2 times the basis profile; the
        // odd profile is -coth j at 0+, the even one +coth j.
        const Complex c_odd = -(qp - qm) * tanh_k;
        const Complex c_even = (qp + qm) * tanh_k;
        const int j = k.k1;
        if (std::abs(c_odd) * j > zero_tol * data_scale) out.odd[j] = c_odd;
        if (std::abs(c_even) * j > zero_tol * data_scale) out.even[j] = c_even;
    }
    return out;
}

void add_gradient(VectorGridField& out, const HarmonicPotential& pot, Complex c) {
    const GridShape& s = out[0].shape();
    const int n = s.n_tan;
    const int j = pot.j;
    const VerticalProfile dprofile = pot.profile.derivative();
    std::vector<Complex> wave(n);
    for (int i = 0; i < n; ++i) wave[i] = c * std::exp(kI * (static_cast<double>(j) * s.x_tan(i)));
    for (Phase phase : {Phase::upper, Phase::lower}) {
        for (int m = 0; m < s.n_ver; ++m) {
            const double x3 = s.x3(phase, m);
            const Complex f = pot.profile.eval(x3, phase);
            const Complex df = dprofile.eval(x3, phase);
            for (int i1 = 0; i1 < n; ++i1) {
                const double g1 = (kI * static_cast<double>(j) * f * wave[i1]).real();
                const double g3 = (df * wave[i1]).real();
                for (int i2 = 0; i2 < n; ++i2) {
                    out[0].at(phase, m, i1, i2) += g1;
                    out[2].at(phase, m, i1, i2) += g3;
                }
            }
        }
    }
}

void zero_normal_trace(VectorGridField& r, double data_scale, const char* name) {
    TwoPhaseGridField& r3 = r[2];
    const GridShape& s = r3.shape();
    const std::size_t plane = s.plane_size();
    for (Phase phase : {Phase::upper, Phase::lower}) {
        auto& v = r3.values(phase);
        for (int m : {0, s.n_ver - 1}) {
            for (std::size_t i = 0; i < plane; ++i) {
                double& x = v[m * plane + i];
                if (std::abs(x) > 1e-8 * data_scale) {
                    throw NumericalError(std::string("decompose_perturbation: remaining part of ") + name +
                                         " keeps a normal trace " + std::to_string(x));
                }
                x = 0.0;
            }
        }
    }
}

struct BlockSplit {
    ModeCoeffs high, low;
};

BlockSplit split_at(const ModeCoeffs& odd, int n_cutoff) {
    BlockSplit out;
    for (const auto& [j, c] : odd) (j >= n_cutoff ? out.high : out.low)[j] = c;
    return out;
}

struct FieldParts {
    ModeCoeffs odd, even;
    VectorGridField r;
};

FieldParts decompose_field(const VectorGridField& chi, const DecompositionOptions& options, const char* name) {
    const GridShape shape = chi[0].shape();
    shape.validate();
    for (const auto& c : chi) {
        if (!(c.shape() == shape)) throw DimensionError("decompose_perturbation: components on different grids");
    }
    const double data_scale = std::max(max_abs(chi), 1e-300);
    std::array<TangentialSpectrum, 3> spectra;
    for (int c = 0; c < 3; ++c) spectra[c] = tangential_transform(chi[c]);
    check_aliasing(spectra, data_scale, name);

    HarmonicSplit h = harmonic_coefficients(spectra[2], data_scale, options.zero_tol, name);
    VectorGridField r = chi - harmonic_gradient(h.odd, h.even, shape);
    FieldParts out{std::move(h.odd), std::move(h.even), std::move(r)};
    zero_normal_trace(out.r, data_scale, name);
    return out;
}

double gradient_energy(const ModeCoeffs& c) {
    double sum = 0.0;
    for (const auto& [j, value] : c) sum += std::norm(value) * gradient_norm_sq(j);
    return sum;
}

// Sum over j of w(j) |c_j|^2 N_j.
template <class Weight>
double weighted_energy(const ModeCoeffs& c, Weight&& w) {
    double sum = 0.0;
    for (const auto& [j, value] : c) sum += w(j) * std::norm(value) * gradient_norm_sq(j);
    return sum;
}

Complex lookup(const ModeCoeffs& c, int j) {
    const auto it = c.find(j);
    return it == c.end() ? Complex{} : it->second;
}

// ||k^{1/2} A^{1/2} r||^2 with A the tangential multiplier k2^2.
double stiffness_energy(const VectorGridField& r, double a, double b) {
    const GridShape& s = r[0].shape();
    const double area = kTwoPi * kTwoPi;
    double sum = 0.0;
    for (const TwoPhaseGridField& comp : r) {
        const TangentialSpectrum sp = tangential_transform(comp);
        for (Phase phase : {Phase::upper, Phase::lower}) {
            const double field = phase == Phase::upper ? a * a : b * b;
            if (field == 0.0) continue;
            for (int m = 0; m < s.n_ver; ++m) {
                const double w = vertical_weight(s, m);
                for (WaveVector k : sp.all_wave_vectors()) {
                    sum += field * w * area * static_cast<double>(k.k2) * k.k2 * std::norm(sp.at(phase, m, k));
                }
            }
        }
    }
    return sum;
}

bool at_least(double lhs, double rhs) {
    return lhs >= rhs - kRegionSlack * std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace

VectorGridField harmonic_gradient(const ModeCoeffs& odd_coeffs, const ModeCoeffs& even_coeffs, GridShape shape) {
    shape.validate();
    VectorGridField out = make_vector_field(shape);
    for (const auto* block : {&odd_coeffs, &even_coeffs}) {
        for (const auto& [j, c] : *block) {
            if (2 * j >= shape.n_tan) {
                throw DimensionError("harmonic_gradient: frequency " + std::to_string(j) +
                                     " is not resolved by n_tan = " + std::to_string(shape.n_tan));
            }
            const auto [f, g] = build_harmonic_potentials(j);
            add_gradient(out, block == &odd_coeffs ? f : g, c);
        }
    }
    return out;
}

PerturbationState decompose_perturbation(const VectorGridField& chi, const VectorGridField& chi_dot, int n_cutoff,
                                         const DecompositionOptions& options) {
    if (n_cutoff < 1) throw ArgumentError("decompose_perturbation: n_cutoff must be >= 1");
    if (!(chi[0].shape() == chi_dot[0].shape())) {
        throw DimensionError("decompose_perturbation: chi and chi_dot live on different grids");
    }
    FieldParts x = decompose_field(chi, options, "chi");
    FieldParts v = decompose_field(chi_dot, options, "chi_dot");

    PerturbationState s;
    s.n_cutoff = n_cutoff;
    BlockSplit xs = split_at(x.odd, n_cutoff);
    BlockSplit vs = split_at(v.odd, n_cutoff);
    s.P = std::move(xs.high);
    s.L = std::move(xs.low);
    s.P_dot = std::move(vs.high);
    s.L_dot = std::move(vs.low);
    s.g = std::move(x.even);
    s.g_dot = std::move(v.even);
    s.r = std::move(x.r);
    s.r_dot = std::move(v.r);
    s.validate();
    return s;
}

std::pair<VectorGridField, VectorGridField> reconstruct(const PerturbationState& state, GridShape shape) {
    state.validate();
    if (state.r && !((*state.r)[0].shape() == shape)) {
        throw DimensionError("reconstruct: remaining part lives on a different grid");
    }
    auto merge = [](const ModeCoeffs& a, const ModeCoeffs& b) {
        ModeCoeffs out = a;
        out.insert(b.begin(), b.end());
        return out;
    };
    VectorGridField chi = harmonic_gradient(merge(state.P, state.L), state.g, shape);
    VectorGridField chi_dot = harmonic_gradient(merge(state.P_dot, state.L_dot), state.g_dot, shape);
    if (state.r) {
        chi = chi + *state.r;
        chi_dot = chi_dot + *state.r_dot;
    }
    return {std::move(chi), std::move(chi_dot)};
}

double FunctionalReport::e_plus(double mu) const {
    for (const auto& [m, v] : E_plus) {
        if (m == mu) return v;
    }
    throw ArgumentError("FunctionalReport: E_plus not computed for mu = " + std::to_string(mu));
}

double FunctionalReport::e_minus(double mu) const {
    for (const auto& [m, v] : E_minus) {
        if (m == mu) return v;
    }
    throw ArgumentError("FunctionalReport: E_minus not computed for mu = " + std::to_string(mu));
}

FunctionalReport compute_functionals(const PerturbationState& state, std::span<const double> mus, double a,
                                     double b, double t) {
    state.validate();
    FunctionalReport out;
    out.t = t;

    ModeCoeffs keys = state.P;
    keys.insert(state.P_dot.begin(), state.P_dot.end());
    for (double mu : mus) {
        double plus = 0.0, minus = 0.0;
        for (const auto& entry : keys) {
            const int j = entry.first;
            const Complex c = lookup(state.P, j);
            const Complex v = lookup(state.P_dot, j);
            const double w = std::pow(static_cast<double>(j), 2.0 * mu) * gradient_norm_sq(j);
            plus += w * std::norm(v + static_cast<double>(j) * c);
            minus += w * std::norm(v - static_cast<double>(j) * c);
        }
        out.E_plus.emplace_back(mu, plus);
        out.E_minus.emplace_back(mu, minus);
    }

    auto sq = [](int j) { return static_cast<double>(j) * j; };
    out.G = gradient_energy(state.L_dot) + weighted_energy(state.L, sq);
    out.F = gradient_energy(state.g_dot) + weighted_energy(state.g, sq);
    if (state.r) {
        out.F += norm_sq_L2(*state.r_dot) + stiffness_energy(*state.r, a, b);
    }
    out.norm_P_H2 = std::sqrt(weighted_energy(state.P, [](int j) { return std::pow(static_cast<double>(j), 4); }));
    return out;
}

Trajectory simulate(const PerturbationState& s0, double a, double b, std::span<const double> times,
                    Stepper stepper) {
    Trajectory out;
    out.reserve(times.size());
    for (double t : times) out.push_back({t, evolve_state(s0, a, b, t, stepper)});
    return out;
}

namespace {

void check_trajectory(const Trajectory& trajectory, int n_cutoff, const char* op) {
    if (trajectory.empty()) throw ArgumentError(std::string(op) + ": empty trajectory");
    if (n_cutoff < 1) throw ArgumentError(std::string(op) + ": n_cutoff must be >= 1");
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        if (trajectory[i].state.n_cutoff != n_cutoff) {
            throw ArgumentError(std::string(op) + ": sample uses a different n_cutoff");
        }
        if (i > 0 && trajectory[i].t < trajectory[i - 1].t) {
            throw ArgumentError(std::string(op) + ": trajectory is not time-ordered");
        }
    }
}

double block_norm(const ModeCoeffs& c, double power) {
    return std::sqrt(weighted_energy(c, [power](int j) { return std::pow(static_cast<double>(j), 2.0 * power); }));
}

bool auxiliary_bounds(const FunctionalReport& f, const PerturbationState& s, int n) {
    const double nd = n;
    const std::pair<double, double> pairs[] = {{1.5, 1.0}, {1.0, 0.0}};
    for (const auto& [mu, nu] : pairs) {
        const double factor = std::pow(nd, 2.0 * (mu - nu));
        if (!at_least(f.e_plus(mu), factor * f.e_plus(nu))) return false;
        if (!at_least(f.e_minus(mu), factor * f.e_minus(nu))) return false;
    }
    for (double mu : {0.5, 1.0}) {
        const double factor = std::pow(nd - 1.0, 2.0 * mu);
        for (const ModeCoeffs* c : {&s.L, &s.L_dot}) {
            if (!at_least(factor * block_norm(*c, 0.0), block_norm(*c, 2.0 * mu))) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

Proposition2Report check_proposition2(const Trajectory& trajectory, int n_cutoff, double a, double b) {
    check_trajectory(trajectory, n_cutoff, "check_proposition2");
    static constexpr double kMus[] = {0.0, 1.0, 1.5};
    const double n3 = std::pow(static_cast<double>(n_cutoff), 3);

    Proposition2Report out;
    out.n_cutoff = n_cutoff;
    out.invariant = true;
    out.auxiliary_bounds_hold = true;
    for (const TrajectorySample& sample : trajectory) {
        const FunctionalReport f = compute_functionals(sample.state, kMus, a, b, sample.t);
        Proposition2Sample p;
        p.t = sample.t;
        p.E1_plus = f.e_plus(1.0);
        p.E1_minus = f.e_minus(1.0);
        p.F = f.F;
        p.G = f.G;
        p.growth_dominant = at_least(p.E1_plus, p.E1_minus);
        p.dominates_F = at_least(p.E1_plus, n3 * p.F);
        p.dominates_G = at_least(p.E1_plus, n3 * p.G);
        p.auxiliary_bounds = auxiliary_bounds(f, sample.state, n_cutoff);
        if (!p.in_region() && out.invariant) {
            out.invariant = false;
            out.first_violation_time = p.t;
        }
        out.auxiliary_bounds_hold = out.auxiliary_bounds_hold && p.auxiliary_bounds;
        out.samples.push_back(p);
    }
    out.starts_in_region = out.samples.front().in_region();
    return out;
}

GrowthReport check_growth_corollary(const Trajectory& trajectory, int n_cutoff, double tol) {
    check_trajectory(trajectory, n_cutoff, "check_growth_corollary");
    static constexpr double kMu[] = {1.0};
    const double t0 = trajectory.front().t;
    const double e0 = compute_functionals(trajectory.front().state, kMu, 0.0, 0.0, t0).e_plus(1.0);
    if (!(e0 > 0.0)) throw DomainError("check_growth_corollary: E1+(0) = 0, growth ratio undefined");

    GrowthReport out;
    out.holds = true;
    for (const TrajectorySample& sample : trajectory) {
        const double e = compute_functionals(sample.state, kMu, 0.0, 0.0, sample.t).e_plus(1.0);
        const double margin = e / (e0 * std::exp(n_cutoff * (sample.t - t0)));
        out.margins.emplace_back(sample.t, margin);
        if (margin < 1.0 - tol) out.holds = false;
    }
    return out;
}

std::pair<VectorGridField, VectorGridField> perturbed_initial_data(int n, double scale, GridShape shape) {
    if (n < 1) throw ArgumentError("perturbed_initial_data: n must be >= 1");
    shape.validate();
    if (2 * n >= shape.n_tan) {
        throw DimensionError("perturbed_initial_data: n_tan = " + std::to_string(shape.n_tan) +
                             " does not resolve frequency " + std::to_string(n));
    }
    const WaveVector k{n, 0};
    const auto [W, V] = build_wall_bounded_profiles(k);
    const Complex amp = scale * std::exp(-std::sqrt(static_cast<double>(n)));
    VectorGridField chi_dot = make_vector_field(shape);
    const int nt = shape.n_tan;
    std::vector<Complex> wave(nt);
    for (int i = 0; i < nt; ++i) wave[i] = amp * std::exp(kI * (static_cast<double>(n) * shape.x_tan(i)));
    for (Phase phase : {Phase::upper, Phase::lower}) {
        for (int m = 0; m < shape.n_ver; ++m) {
            const double x3 = shape.x3(phase, m);
            const Complex v = V.eval(x3, phase);
            const Complex w = W.eval(x3, phase);
            for (int i1 = 0; i1 < nt; ++i1) {
                const double u1 = (v * wave[i1]).real();
                const double u3 = (w * wave[i1]).real();
                for (int i2 = 0; i2 < nt; ++i2) {
                    chi_dot[0].at(phase, m, i1, i2) = u1;
                    chi_dot[2].at(phase, m, i1, i2) = u3;
                }
            }
        }
    }
    return {make_vector_field(shape), std::move(chi_dot)};
}

}  // namespace khlab
