#include "khlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "khlab/fourier.hpp"

namespace khlab {

double boundary_dispersion(WaveVector k, double a, double b) {
    require_nonzero(k, "boundary_dispersion");
    const double k1 = k.k1;
    const double k2 = k.k2;
    return k1 * k1 - 0.5 * (a * a + b * b) * k2 * k2;
}

std::pair<Complex, Complex> propagate_second_order(Complex y, Complex v, double lambda_sq, double t) {
    if (lambda_sq > 0.0) {
        const double r = std::sqrt(lambda_sq);
        const double c = std::cosh(r * t);
        const double s = std::sinh(r * t);
        return {y * c + v * (s / r), y * (r * s) + v * c};
    }
    if (lambda_sq < 0.0) {
        const double w = std::sqrt(-lambda_sq);
        const double c = std::cos(w * t);
        const double s = std::sin(w * t);
        return {y * c + v * (s / w), -y * (w * s) + v * c};
    }
    return {y + v * t, v};
}

std::pair<Complex, Complex> rk4_second_order(Complex y, Complex v, double lambda_sq, double t, double dt) {
    const long steps = std::max(1L, static_cast<long>(std::ceil(t / dt - 1e-9)));
    double done = 0.0;
    for (long i = 0; i < steps && done < t; ++i) {
        const double step = std::min(dt, t - done);
        const Complex k1y = v, k1v = lambda_sq * y;
        const Complex k2y = v + 0.5 * step * k1v, k2v = lambda_sq * (y + 0.5 * step * k1y);
        const Complex k3y = v + 0.5 * step * k2v, k3v = lambda_sq * (y + 0.5 * step * k2y);
        const Complex k4y = v + step * k3v, k4v = lambda_sq * (y + step * k3y);
        y += step / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        done += step;
    }
    return {y, v};
}

namespace {

void check_time(double t, const Stepper& stepper) {
    if (!(t >= 0.0)) throw ArgumentError("evolve: t must be non-negative");
    if (stepper.kind == Stepper::Kind::rk4 && !(stepper.dt > 0.0)) {
        throw ArgumentError("evolve: rk4 needs dt > 0");
    }
}

void check_rk4_stability(const Stepper& stepper, double rate) {
    if (stepper.kind == Stepper::Kind::rk4 && stepper.dt * rate > kRk4StabilityLimit) {
        throw StabilityError("evolve: dt * rate = " + std::to_string(stepper.dt * rate) +
                             " exceeds the rk4 stability limit " + std::to_string(kRk4StabilityLimit));
    }
}

std::pair<Complex, Complex> advance(Complex y, Complex v, double lambda_sq, double t, const Stepper& stepper) {
    if (stepper.kind == Stepper::Kind::exact) return propagate_second_order(y, v, lambda_sq, t);
    return rk4_second_order(y, v, lambda_sq, t, stepper.dt);
}

void advance_block(ModeCoeffs& pos, ModeCoeffs& vel, double stiffness_sign, double t,
                   const Stepper& stepper) {
    ModeCoeffs keys = pos;
    keys.insert(vel.begin(), vel.end());
    ModeCoeffs new_pos, new_vel;
    for (const auto& entry : keys) {
        const int j = entry.first;
        const Complex y = pos.contains(j) ? pos.at(j) : Complex{};
        const Complex v = vel.contains(j) ? vel.at(j) : Complex{};
        std::tie(new_pos[j], new_vel[j]) = advance(y, v, stiffness_sign * j * j, t, stepper);
    }
    pos = std::move(new_pos);
    vel = std::move(new_vel);
}

// Applies fn(pos, vel, k, phase) to every tangential coefficient of the
// r block and transforms back.
template <class Fn>
void map_r_block(VectorGridField& r, VectorGridField& r_dot, Fn&& fn) {
    for (int c = 0; c < 3; ++c) {
        TangentialSpectrum sp = tangential_transform(r[c]);
        TangentialSpectrum sv = tangential_transform(r_dot[c]);
        const GridShape& shape = sp.shape();
        for (WaveVector k : sp.all_wave_vectors()) {
            for (Phase phase : {Phase::upper, Phase::lower}) {
                for (int m = 0; m < shape.n_ver; ++m) {
                    fn(sp.at(phase, m, k), sv.at(phase, m, k), k, phase);
                }
            }
        }
        r[c] = inverse_tangential_transform(sp);
        r_dot[c] = inverse_tangential_transform(sv);
    }
}

// Exact zeros on boundary rows of r3 survive the round trip only up to
// roundoff when neighbouring levels are nonzero; restore them.
void clear_normal_trace(VectorGridField& r) {
    TwoPhaseGridField& r3 = r[2];
    const GridShape& s = r3.shape();
    const std::size_t plane = s.plane_size();
    for (Phase phase : {Phase::upper, Phase::lower}) {
        auto& v = r3.values(phase);
        for (int m : {0, s.n_ver - 1}) std::fill_n(v.begin() + m * plane, plane, 0.0);
    }
}

}  // namespace

BoundaryModeState evolve_boundary_mode(const BoundaryModeState& s, double a, double b, double t,
                                       Stepper stepper) {
    check_time(t, stepper);
    const double lambda_sq = boundary_dispersion(s.k, a, b);
    check_rk4_stability(stepper, std::sqrt(std::abs(lambda_sq)));
    const auto [y, v] = advance(s.amplitude, s.velocity, lambda_sq, t, stepper);
    return {s.k, y, v};
}

PerturbationState apply_A(const PerturbationState& state) {
    PerturbationState out = state;
    for (ModeCoeffs* c : {&out.P, &out.L, &out.g, &out.P_dot, &out.L_dot, &out.g_dot}) {
        for (auto& [j, value] : *c) value *= static_cast<double>(j) * j;
    }
    if (out.r) {
        map_r_block(*out.r, *out.r_dot, [](Complex& y, Complex& v, WaveVector k, Phase) {
            const double symbol = static_cast<double>(k.k2) * k.k2;
            y *= symbol;
            v *= symbol;
        });
        clear_normal_trace(*out.r);
        clear_normal_trace(*out.r_dot);
    }
    return out;
}

double max_modal_rate(const PerturbationState& s, double a, double b) {
    double rate = 0.0;
    for (const ModeCoeffs* c : {&s.P, &s.L, &s.P_dot, &s.L_dot}) {
        if (!c->empty()) rate = std::max(rate, static_cast<double>(c->rbegin()->first));
    }
    for (const ModeCoeffs* c : {&s.g, &s.g_dot}) {
        if (!c->empty()) rate = std::max(rate, std::sqrt(2.0) * c->rbegin()->first);
    }
    if (s.r) {
        const double k2_max = 0.5 * (*s.r)[0].shape().n_tan;
        rate = std::max(rate, std::max(a, b) * k2_max);
    }
    return rate;
}

PerturbationState evolve_state(const PerturbationState& s0, double a, double b, double t,
                               Stepper stepper) {
    check_time(t, stepper);
    s0.validate();
    check_rk4_stability(stepper, max_modal_rate(s0, a, b));
    PerturbationState out = s0;
    advance_block(out.P, out.P_dot, 1.0, t, stepper);
    advance_block(out.L, out.L_dot, 1.0, t, stepper);
    advance_block(out.g, out.g_dot, -2.0, t, stepper);
    if (out.r) {
        map_r_block(*out.r, *out.r_dot, [&](Complex& y, Complex& v, WaveVector k, Phase phase) {
            const double field = phase == Phase::upper ? a * a : b * b;
            const double lambda_sq = -field * static_cast<double>(k.k2) * k.k2;
            std::tie(y, v) = advance(y, v, lambda_sq, t, stepper);
        });
        clear_normal_trace(*out.r);
        clear_normal_trace(*out.r_dot);
    }
    return out;
}

}  // namespace khlab
