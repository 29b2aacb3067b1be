#pragma once

#include <utility>

#include "khlab/state.hpp"

namespace khlab {

struct BoundaryModeState {
    WaveVector k;
    Complex amplitude{0.0, 0.0};
    Complex velocity{0.0, 0.0};
};

/// Modal symbol of the interface equation
///   u_tt + u_y1y1 = (a^2 + b^2)/2 u_y2y2
/// for exp(lambda t + i k.y): lambda^2 = k1^2 - (a^2 + b^2)/2 k2^2.
/// Throws DomainError for k = 0.
double boundary_dispersion(WaveVector k, double a, double b);

struct Stepper {
    enum class Kind { exact, rk4 };
    Kind kind = Kind::exact;
    double dt = 0.0;

    static Stepper exact() { return {}; }
    static Stepper rk4(double dt) { return {Kind::rk4, dt}; }
};

/// Largest dt * (fastest modal rate) accepted by the rk4 stepper. The RK4
/// stability region reaches 2.78 on the real axis and 2.83 on the
/// imaginary axis; 2.5 keeps a margin on both.
inline constexpr double kRk4StabilityLimit = 2.5;

/// Solution at time t of y'' = lambda_sq * y: hyperbolic for lambda_sq > 0,
/// trigonometric for lambda_sq < 0, y + v t for lambda_sq = 0.
std::pair<Complex, Complex> propagate_second_order(Complex y, Complex v, double lambda_sq, double t);

/// Same ODE advanced by classical RK4 with steps of at most dt; the last step
/// is shortened to land on t.
std::pair<Complex, Complex> rk4_second_order(Complex y, Complex v, double lambda_sq, double t, double dt);

/// Throws ArgumentError for t < 0 or a non-positive rk4 step, StabilityError
/// when dt * |lambda| exceeds kRk4StabilityLimit.
BoundaryModeState evolve_boundary_mode(const BoundaryModeState& s, double a, double b, double t,
                                       Stepper stepper = Stepper::exact());

/// Multiplies every P/L/g coefficient (and time derivative) by j^2 and
/// applies the tangential multiplier k2^2 (that is, -d^2/dx2^2) to r.
PerturbationState apply_A(const PerturbationState& state);

/// Linear component system with the nonlinear remainder dropped:
///   P_tt = A P,  L_tt = A L,  g_tt = -2 A g,  r_tt = -k A r
/// with k = a^2 in the upper and b^2 in the lower phase.
PerturbationState evolve_state(const PerturbationState& s0, double a, double b, double t,
                               Stepper stepper = Stepper::exact());

/// Fastest modal rate |lambda| of a state's blocks, used by the rk4
/// stability check.
double max_modal_rate(const PerturbationState& s, double a, double b);

}  // namespace khlab
