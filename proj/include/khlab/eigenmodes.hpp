#pragma once

#include <array>
#include <utility>

#include "khlab/profile.hpp"

namespace khlab {

enum class Branch { growing, decaying };

/// One linearized normal mode
///     amplitude * exp(lambda t) * exp(i (k1 (x1 +/- drift t) + k2 x2)) * profile_c(x3)
/// with the + drift in the upper phase and - in the lower phase.
struct SpectralMode {
    WaveVector k;
    std::array<VerticalProfile, 3> profiles;
    Complex lambda{0.0, 0.0};
    double drift = 1.0;
    Complex amplitude{1.0, 0.0};

    /// Complex velocity (before taking the real part).
    std::array<Complex, 3> velocity(double t, double x1, double x2, double x3) const;
    /// exp(lambda * t); |mode(t + d)| / |mode(t)| = |exp(lambda d)|.
    Complex amplitude_factor(double t) const { return std::exp(lambda * t); }
};

struct ResidualReport {
    double max_harmonic_residual = 0.0;
    double max_divergence_residual = 0.0;
    double wall_bc_residual = 0.0;
    double interface_continuity_residual = 0.0;

    double worst() const;
};

/// W and V of the wall-bounded Helmholtz problem for wave number kappa = |k|:
///   W = cosh(kx3) -/+ coth(k) sinh(kx3)   (upper / lower), W(+-1) = 0, W(0) = 1
///   V = (i/kappa) dW/dx3
/// Throws DomainError for k = 0.
std::pair<VerticalProfile, VerticalProfile> build_wall_bounded_profiles(WaveVector k);

/// Normal mode with velocity profiles ((k1/kappa) V, (k2/kappa) V, W), which
/// reduce to (V, 0, W) for k = (k1 > 0, 0). The temporal exponent solves the
/// interface dispersion relation lambda^2 = k1^2 - (a^2+b^2)/2 k2^2; for
/// k2 = 0 this is lambda = +-kappa. Throws DomainError for k = 0.
SpectralMode build_linearized_mode(WaveVector k, Branch branch, double a = 0.0, double b = 0.0);

/// Audits a mode on `sample_count` Halton points of the slab at t = 0.
ResidualReport verify_mode(const SpectralMode& mode, int sample_count);

enum class Parity { odd, even };

/// Harmonic potential Pa{ exp(i j (x1 +/- t)) * profile(x3) } of the
/// interface decomposition. The odd family has
///   profile = sinh(j x3) -/+ coth(j) cosh(j x3)
/// the even family
///   profile = -/+ sinh(j x3) + coth(j) cosh(j x3)
/// (upper / lower signs); both satisfy d/dx3 = 0 at the walls.
struct HarmonicPotential {
    int j = 1;
    Parity parity = Parity::odd;
    VerticalProfile profile;

    Complex value(double t, double x1, double x3) const;
    /// Complex gradient (d/dx1, d/dx2, d/dx3).
    std::array<Complex, 3> gradient(double t, double x1, double x3) const;
};

/// Throws ArgumentError for j < 1.
std::pair<HarmonicPotential, HarmonicPotential> build_harmonic_potentials(int j);

/// Closed-form squared L2 norm over the slab of the gradient of
/// Re(c * basis) for unit |c|: (2 pi)^2 j coth(j) for both parities.
double gradient_norm_sq(int j);

}  // namespace khlab
