#include "khlab/eigenmodes.hpp"

#include <algorithm>
#include <cmath>

namespace khlab {

namespace {

constexpr Complex kI{0.0, 1.0};

// 1/(2 sinh x) and exp(x)/(2 sinh x), evaluated without overflow.
double half_csch(double x) { return -std::exp(-x) / std::expm1(-2.0 * x); }
double half_exp_csch(double x) { return -1.0 / std::expm1(-2.0 * x); }

// sinh(x (1 - x3)) / sinh(x) on the upper phase, sinh(x (1 + x3)) / sinh(x)
// on the lower phase.
VerticalProfile wall_profile(double kappa) {
    const double s = half_csch(kappa);
    const double c = half_exp_csch(kappa);
    return VerticalProfile(kappa, {-s, c}, {c, -s});
}

// -cosh(j (x3 - 1)) / sinh(j) upper, cosh(j (x3 + 1)) / sinh(j) lower.
VerticalProfile odd_potential_profile(double j) {
    const double s = half_csch(j);
    const double c = half_exp_csch(j);
    return VerticalProfile(j, {-s, -c}, {c, s});
}

// cosh(j (x3 - 1)) / sinh(j) upper, cosh(j (x3 + 1)) / sinh(j) lower.
VerticalProfile even_potential_profile(double j) {
    const double s = half_csch(j);
    const double c = half_exp_csch(j);
    return VerticalProfile(j, {s, c}, {c, s});
}

double radical_inverse(unsigned index, unsigned base) {
    double inv = 1.0 / base;
    double f = inv;
    double out = 0.0;
    while (index > 0) {
        out += f * (index % base);
        index /= base;
        f *= inv;
    }
    return out;
}

Complex tangential_phase(WaveVector k, double drift, double t, double x1, double x2, Phase phase) {
    const double shift = phase == Phase::upper ? drift * t : -drift * t;
    return std::exp(kI * (k.k1 * (x1 + shift) + k.k2 * x2));
}

}  // namespace

std::array<Complex, 3> SpectralMode::velocity(double t, double x1, double x2, double x3) const {
    const Phase phase = x3 >= 0.0 ? Phase::upper : Phase::lower;
    const Complex factor = amplitude * std::exp(lambda * t) * tangential_phase(k, drift, t, x1, x2, phase);
    return {factor * profiles[0].eval(x3, phase), factor * profiles[1].eval(x3, phase),
            factor * profiles[2].eval(x3, phase)};
}

double ResidualReport::worst() const {
    return std::max({max_harmonic_residual, max_divergence_residual, wall_bc_residual,
                     interface_continuity_residual});
}

std::pair<VerticalProfile, VerticalProfile> build_wall_bounded_profiles(WaveVector k) {
    require_nonzero(k, "build_wall_bounded_profiles");
    const double kappa = k.kappa();
    VerticalProfile w = wall_profile(kappa);
    VerticalProfile v = w.derivative().scaled(kI / kappa);
    return {w, v};
}

SpectralMode build_linearized_mode(WaveVector k, Branch branch, double a, double b) {
    auto [w, v] = build_wall_bounded_profiles(k);
    const double kappa = k.kappa();
    SpectralMode mode;
    mode.k = k;
    mode.profiles = {v.scaled(k.k1 / kappa), v.scaled(k.k2 / kappa), w};
    const double lambda_sq = static_cast<double>(k.k1) * k.k1 -
                             0.5 * (a * a + b * b) * static_cast<double>(k.k2) * k.k2;
    const Complex root = std::sqrt(Complex(lambda_sq, 0.0));
    mode.lambda = branch == Branch::growing ? root : -root;
    return mode;
}

ResidualReport verify_mode(const SpectralMode& mode, int sample_count) {
    if (sample_count < 1) throw ArgumentError("verify_mode: sample_count must be >= 1");
    ResidualReport r;
    const double k1 = mode.k.k1;
    const double k2 = mode.k.k2;
    const double tangential_sq = k1 * k1 + k2 * k2;
    std::array<VerticalProfile, 3> d1, d2;
    for (int c = 0; c < 3; ++c) {
        d1[c] = mode.profiles[c].derivative();
        d2[c] = d1[c].derivative();
    }
    for (int s = 0; s < sample_count; ++s) {
        const unsigned idx = static_cast<unsigned>(s) + 1;
        const double x1 = kTwoPi * radical_inverse(idx, 2);
        const double x2 = kTwoPi * radical_inverse(idx, 3);
        const double x3 = -1.0 + 2.0 * radical_inverse(idx, 5);
        const Phase phase = x3 >= 0.0 ? Phase::upper : Phase::lower;
        const Complex factor = mode.amplitude * tangential_phase(mode.k, mode.drift, 0.0, x1, x2, phase);
        for (int c = 0; c < 3; ++c) {
            const Complex lap = factor * (d2[c].eval(x3, phase) - tangential_sq * mode.profiles[c].eval(x3, phase));
            r.max_harmonic_residual = std::max(r.max_harmonic_residual, std::abs(lap));
        }
        const Complex div = factor * (kI * k1 * mode.profiles[0].eval(x3, phase) +
                                      kI * k2 * mode.profiles[1].eval(x3, phase) +
                                      d1[2].eval(x3, phase));
        r.max_divergence_residual = std::max(r.max_divergence_residual, std::abs(div));

        const Complex wall_top = factor * mode.profiles[2].eval(1.0, Phase::upper);
        const Complex wall_bottom = factor * mode.profiles[2].eval(-1.0, Phase::lower);
        r.wall_bc_residual = std::max({r.wall_bc_residual, std::abs(wall_top), std::abs(wall_bottom)});
        const Complex jump = factor * (mode.profiles[2].eval(0.0, Phase::upper) -
                                       mode.profiles[2].eval(0.0, Phase::lower));
        r.interface_continuity_residual = std::max(r.interface_continuity_residual, std::abs(jump));
    }
    return r;
}

Complex HarmonicPotential::value(double t, double x1, double x3) const {
    const Phase phase = x3 >= 0.0 ? Phase::upper : Phase::lower;
    return tangential_phase({j, 0}, 1.0, t, x1, 0.0, phase) * profile.eval(x3, phase);
}

std::array<Complex, 3> HarmonicPotential::gradient(double t, double x1, double x3) const {
    const Phase phase = x3 >= 0.0 ? Phase::upper : Phase::lower;
    const Complex factor = tangential_phase({j, 0}, 1.0, t, x1, 0.0, phase);
    return {factor * kI * static_cast<double>(j) * profile.eval(x3, phase), Complex{0.0, 0.0},
            factor * profile.derivative().eval(x3, phase)};
}

std::pair<HarmonicPotential, HarmonicPotential> build_harmonic_potentials(int j) {
    if (j < 1) throw ArgumentError("build_harmonic_potentials: j must be >= 1");
    const double jd = j;
    return {HarmonicPotential{j, Parity::odd, odd_potential_profile(jd)},
            HarmonicPotential{j, Parity::even, even_potential_profile(jd)}};
}

double gradient_norm_sq(int j) {
    if (j < 1) throw ArgumentError("gradient_norm_sq: j must be >= 1");
    return kTwoPi * kTwoPi * j * stable_coth(j);
}

}  // namespace khlab
