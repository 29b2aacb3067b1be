#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "khlab/evolution.hpp"
#include "khlab/grid.hpp"
#include "khlab/state.hpp"

namespace khlab {

struct DecompositionOptions {
    /// Relative size below which a coefficient counts as zero.
    double zero_tol = 1e-10;
};

/// Splits (chi, chi_dot) into grad(P) + grad(L) + grad(g) + r.
///
/// The harmonic potential h solves, per tangential mode, Laplace(h) = 0 with
/// dh/dx3 = chi3 on the interface (from each side) and dh/dx3 = 0 at the
/// walls; its odd part in x3 is expanded in the odd family (split at
/// n_cutoff into P and L), its even part in the even family, and
/// r = chi - grad(h) has zero normal trace on the interface and walls.
///
/// Throws ArgumentError when chi3 does not vanish on the walls or the
/// harmonic part has content outside the x1-aligned families (k2 != 0),
/// AliasingError when any component carries energy at the Nyquist
/// frequency, SolvabilityError when the mean of chi3 on the interface is
/// nonzero.
PerturbationState decompose_perturbation(const VectorGridField& chi, const VectorGridField& chi_dot,
                                         int n_cutoff, const DecompositionOptions& options = {});

/// Gradient of the harmonic part (P, L, g blocks) sampled on a grid.
VectorGridField harmonic_gradient(const ModeCoeffs& odd_coeffs, const ModeCoeffs& even_coeffs,
                                  GridShape shape);

/// Inverse of decompose_perturbation: (chi, chi_dot) on the given grid.
std::pair<VectorGridField, VectorGridField> reconstruct(const PerturbationState& state, GridShape shape);

struct FunctionalReport {
    double t = 0.0;
    std::vector<std::pair<double, double>> E_plus;   // (mu, E_mu^+)
    std::vector<std::pair<double, double>> E_minus;  // (mu, E_mu^-)
    double G = 0.0;
    double F = 0.0;
    /// H^2 readout of the high-frequency part, ||A grad(P)||_0.
    double norm_P_H2 = 0.0;

    double e_plus(double mu) const;
    double e_minus(double mu) const;
};

/// Growth functionals
///   E_mu^+- = || A^{mu/2} d_t grad P +- A^{(mu+1)/2} grad P ||_0^2
///   G = ||d_t grad L||^2 + ||A^{1/2} grad L||^2
///   F = ||d_t grad g||^2 + ||A^{1/2} grad g||^2 + ||d_t r||^2 + ||k^{1/2} A^{1/2} r||^2
/// with k = a^2 (upper) / b^2 (lower). Harmonic blocks use the closed-form
/// basis norms; the r terms use grid quadrature.
FunctionalReport compute_functionals(const PerturbationState& state, std::span<const double> mus,
                                     double a, double b, double t = 0.0);

struct TrajectorySample {
    double t = 0.0;
    PerturbationState state;
};
using Trajectory = std::vector<TrajectorySample>;

/// Samples evolve_state(s0, a, b, t) at the given times.
Trajectory simulate(const PerturbationState& s0, double a, double b, std::span<const double> times,
                    Stepper stepper = Stepper::exact());

struct Proposition2Sample {
    double t = 0.0;
    double E1_plus = 0.0;
    double E1_minus = 0.0;
    double F = 0.0;
    double G = 0.0;
    bool growth_dominant = false;  // E1+ >= E1-
    bool dominates_F = false;      // E1+ >= n^3 F
    bool dominates_G = false;      // E1+ >= n^3 G
    bool auxiliary_bounds = false;

    bool in_region() const { return growth_dominant && dominates_F && dominates_G; }
};

struct Proposition2Report {
    int n_cutoff = 1;
    std::vector<Proposition2Sample> samples;
    bool starts_in_region = false;
    bool invariant = false;
    std::optional<double> first_violation_time;
    bool auxiliary_bounds_hold = false;
};

/// Region E1+ >= E1-, E1+ >= n^3 F, E1+ >= n^3 G along a trajectory, plus the
/// auxiliary spectral bounds E_mu^+- >= n^{2(mu-nu)} E_nu^+- (mu = 3/2, 1 over
/// nu = 1, 0) and ||A^mu grad L|| <= (n-1)^{2mu} ||grad L|| (mu = 1/2, 1).
/// Comparisons allow a relative slack of 1e-12. Throws ArgumentError for an
/// empty or unordered trajectory.
Proposition2Report check_proposition2(const Trajectory& trajectory, int n_cutoff, double a = 0.0,
                                      double b = 0.0);

struct GrowthReport {
    bool holds = false;
    /// E1+(t) / (E1+(0) exp(n t)) per sample.
    std::vector<std::pair<double, double>> margins;
};

/// E1+(t) >= E1+(0) exp(n t) (1 - tol) at every sample. Throws
/// ArgumentError for an empty trajectory, DomainError when E1+(0) = 0.
GrowthReport check_growth_corollary(const Trajectory& trajectory, int n_cutoff, double tol = 1e-8);

/// Initial data of the vanishing-size growing family: chi = 0 and
/// chi_dot = scale * exp(-sqrt(n)) * Re(exp(i n x1) (V, 0, W)(x3)).
/// Throws ArgumentError for n < 1 and DimensionError when the grid does not
/// resolve frequency n.
std::pair<VectorGridField, VectorGridField> perturbed_initial_data(int n, double scale, GridShape shape);

}  // namespace khlab
