#pragma once

#include "khlab/grid.hpp"
#include "khlab/profile.hpp"

namespace khlab {

/// Jump data of one tangential mode exp(i k.x) on the interface.
///
/// The lower phase is compared through the slip map, q+(x1) against
/// q-(x1 + shift); shift = 2t for the linearized sheet, 0 for unshifted data.
struct InterfaceData {
    WaveVector k;
    Complex value_jump{0.0, 0.0};  // q+ - q-(. + shift)
    Complex flux_jump{0.0, 0.0};   // dq+/dx3 - dq-/dx3(. + shift)
    double shift = 0.0;
};

/// Harmonic per-mode solution with homogeneous Neumann walls:
///   q+ = A cosh(kappa (x3 - 1)),  q- = B cosh(kappa (x3 + 1)).
/// For value_jump = 0 and shift = 0 this is the reflection construction
/// A = B = -D / (kappa sinh kappa) with D = flux_jump / 2 the per-phase flux.
/// The returned profile holds q+ on the upper and q- on the lower phase.
/// Throws SolvabilityError for k = 0.
VerticalProfile solve_mode_interface_flux(const InterfaceData& data);

enum class SourceSign { as_printed = 1, negated = -1 };

struct FdOptions {
    double shift = 0.0;
    /// Relative tolerance for the discrete compatibility of the mean mode.
    double compatibility_tol = 1e-10;
};

struct FdSolution {
    TwoPhaseGridField q;
    /// Max-norm residual of the discrete system over all tangential modes.
    double residual = 0.0;
    /// |y.b| / (sum |y_i b_i| + data size) for the left null vector y of
    /// the mean mode.
    double compatibility_defect = 0.0;
};

/// Second-order finite-difference solve of
///   Laplace(q) = source           in each phase
///   dq/dx3 = 0                    at x3 = +-1
///   q+ - q-(. + shift) = value_jump      on x3 = 0
///   dq+/dx3 - dq-/dx3(. + shift) = flux_jump
///
/// Centered differences tangentially and vertically; walls and interface
/// use ghost-value elimination so the PDE also holds on those rows and the
/// discrete solvability condition of the mean mode is exactly the
/// trapezoidal one: integral(source) + integral_Gamma(flux_jump) = 0.
/// The additive constant is fixed by zero mean over the slab.
///
/// Throws DimensionError for inconsistent grids or resolution below 8,
/// SolvabilityError for incompatible data, NumericalError when the
/// residual exceeds 1e-10 relative to the data scale.
FdSolution solve_two_phase_poisson_fd(const TwoPhaseGridField& source,
                                      const SurfaceField& value_jump,
                                      const SurfaceField& flux_jump, const FdOptions& options = {});

struct PressureDecomposition {
    TwoPhaseGridField q1;        // harmonic part: flux jump M, zero source
    TwoPhaseGridField q2;        // source part: zero jumps
    TwoPhaseGridField combined;  // direct solve with both data
    double superposition_error = 0.0;  // max |q1 + q2 - combined|
};

/// Splits the two-phase pressure problem into its harmonic and source parts
/// and checks the split against a direct solve of the combined system.
PressureDecomposition pressure_decomposition(const TwoPhaseGridField& source,
                                             const SurfaceField& flux_data,
                                             SourceSign sign = SourceSign::as_printed,
                                             const FdOptions& options = {});

/// Samples Re(profile(x3) exp(i k.x)) of a per-mode solution on a grid.
TwoPhaseGridField sample_mode(const VerticalProfile& q, WaveVector k, GridShape shape);

}  // namespace khlab
