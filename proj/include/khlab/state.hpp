#pragma once

#include <map>
#include <optional>

#include "khlab/grid.hpp"

namespace khlab {

/// Spectral coefficients of the harmonic families, keyed by frequency j.
/// The field of coefficient c is Re(c * basis_j).
using ModeCoeffs = std::map<int, Complex>;

/// Four-part decomposition of a perturbation and its time derivative:
///   chi = grad(P) + grad(L) + grad(g) + r
/// P holds odd potentials with j >= n_cutoff, L those with 1 <= j < n_cutoff,
/// g the even potentials, and r a grid field with zero normal trace on the
/// interface and walls. Basis elements are taken at their t = 0 phase.
struct PerturbationState {
    int n_cutoff = 1;
    ModeCoeffs P, L, g;
    ModeCoeffs P_dot, L_dot, g_dot;
    /// Remaining part and its time derivative; absent means zero.
    std::optional<VectorGridField> r, r_dot;

    /// Throws ArgumentError when a coefficient sits in the wrong block,
    /// r and r_dot disagree in presence or grid, or r3 is nonzero on
    /// x3 in {-1, 0, 1}.
    void validate() const;

    /// Largest frequency present in any block (0 when all are empty).
    int max_frequency() const;
};

}  // namespace khlab
