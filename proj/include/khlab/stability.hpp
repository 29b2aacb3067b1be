#pragma once

#include <span>
#include <vector>

#include "khlab/types.hpp"

namespace khlab {

struct StabilityVerdict {
    double gamma_squared = 0.0;
    bool growing = false;
    bool syrovatskij_first = false;
    bool syrovatskij_second = false;
    bool strong_condition = false;
};

/// Squared growth rate of the incompressible current-vortex sheet
///
///   n1 n2/(n1+n2)^2 [k.(U2-U1)]^2 - [(k.B1)^2 + (k.B2)^2] / (4 pi (n1+n2) m_i)
///
/// with side 1 = lower (u_minus, b) and side 2 = upper (u_plus, a).
double sen_gamma_squared(const ShearParams& params, Vec3 k, Vec3 B1, Vec3 B2);

/// Shorthand using the transverse fields carried by `params`.
double sen_gamma_squared(const ShearParams& params, WaveVector k);

/// Syrovatskij pair and the strong stability condition, all non-strict.
/// Only the condition flags of the verdict are filled in.
StabilityVerdict check_syrovatskij(Vec3 jump_u, Vec3 h_plus, Vec3 h_minus);

/// Full verdict for one configuration and wave vector.
StabilityVerdict evaluate_stability(const ShearParams& params, WaveVector k);

struct StabilityMap {
    std::vector<double> a_values;
    std::vector<double> b_values;
    /// Row-major in a: cell (i, j) is a_values[i], b_values[j].
    std::vector<StabilityVerdict> cells;

    const StabilityVerdict& at(std::size_t i, std::size_t j) const {
        return cells[i * b_values.size() + j];
    }
};

/// Sweeps (a, b) with every other field of `params` fixed. Throws
/// ArgumentError for empty or non-monotone ranges.
StabilityMap stability_map(const ShearParams& params, std::span<const double> a_range,
                           std::span<const double> b_range, WaveVector k);

/// count evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace khlab
