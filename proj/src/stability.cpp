#include "khlab/stability.hpp"

#include <algorithm>
#include <cmath>

namespace khlab {

double sen_gamma_squared(const ShearParams& params, Vec3 k, Vec3 B1, Vec3 B2) {
    params.validate();
    if (norm_sq(k) == 0.0) {
        throw DomainError("sen_gamma_squared: zero wave vector");
    }
    const double n_sum = params.n1 + params.n2;
    const double shear = dot(k, params.u_plus - params.u_minus);
    const double kb1 = dot(k, B1);
    const double kb2 = dot(k, B2);
    return params.n1 * params.n2 / (n_sum * n_sum) * shear * shear -
           (kb1 * kb1 + kb2 * kb2) / (4.0 * kPi * n_sum * params.m_i);
}

double sen_gamma_squared(const ShearParams& params, WaveVector k) {
    return sen_gamma_squared(params, k.as_vec3(), params.h_minus(), params.h_plus());
}

StabilityVerdict check_syrovatskij(Vec3 jump_u, Vec3 h_plus, Vec3 h_minus) {
    StabilityVerdict v;
    const double cross_plus = norm_sq(cross(jump_u, h_plus));
    const double cross_minus = norm_sq(cross(jump_u, h_minus));
    const double field_cross = norm_sq(cross(h_plus, h_minus));
    v.syrovatskij_first = norm_sq(jump_u) <= 2.0 * (norm_sq(h_plus) + norm_sq(h_minus));
    v.syrovatskij_second = cross_plus + cross_minus <= 2.0 * field_cross;
    // Compare squares: max(|x|,|y|) <= |z|  <=>  max(x^2,y^2) <= z^2.
    v.strong_condition = std::max(cross_plus, cross_minus) <= field_cross;
    return v;
}

StabilityVerdict evaluate_stability(const ShearParams& params, WaveVector k) {
    StabilityVerdict v = check_syrovatskij(params.velocity_jump(), params.h_plus(), params.h_minus());
    v.gamma_squared = sen_gamma_squared(params, k);
    v.growing = v.gamma_squared > 0.0;
    return v;
}

namespace {

void require_range(std::span<const double> r, const char* name) {
    if (r.empty()) {
        throw ArgumentError(std::string("stability_map: empty ") + name + " range");
    }
    const bool up = std::is_sorted(r.begin(), r.end());
    const bool down = std::is_sorted(r.begin(), r.end(), std::greater<>());
    if (!up && !down) {
        throw ArgumentError(std::string("stability_map: ") + name + " range is not monotone");
    }
}

}  // namespace

StabilityMap stability_map(const ShearParams& params, std::span<const double> a_range,
                           std::span<const double> b_range, WaveVector k) {
    require_range(a_range, "a");
    require_range(b_range, "b");
    require_nonzero(k, "stability_map");
    StabilityMap map;
    map.a_values.assign(a_range.begin(), a_range.end());
    map.b_values.assign(b_range.begin(), b_range.end());
    map.cells.reserve(a_range.size() * b_range.size());
    ShearParams p = params;
    for (double a : a_range) {
        for (double b : b_range) {
            p.a = a;
            p.b = b;
            map.cells.push_back(evaluate_stability(p, k));
        }
    }
    return map;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw ArgumentError("linspace: count must be >= 1");
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    }
    return out;
}

}  // namespace khlab
