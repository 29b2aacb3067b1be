#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "khlab/types.hpp"

namespace khlab {

/// Uniform two-phase grid on T^2 x (-1, 1).
///
/// Tangential nodes x1 = 2*pi*i/n_tan (same for x2). Vertical level m runs
/// from 0 (interface, x3 = 0) to n_ver - 1 (wall), with x3 = +m*h in the
/// upper phase and x3 = -m*h in the lower phase, h = 1/(n_ver - 1). The
/// interface row is stored once per phase so jumps are representable.
struct GridShape {
    int n_tan = 0;
    int n_ver = 0;

    double h_tan() const { return kTwoPi / n_tan; }
    double h_ver() const { return 1.0 / (n_ver - 1); }
    std::size_t plane_size() const { return static_cast<std::size_t>(n_tan) * n_tan; }
    std::size_t phase_size() const { return plane_size() * n_ver; }
    double x_tan(int i) const { return h_tan() * i; }
    double x3(Phase phase, int m) const {
        return phase == Phase::upper ? m * h_ver() : -m * h_ver();
    }

    /// Throws DimensionError for n_tan < 2 or n_ver < 2.
    void validate() const;

    friend constexpr bool operator==(GridShape, GridShape) = default;
};

/// Real scalar field sampled on a GridShape, one array per phase, each laid
/// out as [level][i1][i2].
class TwoPhaseGridField {
public:
    TwoPhaseGridField() = default;
    explicit TwoPhaseGridField(GridShape shape);

    using Sampler = std::function<double(double x1, double x2, double x3, Phase phase)>;
    static TwoPhaseGridField sample(GridShape shape, const Sampler& fn);

    const GridShape& shape() const { return shape_; }
    bool empty() const { return shape_.n_tan == 0; }

    std::size_t index(int m, int i1, int i2) const {
        return (static_cast<std::size_t>(m) * shape_.n_tan + i1) * shape_.n_tan + i2;
    }
    double& at(Phase phase, int m, int i1, int i2) { return values(phase)[index(m, i1, i2)]; }
    double at(Phase phase, int m, int i1, int i2) const { return values(phase)[index(m, i1, i2)]; }

    std::vector<double>& values(Phase phase) { return phase == Phase::upper ? upper_ : lower_; }
    const std::vector<double>& values(Phase phase) const {
        return phase == Phase::upper ? upper_ : lower_;
    }

    double max_abs() const;
    TwoPhaseGridField& operator+=(const TwoPhaseGridField& other);
    TwoPhaseGridField& operator-=(const TwoPhaseGridField& other);
    TwoPhaseGridField& operator*=(double s);

    friend TwoPhaseGridField operator+(TwoPhaseGridField a, const TwoPhaseGridField& b) { return a += b; }
    friend TwoPhaseGridField operator-(TwoPhaseGridField a, const TwoPhaseGridField& b) { return a -= b; }
    friend TwoPhaseGridField operator*(double s, TwoPhaseGridField a) { return a *= s; }

private:
    void require_same_shape(const TwoPhaseGridField& other) const;

    GridShape shape_{};
    std::vector<double> upper_;
    std::vector<double> lower_;
};

using VectorGridField = std::array<TwoPhaseGridField, 3>;

VectorGridField make_vector_field(GridShape shape);
double max_abs(const VectorGridField& f);
VectorGridField operator+(const VectorGridField& a, const VectorGridField& b);
VectorGridField operator-(const VectorGridField& a, const VectorGridField& b);
VectorGridField operator*(double s, const VectorGridField& a);

/// Real function on the interface plane Gamma, laid out as [i1][i2].
struct SurfaceField {
    int n_tan = 0;
    std::vector<double> values;

    SurfaceField() = default;
    explicit SurfaceField(int n) : n_tan(n), values(static_cast<std::size_t>(n) * n, 0.0) {}
    static SurfaceField sample(int n, const std::function<double(double, double)>& fn);

    double& at(int i1, int i2) { return values[static_cast<std::size_t>(i1) * n_tan + i2]; }
    double at(int i1, int i2) const { return values[static_cast<std::size_t>(i1) * n_tan + i2]; }
};

/// Trapezoidal quadrature of the integral of f*g over both phases.
/// Throws DimensionError when the grids differ.
double inner_product_L2(const TwoPhaseGridField& f, const TwoPhaseGridField& g);
double inner_product_L2(const VectorGridField& f, const VectorGridField& g);
inline double norm_sq_L2(const VectorGridField& f) { return inner_product_L2(f, f); }

/// Vertical trapezoid weight for level m of a phase with n_ver levels.
double vertical_weight(const GridShape& shape, int m);

}  // namespace khlab
