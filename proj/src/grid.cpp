#include "khlab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace khlab {

void GridShape::validate() const {
    if (n_tan < 2 || n_ver < 2) {
        throw DimensionError("GridShape: need n_tan >= 2 and n_ver >= 2");
    }
}

TwoPhaseGridField::TwoPhaseGridField(GridShape shape)
    : shape_(shape), upper_(shape.phase_size(), 0.0), lower_(shape.phase_size(), 0.0) {
    shape.validate();
}

TwoPhaseGridField TwoPhaseGridField::sample(GridShape shape, const Sampler& fn) {
    TwoPhaseGridField f(shape);
    for (Phase phase : {Phase::upper, Phase::lower}) {
        for (int m = 0; m < shape.n_ver; ++m) {
            const double x3 = shape.x3(phase, m);
            for (int i1 = 0; i1 < shape.n_tan; ++i1) {
                for (int i2 = 0; i2 < shape.n_tan; ++i2) {
                    f.at(phase, m, i1, i2) = fn(shape.x_tan(i1), shape.x_tan(i2), x3, phase);
                }
            }
        }
    }
    return f;
}

double TwoPhaseGridField::max_abs() const {
    double out = 0.0;
    for (double v : upper_) out = std::max(out, std::abs(v));
    for (double v : lower_) out = std::max(out, std::abs(v));
    return out;
}

void TwoPhaseGridField::require_same_shape(const TwoPhaseGridField& other) const {
    if (!(shape_ == other.shape_)) {
        throw DimensionError("TwoPhaseGridField: grid mismatch");
    }
}

TwoPhaseGridField& TwoPhaseGridField::operator+=(const TwoPhaseGridField& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < upper_.size(); ++i) {
        upper_[i] += other.upper_[i];
        lower_[i] += other.lower_[i];
    }
    return *this;
}

TwoPhaseGridField& TwoPhaseGridField::operator-=(const TwoPhaseGridField& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < upper_.size(); ++i) {
        upper_[i] -= other.upper_[i];
        lower_[i] -= other.lower_[i];
    }
    return *this;
}

TwoPhaseGridField& TwoPhaseGridField::operator*=(double s) {
    for (double& v : upper_) v *= s;
    for (double& v : lower_) v *= s;
    return *this;
}

VectorGridField make_vector_field(GridShape shape) {
    return {TwoPhaseGridField(shape), TwoPhaseGridField(shape), TwoPhaseGridField(shape)};
}

double max_abs(const VectorGridField& f) {
    return std::max({f[0].max_abs(), f[1].max_abs(), f[2].max_abs()});
}

VectorGridField operator+(const VectorGridField& a, const VectorGridField& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

VectorGridField operator-(const VectorGridField& a, const VectorGridField& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

VectorGridField operator*(double s, const VectorGridField& a) {
    return {s * a[0], s * a[1], s * a[2]};
}

SurfaceField SurfaceField::sample(int n, const std::function<double(double, double)>& fn) {
    SurfaceField out(n);
    const double h = kTwoPi / n;
    for (int i1 = 0; i1 < n; ++i1) {
        for (int i2 = 0; i2 < n; ++i2) out.at(i1, i2) = fn(h * i1, h * i2);
    }
    return out;
}

double vertical_weight(const GridShape& shape, int m) {
    const double h = shape.h_ver();
    return (m == 0 || m == shape.n_ver - 1) ? 0.5 * h : h;
}

double inner_product_L2(const TwoPhaseGridField& f, const TwoPhaseGridField& g) {
    if (f.empty() || !(f.shape() == g.shape())) {
        throw DimensionError("inner_product_L2: grid mismatch");
    }
    const GridShape& s = f.shape();
    const double area = s.h_tan() * s.h_tan();
    const std::size_t plane = s.plane_size();
    double total = 0.0;
    for (Phase phase : {Phase::upper, Phase::lower}) {
        const auto& fv = f.values(phase);
        const auto& gv = g.values(phase);
        for (int m = 0; m < s.n_ver; ++m) {
            double level = 0.0;
            const std::size_t base = static_cast<std::size_t>(m) * plane;
            for (std::size_t i = 0; i < plane; ++i) level += fv[base + i] * gv[base + i];
            total += vertical_weight(s, m) * level;
        }
    }
    return total * area;
}

double inner_product_L2(const VectorGridField& f, const VectorGridField& g) {
    return inner_product_L2(f[0], g[0]) + inner_product_L2(f[1], g[1]) +
           inner_product_L2(f[2], g[2]);
}

}  // namespace khlab
