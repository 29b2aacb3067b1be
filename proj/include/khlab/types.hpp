#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace khlab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error hierarchy. Each class maps onto one failure mode the operations
// document; the CLI turns them into exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : Error {
    using Error::Error;
};
struct ArgumentError : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct SolvabilityError : Error {
    using Error::Error;
};
struct StabilityError : Error {
    using Error::Error;
};
struct AliasingError : Error {
    using Error::Error;
};
struct NumericalError : Error {
    using Error::Error;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr double norm_sq(Vec3 a) { return dot(a, a); }
inline double norm(Vec3 a) { return std::sqrt(norm_sq(a)); }

/// Physical configuration of the planar current-vortex sheet.
///
/// The upper fluid (x3 > 0) streams with `u_plus` and carries the transverse
/// field (0, a, 0); the lower fluid streams with `u_minus` and carries
/// (0, b, 0). Densities and ion mass enter only the growth-rate formula.
struct ShearParams {
    Vec3 u_plus{1.0, 0.0, 0.0};
    Vec3 u_minus{-1.0, 0.0, 0.0};
    double a = 0.0;
    double b = 0.0;
    double n1 = 1.0;
    double n2 = 1.0;
    double m_i = 1.0;

    Vec3 h_plus() const { return {0.0, a, 0.0}; }
    Vec3 h_minus() const { return {0.0, b, 0.0}; }
    Vec3 velocity_jump() const { return u_plus - u_minus; }

    /// Throws ArgumentError unless the densities and ion mass are positive
    /// and the field strengths are non-negative.
    void validate() const;
};

/// Integer tangential frequency on T^2 = [0, 2*pi)^2.
struct WaveVector {
    int k1 = 0;
    int k2 = 0;

    bool is_zero() const { return k1 == 0 && k2 == 0; }
    double kappa() const { return std::hypot(static_cast<double>(k1), static_cast<double>(k2)); }
    Vec3 as_vec3() const { return {static_cast<double>(k1), static_cast<double>(k2), 0.0}; }

    friend constexpr bool operator==(WaveVector, WaveVector) = default;
    friend constexpr auto operator<=>(WaveVector, WaveVector) = default;
};

/// Throws DomainError for the zero wave vector.
void require_nonzero(WaveVector k, const char* where);

enum class Phase { upper, lower };

/// coth(x) for x > 0 without overflow for large arguments.
inline double stable_coth(double x) { return 1.0 + 2.0 / std::expm1(2.0 * x); }

std::string to_string(WaveVector k);

}  // namespace khlab
