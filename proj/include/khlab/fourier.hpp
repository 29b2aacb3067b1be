#pragma once

#include <span>
#include <vector>

#include "khlab/grid.hpp"

namespace khlab {

/// Signed wave number for FFT index i on an n-point periodic grid; the
/// Nyquist index n/2 maps to -n/2.
inline int signed_frequency(int i, int n) { return i < (n + 1) / 2 ? i : i - n; }
inline int frequency_index(int k, int n) { return ((k % n) + n) % n; }

/// Per-level tangential Fourier coefficients of a TwoPhaseGridField,
/// normalized so that f(x) = sum_k c_k exp(i k.x).
class TangentialSpectrum {
public:
    TangentialSpectrum() = default;
    explicit TangentialSpectrum(GridShape shape);

    const GridShape& shape() const { return shape_; }

    Complex& at(Phase phase, int m, WaveVector k);
    Complex at(Phase phase, int m, WaveVector k) const;

    struct Column {
        std::vector<Complex> upper;
        std::vector<Complex> lower;
    };
    /// Vertical coefficient arrays of one wave vector, indexed by level.
    Column column(WaveVector k) const;
    void set_column(WaveVector k, const Column& col);

    /// Wave vectors whose coefficient magnitude exceeds rel_tol times the
    /// largest coefficient, in FFT index order.
    std::vector<WaveVector> support(double rel_tol = 1e-12) const;
    /// Every representable wave vector in FFT index order.
    std::vector<WaveVector> all_wave_vectors() const;

    std::vector<Complex>& values(Phase phase) { return phase == Phase::upper ? upper_ : lower_; }
    const std::vector<Complex>& values(Phase phase) const {
        return phase == Phase::upper ? upper_ : lower_;
    }

private:
    std::size_t index(int m, WaveVector k) const;

    GridShape shape_{};
    std::vector<Complex> upper_;
    std::vector<Complex> lower_;
};

TangentialSpectrum tangential_transform(const TwoPhaseGridField& f);
/// Inverse transform; the imaginary part of the synthesis is discarded.
TwoPhaseGridField inverse_tangential_transform(const TangentialSpectrum& spec);

/// Forward/inverse 2D DFT of one n x n plane with the same normalization.
std::vector<Complex> transform_plane(std::span<const double> values, int n);
std::vector<Complex> transform_plane(std::span<const Complex> values, int n);
std::vector<double> inverse_plane_real(std::span<const Complex> coeffs, int n);

}  // namespace khlab
