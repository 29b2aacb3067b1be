#include "khlab/pressure.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "khlab/fourier.hpp"
#include "khlab/parallel.hpp"

namespace khlab {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

VerticalProfile solve_mode_interface_flux(const InterfaceData& data) {
    if (data.k.is_zero()) {
        throw SolvabilityError(
            "solve_mode_interface_flux: the k = 0 Neumann problem is determined only up to "
            "constants and needs compatible data");
    }
    const double kappa = data.k.kappa();
    // e^kappa / cosh(kappa) and e^kappa / sinh(kappa), overflow-free.
    const double e2 = std::exp(-2.0 * kappa);
    const double exp_sech = 2.0 / (1.0 + e2);
    const double exp_csch = -2.0 / std::expm1(-2.0 * kappa);
    // A e^kappa and B~ e^kappa with B~ = B exp(i k1 shift).
    const Complex a_scaled =
        0.5 * (data.value_jump * exp_sech - data.flux_jump * exp_csch / kappa);
    const Complex b_shifted_scaled =
        0.5 * (-data.value_jump * exp_sech - data.flux_jump * exp_csch / kappa);
    const Complex b_scaled = b_shifted_scaled * std::exp(-kI * (data.k.k1 * data.shift));
    // A cosh(kappa (x3 - 1)) = (A/2) e^{kappa (x3 - 1)} + (A e^kappa / 2) e^{-kappa x3}
    // B cosh(kappa (x3 + 1)) = (B e^kappa / 2) e^{kappa x3} + (B/2) e^{-kappa (x3 + 1)}
    const double decay = std::exp(-kappa);
    AnchoredCoeffs upper{0.5 * a_scaled * decay, 0.5 * a_scaled};
    AnchoredCoeffs lower{0.5 * b_scaled, 0.5 * b_scaled * decay};
    return VerticalProfile(kappa, upper, lower);
}

TwoPhaseGridField sample_mode(const VerticalProfile& q, WaveVector k, GridShape shape) {
    return TwoPhaseGridField::sample(shape, [&](double x1, double x2, double x3, Phase phase) {
        return (q.eval(x3, phase) * std::exp(kI * (k.k1 * x1 + k.k2 * x2))).real();
    });
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Vector = Eigen::VectorXcd;

// One tangential mode of the discrete system. Unknown layout:
//   [0, N]        upper levels 0..N
//   [N+1, 2N+1]   lower levels 0..N
//   2N+2, 2N+3    interface normal derivatives D+, D- (ghost elimination)
//   2N+4          Lagrange multiplier (mean mode only)
struct ModeSystem {
    int levels;  // N + 1
    double h;
    double symbol;  // discrete -(d^2/dx1^2 + d^2/dx2^2)
    Complex slip;   // exp(i k1 shift)
    bool mean_mode;

    int n_unknowns() const { return 2 * levels + 2 + (mean_mode ? 1 : 0); }
    int upper(int m) const { return m; }
    int lower(int m) const { return levels + m; }
    int d_plus() const { return 2 * levels; }
    int d_minus() const { return 2 * levels + 1; }
    int multiplier() const { return 2 * levels + 2; }
    int value_row() const { return 2 * levels; }
    int flux_row() const { return 2 * levels + 1; }
    int gauge_row() const { return 2 * levels + 2; }
};

// Trapezoid weights of the levels; also the PDE-row part of the left null
// vector of the mean mode.
std::vector<double> level_weights(int levels, double h) {
    std::vector<double> w(levels, h);
    w.front() = w.back() = 0.5 * h;
    return w;
}

SparseMatrix assemble(const ModeSystem& sys) {
    const int n = sys.n_unknowns();
    const double ih2 = 1.0 / (sys.h * sys.h);
    const int last = sys.levels - 1;
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(static_cast<std::size_t>(n) * 4);
    auto phase_rows = [&](auto index, int ghost, double ghost_sign) {
        for (int m = 0; m <= last; ++m) {
            const int row = index(m);
            t.emplace_back(row, index(m), -2.0 * ih2 - sys.symbol);
            if (m == 0) {
                // q_{-1} = q_1 - ghost_sign * 2h D
                t.emplace_back(row, index(1), 2.0 * ih2);
                t.emplace_back(row, ghost, -ghost_sign * 2.0 * sys.h * ih2);
            } else if (m == last) {
                // q_{N+1} = q_{N-1}
                t.emplace_back(row, index(m - 1), 2.0 * ih2);
            } else {
                t.emplace_back(row, index(m - 1), ih2);
                t.emplace_back(row, index(m + 1), ih2);
            }
        }
    };
    phase_rows([&](int m) { return sys.upper(m); }, sys.d_plus(), 1.0);
    phase_rows([&](int m) { return sys.lower(m); }, sys.d_minus(), -1.0);
    t.emplace_back(sys.value_row(), sys.upper(0), 1.0);
    t.emplace_back(sys.value_row(), sys.lower(0), -sys.slip);
    t.emplace_back(sys.flux_row(), sys.d_plus(), 1.0);
    t.emplace_back(sys.flux_row(), sys.d_minus(), -sys.slip);
    if (sys.mean_mode) {
        const auto w = level_weights(sys.levels, sys.h);
        for (int m = 0; m <= last; ++m) {
            t.emplace_back(sys.upper(m), sys.multiplier(), w[m]);
            t.emplace_back(sys.lower(m), sys.multiplier(), w[m]);
            t.emplace_back(sys.gauge_row(), sys.upper(m), w[m]);
            t.emplace_back(sys.gauge_row(), sys.lower(m), w[m]);
        }
        t.emplace_back(sys.flux_row(), sys.multiplier(), 1.0);
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    a.makeCompressed();
    return a;
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

double matrix_inf_norm(const SparseMatrix& a) {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
    for (int c = 0; c < a.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(a, c); it; ++it) rows[it.row()] += std::abs(it.value());
    }
    return rows.maxCoeff();
}

}  // namespace

FdSolution solve_two_phase_poisson_fd(const TwoPhaseGridField& source,
                                      const SurfaceField& value_jump,
                                      const SurfaceField& flux_jump, const FdOptions& options) {
    const GridShape shape = source.shape();
    if (source.empty() || value_jump.n_tan != shape.n_tan || flux_jump.n_tan != shape.n_tan) {
        throw DimensionError("solve_two_phase_poisson_fd: grid mismatch");
    }
    if (shape.n_tan < 8 || shape.n_ver < 8) {
        throw DimensionError("solve_two_phase_poisson_fd: need at least 8 points per direction");
    }
    const int n = shape.n_tan;
    const int levels = shape.n_ver;
    const double h = shape.h_ver();
    const double dx = shape.h_tan();

    const TangentialSpectrum src = tangential_transform(source);
    const auto gamma1 = transform_plane(std::span<const double>(value_jump.values), n);
    const auto gamma2 = transform_plane(std::span<const double>(flux_jump.values), n);
    auto surface_max = [](const SurfaceField& f) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    };
    // Mean-mode coefficients are tiny or zero for data without a mean, so
    // the defect is measured against the overall data size as well.
    const double data_scale = source.max_abs() + surface_max(value_jump) + surface_max(flux_jump);

    // Modes sharing a matrix share one factorization. Without a shift the
    // matrix depends only on the tangential symbol, which is symmetric
    // under sign flips and k1 <-> k2.
    const bool shifted = options.shift != 0.0;
    std::map<std::pair<int, int>, std::vector<WaveVector>> groups;
    for (WaveVector k : src.all_wave_vectors()) {
        std::pair<int, int> key;
        if (shifted) {
            key = {k.k1, std::abs(k.k2)};
        } else {
            key = {std::min(std::abs(k.k1), std::abs(k.k2)), std::max(std::abs(k.k1), std::abs(k.k2))};
        }
        groups[key].push_back(k);
    }
    std::vector<std::vector<WaveVector>> work;
    work.reserve(groups.size());
    for (auto& [key, modes] : groups) work.push_back(std::move(modes));

    TangentialSpectrum out(shape);
    std::vector<double> residuals(work.size(), 0.0);
    std::vector<double> backward(work.size(), 0.0);
    double defect = 0.0;

    parallel_for(work.size(), [&](std::size_t g) {
        const WaveVector rep = work[g].front();
        const double s1 = std::sin(0.5 * rep.k1 * dx);
        const double s2 = std::sin(0.5 * rep.k2 * dx);
        ModeSystem sys{levels, h, 4.0 / (dx * dx) * (s1 * s1 + s2 * s2),
                       std::exp(kI * (rep.k1 * options.shift)), rep.is_zero()};
        const SparseMatrix a = assemble(sys);
        Eigen::SparseLU<SparseMatrix> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success) {
            throw NumericalError("solve_two_phase_poisson_fd: factorization failed for mode " +
                                 to_string(rep));
        }
        const double a_norm = matrix_inf_norm(a);
        for (WaveVector k : work[g]) {
            Vector b = Vector::Zero(sys.n_unknowns());
            for (int m = 0; m < levels; ++m) {
                b[sys.upper(m)] = src.at(Phase::upper, m, k);
                b[sys.lower(m)] = src.at(Phase::lower, m, k);
            }
            const std::size_t plane_idx =
                static_cast<std::size_t>(frequency_index(k.k1, n)) * n + frequency_index(k.k2, n);
            b[sys.value_row()] = gamma1[plane_idx];
            b[sys.flux_row()] = gamma2[plane_idx];
            const Vector x = lu.solve(b);
            if (sys.mean_mode) {
                // The multiplier measures the component of b along the left
                // null vector (w, w, 0, 1); it vanishes for compatible data.
                const auto w = level_weights(levels, h);
                double y_dot_b = std::abs(b[sys.flux_row()]);
                Complex acc = b[sys.flux_row()];
                for (int m = 0; m < levels; ++m) {
                    acc += w[m] * (b[sys.upper(m)] + b[sys.lower(m)]);
                    y_dot_b += w[m] * (std::abs(b[sys.upper(m)]) + std::abs(b[sys.lower(m)]));
                }
                const double denom = y_dot_b + data_scale;
                defect = denom > 0.0 ? std::abs(acc) / denom : 0.0;
                if (defect > options.compatibility_tol) {
                    throw SolvabilityError(
                        "solve_two_phase_poisson_fd: incompatible pure-Neumann data (relative defect " +
                        std::to_string(defect) + ")");
                }
            }
            const Vector r = a * x - b;
            residuals[g] = std::max(residuals[g], max_abs(r));
            backward[g] = std::max(backward[g], max_abs(r) / (a_norm * max_abs(x) + max_abs(b) + 1e-300));
            TangentialSpectrum::Column col{std::vector<Complex>(levels), std::vector<Complex>(levels)};
            for (int m = 0; m < levels; ++m) {
                col.upper[m] = x[sys.upper(m)];
                col.lower[m] = x[sys.lower(m)];
            }
            out.set_column(k, col);
        }
    });

    FdSolution sol;
    sol.q = inverse_tangential_transform(out);
    sol.residual = *std::max_element(residuals.begin(), residuals.end());
    sol.compatibility_defect = defect;
    if (*std::max_element(backward.begin(), backward.end()) > 1e-10) {
        throw NumericalError("solve_two_phase_poisson_fd: residual above tolerance");
    }
    return sol;
}

PressureDecomposition pressure_decomposition(const TwoPhaseGridField& source,
                                             const SurfaceField& flux_data, SourceSign sign,
                                             const FdOptions& options) {
    const GridShape shape = source.shape();
    const double s = static_cast<double>(static_cast<int>(sign));
    const TwoPhaseGridField signed_source = s * source;
    const SurfaceField zero_surface(shape.n_tan);
    const TwoPhaseGridField zero_source(shape);

    PressureDecomposition out;
    out.q1 = solve_two_phase_poisson_fd(zero_source, zero_surface, flux_data, options).q;
    out.q2 = solve_two_phase_poisson_fd(signed_source, zero_surface, zero_surface, options).q;
    out.combined = solve_two_phase_poisson_fd(signed_source, zero_surface, flux_data, options).q;
    out.superposition_error = (out.q1 + out.q2 - out.combined).max_abs();
    return out;
}

}  // namespace khlab
