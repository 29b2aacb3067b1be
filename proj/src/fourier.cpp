#include "khlab/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace khlab {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<Complex> in(static_cast<std::size_t>(n) * n), out(in.size());
        fftw_plan plan = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(in.data()),
                                          reinterpret_cast<fftw_complex*>(out.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

void execute(std::span<const Complex> in, std::span<Complex> out, int n, int sign) {
    fftw_plan plan = PlanCache::instance().get(n, sign);
    // FFTW never writes to the input of an out-of-place complex DFT.
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

std::vector<Complex> transform_plane(std::span<const Complex> values, int n) {
    std::vector<Complex> out(values.size());
    execute(values, out, n, FFTW_FORWARD);
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (Complex& c : out) c *= scale;
    return out;
}

std::vector<Complex> transform_plane(std::span<const double> values, int n) {
    std::vector<Complex> in(values.begin(), values.end());
    return transform_plane(std::span<const Complex>(in), n);
}

std::vector<double> inverse_plane_real(std::span<const Complex> coeffs, int n) {
    std::vector<Complex> out(coeffs.size());
    execute(coeffs, out, n, FFTW_BACKWARD);
    std::vector<double> re(out.size());
    std::transform(out.begin(), out.end(), re.begin(), [](Complex c) { return c.real(); });
    return re;
}

TangentialSpectrum::TangentialSpectrum(GridShape shape)
    : shape_(shape), upper_(shape.phase_size()), lower_(shape.phase_size()) {}

std::size_t TangentialSpectrum::index(int m, WaveVector k) const {
    const int n = shape_.n_tan;
    return (static_cast<std::size_t>(m) * n + frequency_index(k.k1, n)) * n +
           frequency_index(k.k2, n);
}

Complex& TangentialSpectrum::at(Phase phase, int m, WaveVector k) {
    return values(phase)[index(m, k)];
}

Complex TangentialSpectrum::at(Phase phase, int m, WaveVector k) const {
    return values(phase)[index(m, k)];
}

TangentialSpectrum::Column TangentialSpectrum::column(WaveVector k) const {
    Column col{std::vector<Complex>(shape_.n_ver), std::vector<Complex>(shape_.n_ver)};
    for (int m = 0; m < shape_.n_ver; ++m) {
        col.upper[m] = at(Phase::upper, m, k);
        col.lower[m] = at(Phase::lower, m, k);
    }
    return col;
}

void TangentialSpectrum::set_column(WaveVector k, const Column& col) {
    for (int m = 0; m < shape_.n_ver; ++m) {
        at(Phase::upper, m, k) = col.upper.at(m);
        at(Phase::lower, m, k) = col.lower.at(m);
    }
}

std::vector<WaveVector> TangentialSpectrum::all_wave_vectors() const {
    const int n = shape_.n_tan;
    std::vector<WaveVector> out;
    out.reserve(shape_.plane_size());
    for (int i1 = 0; i1 < n; ++i1) {
        for (int i2 = 0; i2 < n; ++i2) out.push_back({signed_frequency(i1, n), signed_frequency(i2, n)});
    }
    return out;
}

std::vector<WaveVector> TangentialSpectrum::support(double rel_tol) const {
    double largest = 0.0;
    for (const auto* v : {&upper_, &lower_}) {
        for (Complex c : *v) largest = std::max(largest, std::abs(c));
    }
    std::vector<WaveVector> out;
    if (largest == 0.0) return out;
    for (WaveVector k : all_wave_vectors()) {
        for (int m = 0; m < shape_.n_ver; ++m) {
            if (std::abs(at(Phase::upper, m, k)) > rel_tol * largest ||
                std::abs(at(Phase::lower, m, k)) > rel_tol * largest) {
                out.push_back(k);
                break;
            }
        }
    }
    return out;
}

TangentialSpectrum tangential_transform(const TwoPhaseGridField& f) {
    const GridShape& s = f.shape();
    TangentialSpectrum spec(s);
    const std::size_t plane = s.plane_size();
    for (Phase phase : {Phase::upper, Phase::lower}) {
        const auto& v = f.values(phase);
        auto& out = spec.values(phase);
        for (int m = 0; m < s.n_ver; ++m) {
            auto level = transform_plane(std::span<const double>(v.data() + m * plane, plane), s.n_tan);
            std::copy(level.begin(), level.end(), out.begin() + m * plane);
        }
    }
    return spec;
}

TwoPhaseGridField inverse_tangential_transform(const TangentialSpectrum& spec) {
    const GridShape& s = spec.shape();
    TwoPhaseGridField f(s);
    const std::size_t plane = s.plane_size();
    for (Phase phase : {Phase::upper, Phase::lower}) {
        const auto& c = spec.values(phase);
        auto& out = f.values(phase);
        for (int m = 0; m < s.n_ver; ++m) {
            auto level = inverse_plane_real(std::span<const Complex>(c.data() + m * plane, plane), s.n_tan);
            std::copy(level.begin(), level.end(), out.begin() + m * plane);
        }
    }
    return f;
}

}  // namespace khlab
