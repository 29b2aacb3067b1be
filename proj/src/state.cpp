#include "khlab/state.hpp"

#include <algorithm>
#include <limits>

namespace khlab {

namespace {

void require_keys(const ModeCoeffs& c, int lo, int hi, const char* block) {
    for (const auto& [j, value] : c) {
        if (j < lo || j >= hi) {
            throw ArgumentError(std::string("PerturbationState: frequency ") + std::to_string(j) +
                                " does not belong to block " + block);
        }
        (void)value;
    }
}

void require_zero_normal_trace(const VectorGridField& r, const char* name) {
    const TwoPhaseGridField& r3 = r[2];
    const GridShape& s = r3.shape();
    const std::size_t plane = s.plane_size();
    for (Phase phase : {Phase::upper, Phase::lower}) {
        const auto& v = r3.values(phase);
        for (int m : {0, s.n_ver - 1}) {
            for (std::size_t i = 0; i < plane; ++i) {
                if (v[m * plane + i] != 0.0) {
                    throw ArgumentError(std::string("PerturbationState: ") + name +
                                        " has nonzero normal component on a boundary row");
                }
            }
        }
    }
}

}  // namespace

void PerturbationState::validate() const {
    if (n_cutoff < 1) throw ArgumentError("PerturbationState: n_cutoff must be >= 1");
    constexpr int kInf = std::numeric_limits<int>::max();
    require_keys(P, n_cutoff, kInf, "P");
    require_keys(P_dot, n_cutoff, kInf, "P");
    require_keys(L, 1, n_cutoff, "L");
    require_keys(L_dot, 1, n_cutoff, "L");
    require_keys(g, 1, kInf, "g");
    require_keys(g_dot, 1, kInf, "g");
    if (r.has_value() != r_dot.has_value()) {
        throw ArgumentError("PerturbationState: r and r_dot must both be present or both absent");
    }
    if (r) {
        if (!((*r)[0].shape() == (*r_dot)[0].shape())) {
            throw ArgumentError("PerturbationState: r and r_dot live on different grids");
        }
        require_zero_normal_trace(*r, "r");
        require_zero_normal_trace(*r_dot, "r_dot");
    }
}

int PerturbationState::max_frequency() const {
    int out = 0;
    for (const ModeCoeffs* c : {&P, &L, &g, &P_dot, &L_dot, &g_dot}) {
        if (!c->empty()) out = std::max(out, c->rbegin()->first);
    }
    return out;
}

}  // namespace khlab
