#include "khlab/types.hpp"

namespace khlab {

void ShearParams::validate() const {
    if (!(n1 > 0.0) || !(n2 > 0.0)) {
        throw ArgumentError("ShearParams: number densities must be positive");
    }
    if (!(m_i > 0.0)) {
        throw ArgumentError("ShearParams: ion mass must be positive");
    }
    if (!(a >= 0.0) || !(b >= 0.0)) {
        throw ArgumentError("ShearParams: field strengths must be non-negative");
    }
}

void require_nonzero(WaveVector k, const char* where) {
    if (k.is_zero()) {
        throw DomainError(std::string(where) + ": zero wave vector");
    }
}

std::string to_string(WaveVector k) {
    return "(" + std::to_string(k.k1) + "," + std::to_string(k.k2) + ")";
}

}  // namespace khlab
