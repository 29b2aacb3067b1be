#pragma once

#include "khlab/types.hpp"

namespace khlab {

/// Coefficients of one phase of a VerticalProfile in the anchored
/// exponential basis: f(x3) = p*exp(kappa*(x3 - top)) + q*exp(-kappa*(x3 - bottom)),
/// where [bottom, top] is the phase interval. Both exponentials are bounded
/// by one on the interval, so evaluation never overflows.
struct AnchoredCoeffs {
    Complex p{0.0, 0.0};
    Complex q{0.0, 0.0};
};

/// Closed-form two-phase vertical profile
///     c_cosh * cosh(kappa*x3) + c_sinh * sinh(kappa*x3)
/// on x3 in [0, 1] (upper) and [-1, 0] (lower).
///
/// Storage is the anchored exponential form above; the cosh/sinh view is
/// available through `cosh_sinh()` for moderate kappa.
class VerticalProfile {
public:
    VerticalProfile() = default;

    /// Throws DomainError unless kappa > 0.
    VerticalProfile(double kappa, AnchoredCoeffs upper, AnchoredCoeffs lower);

    static VerticalProfile from_cosh_sinh(double kappa, Complex upper_cosh, Complex upper_sinh,
                                          Complex lower_cosh, Complex lower_sinh);

    double kappa() const { return kappa_; }
    const AnchoredCoeffs& coeffs(Phase phase) const {
        return phase == Phase::upper ? upper_ : lower_;
    }

    /// Value on the given phase. x3 is not clamped to the phase interval.
    Complex eval(double x3, Phase phase) const;
    /// Value using the upper phase for x3 >= 0 and the lower phase otherwise.
    Complex eval(double x3) const { return eval(x3, x3 >= 0.0 ? Phase::upper : Phase::lower); }

    VerticalProfile derivative() const;
    VerticalProfile scaled(Complex s) const;
    /// Adds dc * cosh(kappa*x3) + ds * sinh(kappa*x3) on one phase.
    VerticalProfile with_added(Phase phase, Complex dc, Complex ds) const;

    struct CoshSinh {
        Complex c_cosh;
        Complex c_sinh;
    };
    CoshSinh cosh_sinh(Phase phase) const;

    friend VerticalProfile operator+(const VerticalProfile& a, const VerticalProfile& b);

private:
    double kappa_ = 1.0;
    AnchoredCoeffs upper_{};
    AnchoredCoeffs lower_{};
};

}  // namespace khlab
