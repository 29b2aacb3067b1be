#include "khlab/profile.hpp"

#include <cmath>

namespace khlab {

namespace {

double top_of(Phase phase) { return phase == Phase::upper ? 1.0 : 0.0; }
double bottom_of(Phase phase) { return phase == Phase::upper ? 0.0 : -1.0; }

AnchoredCoeffs anchored_from_exponential(double kappa, Phase phase, Complex alpha, Complex beta) {
    // alpha*exp(kappa*x) + beta*exp(-kappa*x)
    return {alpha * std::exp(kappa * top_of(phase)), beta * std::exp(-kappa * bottom_of(phase))};
}

}  // namespace

VerticalProfile::VerticalProfile(double kappa, AnchoredCoeffs upper, AnchoredCoeffs lower)
    : kappa_(kappa), upper_(upper), lower_(lower) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw DomainError("VerticalProfile: kappa must be positive and finite");
    }
}

VerticalProfile VerticalProfile::from_cosh_sinh(double kappa, Complex upper_cosh,
                                                Complex upper_sinh, Complex lower_cosh,
                                                Complex lower_sinh) {
    auto conv = [kappa](Phase ph, Complex c, Complex s) {
        return anchored_from_exponential(kappa, ph, 0.5 * (c + s), 0.5 * (c - s));
    };
    return VerticalProfile(kappa, conv(Phase::upper, upper_cosh, upper_sinh),
                           conv(Phase::lower, lower_cosh, lower_sinh));
}

Complex VerticalProfile::eval(double x3, Phase phase) const {
    const AnchoredCoeffs& c = coeffs(phase);
    return c.p * std::exp(kappa_ * (x3 - top_of(phase))) +
           c.q * std::exp(-kappa_ * (x3 - bottom_of(phase)));
}

VerticalProfile VerticalProfile::derivative() const {
    auto d = [this](const AnchoredCoeffs& c) {
        return AnchoredCoeffs{kappa_ * c.p, -kappa_ * c.q};
    };
    return VerticalProfile(kappa_, d(upper_), d(lower_));
}

VerticalProfile VerticalProfile::scaled(Complex s) const {
    return VerticalProfile(kappa_, {s * upper_.p, s * upper_.q}, {s * lower_.p, s * lower_.q});
}

VerticalProfile VerticalProfile::with_added(Phase phase, Complex dc, Complex ds) const {
    AnchoredCoeffs add = anchored_from_exponential(kappa_, phase, 0.5 * (dc + ds), 0.5 * (dc - ds));
    VerticalProfile out = *this;
    AnchoredCoeffs& target = phase == Phase::upper ? out.upper_ : out.lower_;
    target.p += add.p;
    target.q += add.q;
    return out;
}

VerticalProfile::CoshSinh VerticalProfile::cosh_sinh(Phase phase) const {
    const AnchoredCoeffs& c = coeffs(phase);
    const Complex alpha = c.p * std::exp(-kappa_ * top_of(phase));
    const Complex beta = c.q * std::exp(kappa_ * bottom_of(phase));
    return {alpha + beta, alpha - beta};
}

VerticalProfile operator+(const VerticalProfile& a, const VerticalProfile& b) {
    if (a.kappa_ != b.kappa_) {
        throw DimensionError("VerticalProfile: cannot add profiles with different kappa");
    }
    return VerticalProfile(a.kappa_, {a.upper_.p + b.upper_.p, a.upper_.q + b.upper_.q},
                           {a.lower_.p + b.lower_.p, a.lower_.q + b.lower_.q});
}

}  // namespace khlab
