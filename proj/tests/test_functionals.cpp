#include <vector>

#include "doctest.h"
#include "khlab/eigenmodes.hpp"
#include "khlab/functionals.hpp"
#include "support.hpp"

using namespace khlab;
using khlab::testing::Rng;
using khlab::testing::centered_diff;
using khlab::testing::fit_slope;

namespace {

const std::vector<double> kMus{0.0, 0.5, 1.0, 1.5};

// Closed-form parity potentials: the odd one is -cosh(j(1 - x3))/sinh j above
// the interface and its mirror negated below; the even one is not negated.
struct ClosedForm {
    int j;
    bool odd;

    double sign(Phase ph) const { return (odd && ph == Phase::upper) ? -1.0 : 1.0; }
    Complex phi(double x3, Phase ph) const {
        const double s = ph == Phase::upper ? 1.0 - x3 : 1.0 + x3;
        return sign(ph) * std::cosh(j * s) / std::sinh(j);
    }
    Complex dphi(double x3, Phase ph) const {
        const double s = ph == Phase::upper ? 1.0 - x3 : 1.0 + x3;
        const double ds = ph == Phase::upper ? -1.0 : 1.0;
        return sign(ph) * j * ds * std::sinh(j * s) / std::sinh(j);
    }
};

VectorGridField closed_form_gradient(GridShape s, ClosedForm p, Complex c) {
    VectorGridField out = make_vector_field(s);
    out[0] = TwoPhaseGridField::sample(s, [&](double x1, double, double x3, Phase ph) {
        return (c * Complex(0, p.j) * std::exp(Complex(0, p.j * x1)) * p.phi(x3, ph)).real();
    });
    out[2] = TwoPhaseGridField::sample(s, [&](double x1, double, double x3, Phase ph) {
        return (c * std::exp(Complex(0, p.j * x1)) * p.dphi(x3, ph)).real();
    });
    return out;
}

// Zero normal trace on the interface and walls; mixes k2 != 0 modes.
VectorGridField sample_r(GridShape s, double amp, int shift) {
    VectorGridField r = make_vector_field(s);
    r[0] = TwoPhaseGridField::sample(s, [=](double x1, double x2, double x3, Phase) {
        return amp * (std::cos(x2 + shift) * (1.0 - x3) + 0.5 * std::sin(2 * x1 - x2));
    });
    r[1] = TwoPhaseGridField::sample(s, [=](double x1, double x2, double x3, Phase ph) {
        return amp * std::sin(x1 + 3 * x2) * (ph == Phase::upper ? x3 : 2.0 * x3 * x3);
    });
    r[2] = TwoPhaseGridField::sample(s, [=](double x1, double x2, double x3, Phase) {
        if (x3 == 0.0 || std::abs(x3) == 1.0) return 0.0;
        return amp * std::sin(kPi * x3) * std::cos(2 * x1 + x2 + shift);
    });
    return r;
}

double coeff_error(const ModeCoeffs& got, const ModeCoeffs& want) {
    double err = got.size() == want.size() ? 0.0 : INFINITY;
    for (const auto& [j, c] : want) {
        const auto it = got.find(j);
        err = std::max(err, it == got.end() ? INFINITY : std::abs(it->second - c));
    }
    return err;
}

PerturbationState growing(int j, Complex c, int n_cutoff) {
    PerturbationState s;
    s.n_cutoff = n_cutoff;
    s.P[j] = c;
    s.P_dot[j] = double(j) * c;
    return s;
}

}  // namespace

TEST_SUITE("decomposition") {
    const GridShape shape{32, 17};

    TEST_CASE("gradient of a single odd potential lands in P") {
        const Complex c{0.7, -0.2};
        const VectorGridField chi = closed_form_gradient(shape, {5, true}, c);
        const PerturbationState s = decompose_perturbation(chi, make_vector_field(shape), 3);
        CHECK(coeff_error(s.P, {{5, c}}) < 1e-12);
        CHECK(s.L.empty());
        CHECK(s.g.empty());
        CHECK(max_abs(*s.r) < 1e-12);
    }

    TEST_CASE("odd potential below the cutoff lands in L") {
        const VectorGridField chi = closed_form_gradient(shape, {2, true}, 1.0);
        const PerturbationState s = decompose_perturbation(chi, make_vector_field(shape), 3);
        CHECK(coeff_error(s.L, {{2, 1.0}}) < 1e-12);
        CHECK(s.P.empty());
    }

    TEST_CASE("gradient of an even potential lands in g") {
        const Complex c{-0.3, 1.1};
        const VectorGridField chi_dot = closed_form_gradient(shape, {2, false}, c);
        const PerturbationState s = decompose_perturbation(make_vector_field(shape), chi_dot, 1);
        CHECK(coeff_error(s.g_dot, {{2, c}}) < 1e-12);
        CHECK(s.P_dot.empty());
        CHECK(s.g.empty());
    }

    TEST_CASE("remaining part is recovered exactly") {
        const VectorGridField r = sample_r(shape, 0.8, 0);
        const VectorGridField chi = closed_form_gradient(shape, {5, true}, 1.0) + r;
        const PerturbationState s = decompose_perturbation(chi, r, 2);
        CHECK(coeff_error(s.P, {{5, 1.0}}) < 1e-12);
        CHECK(max_abs(*s.r - r) < 1e-12);
        CHECK(max_abs(*s.r_dot - r) < 1e-12);
        CHECK(s.P_dot.empty());
    }

    TEST_CASE("property: reconstruct then decompose is the identity") {
        Rng rng(2024);
        const GridShape g{16, 9};
        for (int trial = 0; trial < 25; ++trial) {
            PerturbationState s;
            s.n_cutoff = rng.integer(1, 5);
            for (int i = 0; i < 4; ++i) {
                const int j = rng.integer(1, 7);
                ModeCoeffs& odd = j >= s.n_cutoff ? s.P : s.L;
                ModeCoeffs& odd_dot = j >= s.n_cutoff ? s.P_dot : s.L_dot;
                odd[j] = rng.complex(1.0);
                odd_dot[rng.integer(s.n_cutoff, 7)] = rng.complex(2.0);
                s.g[rng.integer(1, 7)] = rng.complex(1.0);
            }
            s.L_dot.clear();
            s.r = sample_r(g, rng.uniform(0, 1), trial);
            s.r_dot = sample_r(g, rng.uniform(0, 1), trial + 1);
            const auto [chi, chi_dot] = reconstruct(s, g);
            const PerturbationState back = decompose_perturbation(chi, chi_dot, s.n_cutoff);
            CHECK(coeff_error(back.P, s.P) < 1e-11);
            CHECK(coeff_error(back.L, s.L) < 1e-11);
            CHECK(coeff_error(back.g, s.g) < 1e-11);
            CHECK(coeff_error(back.P_dot, s.P_dot) < 1e-11);
            CHECK(back.L_dot.empty());
            CHECK(back.g_dot.empty());
            CHECK(max_abs(*back.r - *s.r) < 1e-11);
            CHECK(max_abs(*back.r_dot - *s.r_dot) < 1e-11);
        }
    }

    TEST_CASE("normal component on the walls is rejected") {
        VectorGridField chi = make_vector_field(shape);
        chi[2] = TwoPhaseGridField::sample(shape, [](double x1, double, double x3, Phase) {
            return std::abs(x3) == 1.0 ? std::cos(x1) : 0.0;
        });
        CHECK_THROWS_AS(decompose_perturbation(chi, make_vector_field(shape), 2), ArgumentError);
    }

    TEST_CASE("nonzero interface mean is a solvability error") {
        VectorGridField chi = make_vector_field(shape);
        chi[2] = TwoPhaseGridField::sample(shape, [](double, double, double x3, Phase) { return 1.0 - std::abs(x3); });
        CHECK_THROWS_AS(decompose_perturbation(chi, make_vector_field(shape), 2), SolvabilityError);
    }

    TEST_CASE("oblique interface motion is not representable") {
        VectorGridField chi = make_vector_field(shape);
        chi[2] = TwoPhaseGridField::sample(shape, [](double x1, double x2, double x3, Phase) {
            return std::cos(x1 + x2) * (1.0 - std::abs(x3));
        });
        CHECK_THROWS_AS(decompose_perturbation(chi, make_vector_field(shape), 2), ArgumentError);
    }

    TEST_CASE("Nyquist content is an aliasing error") {
        VectorGridField chi = make_vector_field(shape);
        chi[0] = TwoPhaseGridField::sample(shape, [](double x1, double, double, Phase) { return std::cos(16 * x1); });
        CHECK_THROWS_AS(decompose_perturbation(chi, make_vector_field(shape), 2), AliasingError);
    }

    TEST_CASE("bad arguments") {
        const VectorGridField z = make_vector_field(shape);
        CHECK_THROWS_AS(decompose_perturbation(z, z, 0), ArgumentError);
        CHECK_THROWS_AS(decompose_perturbation(z, make_vector_field({16, 17}), 2), DimensionError);
        CHECK_THROWS_AS(harmonic_gradient({{16, 1.0}}, {}, shape), DimensionError);
    }

    TEST_CASE("orthogonality: exact for disjoint modes, second order within a mode") {
        // r = (d3 psi, 0, -d1 psi), psi = sin(3 x1) sin(pi x3) above and twice
        // that below: divergence free with zero normal trace in each phase,
        // sharing the tangential mode of grad f_3.
        std::vector<double> log_h, log_e;
        for (int nv : {9, 17, 33, 65}) {
            const GridShape g{16, nv};
            VectorGridField r = make_vector_field(g);
            auto w = [](Phase ph) { return ph == Phase::upper ? 1.0 : 2.0; };
            r[0] = TwoPhaseGridField::sample(g, [&](double x1, double, double x3, Phase ph) {
                return w(ph) * kPi * std::sin(3 * x1) * std::cos(kPi * x3);
            });
            r[2] = TwoPhaseGridField::sample(g, [&](double x1, double, double x3, Phase ph) {
                if (x3 == 0.0 || std::abs(x3) == 1.0) return 0.0;
                return -w(ph) * 3.0 * std::cos(3 * x1) * std::sin(kPi * x3);
            });
            const VectorGridField grad = closed_form_gradient(g, {3, true}, 1.0);
            const PerturbationState s = decompose_perturbation(grad + r, make_vector_field(g), 2);
            CHECK(coeff_error(s.P, {{3, 1.0}}) < 1e-12);
            CHECK(max_abs(*s.r - r) < 1e-12);
            const double rel = std::abs(inner_product_L2(grad, r)) / std::sqrt(norm_sq_L2(grad) * norm_sq_L2(r));
            log_h.push_back(std::log(g.h_ver()));
            log_e.push_back(std::log(rel));
            CHECK(std::abs(inner_product_L2(grad, sample_r(g, 1.0, 0))) < 1e-12);
        }
        CHECK(fit_slope(log_h, log_e) == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_SUITE("functionals") {
    TEST_CASE("growing mode: E+ = 4 j^(2mu+2) |c|^2 N_j and E- = 0") {
        for (int j : {3, 6}) {
            const Complex c{0.4, 0.3};
            const FunctionalReport f = compute_functionals(growing(j, c, 2), kMus, 0, 0);
            for (double mu : kMus) {
                const double want = 4.0 * std::pow(j, 2 * mu + 2) * std::norm(c) * gradient_norm_sq(j);
                CHECK(f.e_plus(mu) == doctest::Approx(want).epsilon(1e-14));
                CHECK(f.e_minus(mu) == 0.0);
            }
            CHECK(f.G == 0.0);
            CHECK(f.F == 0.0);
            CHECK(f.norm_P_H2 == doctest::Approx(j * j * std::abs(c) * std::sqrt(gradient_norm_sq(j))).epsilon(1e-14));
        }
    }

    TEST_CASE("zero state") {
        PerturbationState s;
        s.r = make_vector_field({8, 8});
        s.r_dot = make_vector_field({8, 8});
        const FunctionalReport f = compute_functionals(s, kMus, 1, 1);
        for (double mu : kMus) CHECK(f.e_plus(mu) + f.e_minus(mu) == 0.0);
        CHECK(f.F + f.G + f.norm_P_H2 == 0.0);
        CHECK_THROWS_AS(f.e_plus(2.0), ArgumentError);
    }

    TEST_CASE("L-only state only feeds G") {
        PerturbationState s;
        s.n_cutoff = 4;
        s.L[2] = Complex{1.0, 1.0};
        s.L_dot[3] = 0.5;
        const FunctionalReport f = compute_functionals(s, kMus, 0, 0);
        const double want = (4.0 * 2.0) * gradient_norm_sq(2) + 0.25 * gradient_norm_sq(3);
        CHECK(f.G == doctest::Approx(want).epsilon(1e-14));
        CHECK(f.e_plus(1.0) == 0.0);
    }

    TEST_CASE("property: parallelogram identity") {
        Rng rng(5);
        for (int trial = 0; trial < 100; ++trial) {
            PerturbationState s;
            s.n_cutoff = 3;
            for (int i = 0; i < 3; ++i) {
                s.P[rng.integer(3, 20)] = rng.complex(1);
                s.P_dot[rng.integer(3, 20)] = rng.complex(10);
            }
            const FunctionalReport f = compute_functionals(s, kMus, 0, 0);
            for (double mu : kMus) {
                double sum = 0.0;
                for (int j = 3; j <= 20; ++j) {
                    const Complex c = s.P.contains(j) ? s.P.at(j) : 0.0;
                    const Complex v = s.P_dot.contains(j) ? s.P_dot.at(j) : 0.0;
                    sum += 2.0 * std::pow(j, 2 * mu) * (std::norm(v) + j * j * std::norm(c)) * gradient_norm_sq(j);
                }
                CHECK(f.e_plus(mu) + f.e_minus(mu) == doctest::Approx(sum).epsilon(1e-13));
            }
        }
    }

    TEST_CASE("r stiffness uses the phase field strength and the x2 symbol") {
        const GridShape g{16, 9};
        PerturbationState s;
        VectorGridField r = make_vector_field(g);
        r[0] = TwoPhaseGridField::sample(g, [](double, double x2, double, Phase) { return std::cos(3 * x2); });
        s.r = r;
        s.r_dot = make_vector_field(g);
        // ||r||^2 = 2 pi * pi per unit height in each phase.
        const double half = 2.0 * kPi * kPi;
        CHECK(compute_functionals(s, kMus, 2.0, 0.0).F == doctest::Approx(4.0 * 9.0 * half).epsilon(1e-13));
        CHECK(compute_functionals(s, kMus, 0.0, 1.0).F == doctest::Approx(9.0 * half).epsilon(1e-13));
        s.r_dot = r;
        CHECK(compute_functionals(s, kMus, 0.0, 0.0).F == doctest::Approx(2.0 * half).epsilon(1e-13));
    }

    TEST_CASE("log E1+ grows at rate 2j") {
        const PerturbationState s0 = growing(5, 1e-3, 4);
        const auto loge = [&](double t) {
            static constexpr double mu[] = {1.0};
            return std::log(compute_functionals(evolve_state(s0, 0, 0, t), mu, 0, 0).e_plus(1.0));
        };
        CHECK(centered_diff(loge, 0.7, 1e-3) == doctest::Approx(10.0).epsilon(1e-8));
    }
}

TEST_SUITE("region and growth") {
    std::vector<double> times(int n, double t_end) {
        std::vector<double> out;
        for (int i = 0; i <= n; ++i) out.push_back(t_end * i / n);
        return out;
    }

    TEST_CASE("pure growing mode stays in the region") {
        const Trajectory traj = simulate(growing(6, 1.0, 4), 0, 0, times(20, 2.0));
        const Proposition2Report rep = check_proposition2(traj, 4);
        CHECK(rep.starts_in_region);
        CHECK(rep.invariant);
        CHECK(rep.auxiliary_bounds_hold);
        CHECK_FALSE(rep.first_violation_time.has_value());
        const double ratio = rep.samples.back().E1_plus / rep.samples.front().E1_plus;
        CHECK(ratio == doctest::Approx(std::exp(2.0 * 6 * 2.0)).epsilon(1e-12));
    }

    TEST_CASE("decaying-dominant data starts outside") {
        PerturbationState s;
        s.n_cutoff = 3;
        s.P[4] = 1.0;
        s.P_dot[4] = -4.0;
        const Proposition2Report rep = check_proposition2(simulate(s, 0, 0, times(4, 1.0)), 3);
        CHECK_FALSE(rep.starts_in_region);
        CHECK_FALSE(rep.invariant);
        REQUIRE(rep.first_violation_time.has_value());
        CHECK(*rep.first_violation_time == 0.0);
    }

    TEST_CASE("fast neutral mode at the region boundary escapes") {
        // F grows at most like exp(j t) while E1+ grows like exp(2 n t); a
        // neutral mode with j > 2n placed on the boundary leaves at once.
        const int n = 2, j = 4 * n;
        PerturbationState s = growing(n, 1.0, n);
        s.g[j] = 1.0;
        s.g_dot[j] = -double(j);
        static constexpr double mu[] = {1.0};
        const double e1 = compute_functionals(s, mu, 0, 0).e_plus(1.0);
        const double f = compute_functionals(s, mu, 0, 0).F;
        const double scale = std::sqrt(e1 / (std::pow(n, 3) * f));
        s.g[j] *= scale;
        s.g_dot[j] *= scale;
        const Proposition2Report rep = check_proposition2(simulate(s, 0, 0, times(10, 0.05)), n);
        CHECK(rep.starts_in_region);
        CHECK_FALSE(rep.invariant);
        REQUIRE(rep.first_violation_time.has_value());
        CHECK(*rep.first_violation_time > 0.0);

        // The same mode with j <= 2n stays inside.
        PerturbationState slow = growing(n, 1.0, n);
        slow.g[2 * n] = 1.0;
        slow.g_dot[2 * n] = -2.0 * n;
        const double fs = compute_functionals(slow, mu, 0, 0).F;
        const double ss = std::sqrt(e1 / (std::pow(n, 3) * fs));
        slow.g[2 * n] *= ss;
        slow.g_dot[2 * n] *= ss;
        CHECK(check_proposition2(simulate(slow, 0, 0, times(40, 2.0)), n).invariant);
    }

    TEST_CASE("trajectory validation") {
        CHECK_THROWS_AS(check_proposition2({}, 2), ArgumentError);
        Trajectory traj = simulate(growing(3, 1.0, 2), 0, 0, times(2, 1.0));
        CHECK_THROWS_AS(check_proposition2(traj, 3), ArgumentError);
        std::swap(traj[0], traj[2]);
        CHECK_THROWS_AS(check_proposition2(traj, 2), ArgumentError);
        CHECK_THROWS_AS(check_growth_corollary({}, 2), ArgumentError);
    }

    TEST_CASE("growth corollary margins are exp((2j - n) t)") {
        const GrowthReport rep = check_growth_corollary(simulate(growing(5, 0.1, 4), 0, 0, times(5, 1.0)), 4);
        CHECK(rep.holds);
        for (const auto& [t, m] : rep.margins) CHECK(m == doctest::Approx(std::exp(6.0 * t)).epsilon(1e-12));
    }

    TEST_CASE("pure decaying data has no growth ratio") {
        PerturbationState s;
        s.n_cutoff = 2;
        s.P[3] = 1.0;
        s.P_dot[3] = -3.0;
        CHECK_THROWS_AS(check_growth_corollary(simulate(s, 0, 0, times(2, 1.0)), 2), DomainError);
    }
}

TEST_SUITE("vanishing-size family") {
    TEST_CASE("decomposes onto one P velocity coefficient") {
        for (int n : {2, 4, 8}) {
            const GridShape g{32, 17};
            const auto [chi, chi_dot] = perturbed_initial_data(n, 2.0, g);
            CHECK(max_abs(chi) == 0.0);
            const PerturbationState s = decompose_perturbation(chi, chi_dot, n);
            CHECK(coeff_error(s.P_dot, {{n, 2.0 * std::exp(-std::sqrt(double(n))) / n}}) < 1e-13);
            CHECK(s.P.empty());
            CHECK(s.L_dot.empty());
            CHECK(s.g_dot.empty());
            const FunctionalReport f = compute_functionals(s, kMus, 0, 0);
            CHECK(f.e_plus(1.0) == doctest::Approx(f.e_minus(1.0)).epsilon(1e-14));
        }
    }

    TEST_CASE("normal velocity vanishes on the walls") {
        const GridShape g{16, 9};
        const auto [chi, chi_dot] = perturbed_initial_data(3, 1.0, g);
        double wall = 0.0;
        for (Phase ph : {Phase::upper, Phase::lower}) {
            for (int i = 0; i < 16; ++i) wall = std::max(wall, std::abs(chi_dot[2].at(ph, 8, i, 0)));
        }
        CHECK(wall < 1e-14);
    }

    TEST_CASE("argument checks") {
        CHECK_THROWS_AS(perturbed_initial_data(0, 1.0, {16, 9}), ArgumentError);
        CHECK_THROWS_AS(perturbed_initial_data(8, 1.0, {16, 9}), DimensionError);
    }
}
