#include "doctest.h"
#include "khlab/eigenmodes.hpp"
#include "khlab/evolution.hpp"
#include "support.hpp"

using namespace khlab;
using khlab::testing::Rng;
using khlab::testing::centered_diff;
using khlab::testing::simpson;

TEST_SUITE("wall profiles") {
    TEST_CASE("interface and wall values") {
        for (WaveVector k : {WaveVector{1, 0}, WaveVector{3, 4}, WaveVector{40, 0}, WaveVector{0, 500}}) {
            const auto [W, V] = build_wall_bounded_profiles(k);
            CHECK(std::abs(W.eval(0.0, Phase::upper) - 1.0) < 1e-14);
            CHECK(std::abs(W.eval(0.0, Phase::lower) - 1.0) < 1e-14);
            CHECK(std::abs(W.eval(1.0, Phase::upper)) < 1e-14);
            CHECK(std::abs(W.eval(-1.0, Phase::lower)) < 1e-14);
        }
    }

    TEST_CASE("interface slopes match closed form and finite differences") {
        for (double k1 : {1.0, 2.0, 5.0}) {
            const WaveVector k{static_cast<int>(k1), 0};
            const auto [W, V] = build_wall_bounded_profiles(k);
            const VerticalProfile dW = W.derivative();
            const double expected = k1 / std::tanh(k1);
            CHECK(dW.eval(0.0, Phase::upper).real() == doctest::Approx(-expected).epsilon(1e-13));
            CHECK(dW.eval(0.0, Phase::lower).real() == doctest::Approx(expected).epsilon(1e-13));
            // One-phase centered difference around an interior point.
            auto wu = [&](double x) { return W.eval(x, Phase::upper).real(); };
            CHECK(centered_diff(wu, 0.5, 1e-5) == doctest::Approx(dW.eval(0.5, Phase::upper).real()).epsilon(1e-8));
        }
    }

    TEST_CASE("V is i(sinh -/+ coth cosh)") {
        const double kappa = 2.0;
        const auto [W, V] = build_wall_bounded_profiles({2, 0});
        for (double x : {0.0, 0.3, 0.8}) {
            const Complex up{0.0, std::sinh(kappa * x) - std::cosh(kappa * x) / std::tanh(kappa)};
            CHECK(std::abs(V.eval(x, Phase::upper) - up) < 1e-13);
            const Complex lo{0.0, std::sinh(-kappa * x) + std::cosh(kappa * x) / std::tanh(kappa)};
            CHECK(std::abs(V.eval(-x, Phase::lower) - lo) < 1e-13);
        }
    }

    TEST_CASE("zero wave vector is a domain error") {
        CHECK_THROWS_AS(build_wall_bounded_profiles({0, 0}), DomainError);
        CHECK_THROWS_AS(build_linearized_mode({0, 0}, Branch::growing), DomainError);
    }
}

TEST_SUITE("normal modes") {
    TEST_CASE("streamwise mode exponents are +-kappa") {
        for (int k1 : {1, 3, 8}) {
            CHECK(build_linearized_mode({k1, 0}, Branch::growing).lambda == Complex(k1, 0.0));
            CHECK(build_linearized_mode({k1, 0}, Branch::decaying).lambda == Complex(-k1, 0.0));
        }
    }

    TEST_CASE("growing branch amplitude ratio is exp(n dt)") {
        const SpectralMode m = build_linearized_mode({6, 0}, Branch::growing);
        for (double dt : {0.1, 0.5, 1.0}) {
            const double ratio = std::abs(m.amplitude_factor(0.3 + dt)) / std::abs(m.amplitude_factor(0.3));
            CHECK(ratio == doctest::Approx(std::exp(6.0 * dt)).epsilon(1e-13));
        }
    }

    TEST_CASE("field-stabilized modes oscillate") {
        const SpectralMode m = build_linearized_mode({1, 2}, Branch::growing, 1.0, 1.0);
        const double lsq = boundary_dispersion({1, 2}, 1.0, 1.0);
        CHECK(lsq < 0.0);
        CHECK(m.lambda.real() == 0.0);
        CHECK(std::abs(m.lambda.imag()) == doctest::Approx(std::sqrt(-lsq)));
    }

    TEST_CASE("residuals of constructed modes are roundoff") {
        for (WaveVector k : {WaveVector{1, 0}, WaveVector{4, 0}, WaveVector{2, 3}, WaveVector{64, 0},
                             WaveVector{-5, 7}, WaveVector{0, 64}}) {
            for (Branch b : {Branch::growing, Branch::decaying}) {
                const ResidualReport r = verify_mode(build_linearized_mode(k, b, 0.5, 0.7), 300);
                CHECK(r.worst() < 1e-9);
            }
        }
    }

    TEST_CASE("divergence free at random points, checked independently") {
        Rng rng(13);
        const SpectralMode m = build_linearized_mode({3, 2}, Branch::growing);
        for (int i = 0; i < 100; ++i) {
            const double x1 = rng.uniform(0, kTwoPi), x2 = rng.uniform(0, kTwoPi), x3 = rng.uniform(-0.99, 0.99);
            const double d = 1e-5;
            auto comp = [&](int c, double a, double b, double z) { return m.velocity(0.0, a, b, z)[c]; };
            const Complex div = (comp(0, x1 + d, x2, x3) - comp(0, x1 - d, x2, x3)) / (2 * d) +
                                (comp(1, x1, x2 + d, x3) - comp(1, x1, x2 - d, x3)) / (2 * d) +
                                (comp(2, x1, x2, x3 + d) - comp(2, x1, x2, x3 - d)) / (2 * d);
            CHECK(std::abs(div) < 1e-7);
        }
    }

    TEST_CASE("normal velocity vanishes at the walls") {
        const SpectralMode m = build_linearized_mode({5, 0}, Branch::growing);
        for (double x1 : {0.0, 1.0, 4.0}) {
            CHECK(std::abs(m.velocity(0.4, x1, 0.0, 1.0)[2]) < 1e-13);
            CHECK(std::abs(m.velocity(0.4, x1, 0.0, -1.0)[2]) < 1e-13);
        }
    }

    TEST_CASE("corrupted profile is caught") {
        SpectralMode m = build_linearized_mode({2, 0}, Branch::growing);
        m.profiles[2] = m.profiles[2].with_added(Phase::upper, 0.1, 0.0);
        CHECK(verify_mode(m, 100).wall_bc_residual > 0.01);
    }

    TEST_CASE("zero amplitude gives zero residuals") {
        SpectralMode m = build_linearized_mode({2, 1}, Branch::growing);
        m.amplitude = 0.0;
        CHECK(verify_mode(m, 50).worst() == 0.0);
        CHECK_THROWS_AS(verify_mode(m, 0), ArgumentError);
    }
}

TEST_SUITE("harmonic potentials") {
    TEST_CASE("profiles are harmonic with Neumann walls") {
        Rng rng(17);
        for (int j : {1, 2, 5, 20}) {
            const auto [f, g] = build_harmonic_potentials(j);
            for (const HarmonicPotential* p : {&f, &g}) {
                const VerticalProfile d1 = p->profile.derivative(), d2 = d1.derivative();
                for (int i = 0; i < 20; ++i) {
                    const double x3 = rng.uniform(-1, 1);
                    const Phase ph = x3 >= 0 ? Phase::upper : Phase::lower;
                    const double scale = std::max(1.0, std::abs(p->profile.eval(x3, ph)));
                    CHECK(std::abs(d2.eval(x3, ph) - double(j * j) * p->profile.eval(x3, ph)) < 1e-10 * j * j * scale);
                }
                CHECK(std::abs(d1.eval(1.0, Phase::upper)) < 1e-12 * j);
                CHECK(std::abs(d1.eval(-1.0, Phase::lower)) < 1e-12 * j);
            }
        }
    }

    TEST_CASE("parity at the interface") {
        for (int j : {1, 3, 9}) {
            const auto [f, g] = build_harmonic_potentials(j);
            CHECK(std::abs(f.profile.eval(0.0, Phase::upper) + f.profile.eval(0.0, Phase::lower)) < 1e-13);
            CHECK(std::abs(g.profile.eval(0.0, Phase::upper) - g.profile.eval(0.0, Phase::lower)) < 1e-13);
            CHECK(f.profile.eval(0.0, Phase::upper).real() == doctest::Approx(-1.0 / std::tanh(j)));
            for (double x : {0.2, 0.7}) {
                CHECK(std::abs(f.profile.eval(x, Phase::upper) + f.profile.eval(-x, Phase::lower)) < 1e-13);
                CHECK(std::abs(g.profile.eval(x, Phase::upper) - g.profile.eval(-x, Phase::lower)) < 1e-13);
            }
        }
    }

    TEST_CASE("Laplacian of the full potential at random interior points") {
        Rng rng(23);
        const auto [f, g] = build_harmonic_potentials(4);
        for (int i = 0; i < 30; ++i) {
            const double x1 = rng.uniform(0, kTwoPi), x3 = rng.uniform(0.05, 0.95) * (rng.coin() ? 1 : -1);
            const double d = 1e-3;
            auto lap = [&](const HarmonicPotential& p) {
                return (p.value(0, x1 + d, x3) + p.value(0, x1 - d, x3) + p.value(0, x1, x3 + d) +
                        p.value(0, x1, x3 - d) - 4.0 * p.value(0, x1, x3)) / (d * d);
            };
            CHECK(std::abs(lap(f)) < 1e-4);
            CHECK(std::abs(lap(g)) < 1e-4);
        }
    }

    TEST_CASE("closed-form gradient norm matches quadrature") {
        for (int j : {1, 2, 3, 7}) {
            const auto [f, g] = build_harmonic_potentials(j);
            for (const HarmonicPotential* p : {&f, &g}) {
                // x1 integral of Re(c e^{i j x1} u)^2 is pi |u|^2; x2 contributes 2 pi.
                auto density = [&](double x3) {
                    const auto grad = p->gradient(0.0, 0.0, x3);
                    return kPi * kTwoPi * (std::norm(grad[0]) + std::norm(grad[2]));
                };
                const double q = simpson(density, -1.0, 0.0 - 1e-15, 4000) + simpson(density, 0.0, 1.0, 4000);
                CHECK(q == doctest::Approx(gradient_norm_sq(j)).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("gradients of distinct frequencies are orthogonal") {
        const auto [f2, g2] = build_harmonic_potentials(2);
        const auto [f3, g3] = build_harmonic_potentials(3);
        const int n = 64;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x1 = kTwoPi * i / n;
            auto density = [&](double x3) {
                const auto a = f2.gradient(0, x1, x3), b = f3.gradient(0, x1, x3);
                return a[0].real() * b[0].real() + a[2].real() * b[2].real();
            };
            acc += simpson(density, 0.0, 1.0, 200) + simpson(density, -1.0, -1e-15, 200);
        }
        CHECK(std::abs(acc) < 1e-10);
    }

    TEST_CASE("j below one is rejected") {
        CHECK_THROWS_AS(build_harmonic_potentials(0), ArgumentError);
        CHECK_THROWS_AS(gradient_norm_sq(-2), ArgumentError);
    }
}
