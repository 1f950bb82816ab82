#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kerlab/weights.hpp"

using namespace kerlab;

namespace {

WeightField unit_disc_field(double p0, CFunction c) {
    WeightField f;
    f.factors = {Domain::disc(cd(0, 0), 1.0)};
    f.z0 = {cd(0, 0)};
    f.p = {p0};
    f.phi = {HarmonicField{}};
    f.c = c;
    f.validate();
    return f;
}

WeightField bidisc_field(double p1, double p2) {
    WeightField f;
    f.factors = {Domain::disc(cd(0, 0), 1.0), Domain::disc(cd(0, 0), 1.0)};
    f.z0 = {cd(0, 0), cd(0, 0)};
    f.p = {p1, p2};
    f.phi = {HarmonicField{}, HarmonicField{}};
    f.validate();
    return f;
}

}  // namespace

TEST_CASE("c-function catalog invariants") {
    for (const CFunction& c : {CFunction::one(), CFunction::exp_decay(0.5), CFunction::exp_decay(0.12)}) {
        CHECK(c(0.0) == doctest::Approx(1.0));
        double prev = c(0.0);
        for (int i = 1; i <= 200; ++i) {
            const double t = 0.1 * i;
            const double v = c(t) * std::exp(-t);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
        CHECK(std::abs(c.integral_numeric() - c.integral()) < 1e-10);
    }
    CHECK(CFunction::one().integral() == doctest::Approx(1.0));
    CHECK(CFunction::exp_decay(0.5).integral() == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(CFunction::exp_decay(1.0), std::invalid_argument);
}

TEST_CASE("psi: single domain and product max formula") {
    const WeightField single = unit_disc_field(1.0, CFunction::one());
    const cd w1[1] = {cd(0.5, 0.0)};
    CHECK(psi(single, w1) == doctest::Approx(std::log(0.5)).epsilon(1e-14));

    WeightField two = bidisc_field(2.0, 2.0);
    const cd w2[2] = {cd(0.5, 0.0), cd(0.9, 0.0)};
    CHECK(psi(two, w2) == doctest::Approx(4.0 * std::log(0.9)).epsilon(1e-13));

    const cd at_base[2] = {cd(0, 0), cd(0, 0)};
    CHECK(psi(two, at_base) == -std::numeric_limits<double>::infinity());

    // psi <= 0 everywhere; zero on the boundary within series tolerance
    WeightField ann;
    ann.factors = {Domain::annulus(cd(0, 0), 0.5, 1.0)};
    ann.z0 = {cd(0.7, 0.0)};
    ann.p = {1.0};
    ann.phi = {HarmonicField{}};
    ann.validate();
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        const double r = 0.5 + 0.5 * (0.05 + 0.9 * rng.next_double());
        const cd z = r * std::exp(cd(0, kTwoPi * rng.next_double()));
        const cd w[1] = {z};
        if (std::abs(z - ann.z0[0]) < 1e-6) continue;
        CHECK(psi(ann, w) <= 1e-12);
    }
    const cd wb[1] = {ann.factors[0].boundary_point(0, 1.0).z};
    CHECK(std::abs(psi(ann, wb)) < 1e-12);
}

TEST_CASE("rho_interior: catalog examples") {
    // phi = 0, c = 1: rho == 1
    const WeightField plain = unit_disc_field(1.0, CFunction::one());
    const cd w[1] = {cd(0.3, 0.4)};
    CHECK(rho_interior(plain, w) == doctest::Approx(1.0));

    // c = exp_decay(eps), psi = G: rho = |z|^{2 eps}
    for (double eps : {0.25, 0.5}) {
        const WeightField f = unit_disc_field(1.0, CFunction::exp_decay(eps));
        for (double r : {0.2, 0.5, 0.8}) {
            const cd z[1] = {cd(r, 0.0)};
            CHECK(rho_interior(f, z) == doctest::Approx(std::pow(r, 2 * eps)).epsilon(1e-12));
        }
    }

    // bidisc, phi = 0, c = 1: rho~ = 1
    const WeightField two = bidisc_field(2.0, 2.0);
    const cd w2[2] = {cd(0.5, 0.1), cd(-0.2, 0.3)};
    CHECK(rho_interior(two, w2) == doctest::Approx(1.0));
}

TEST_CASE("lambda_boundary: catalog examples") {
    const WeightField single = unit_disc_field(1.0, CFunction::one());
    const cd wb[1] = {cd(1.0, 0.0)};
    CHECK(lambda_boundary(single, 0, wb) == doctest::Approx(1.0).epsilon(1e-12));

    const WeightField two = bidisc_field(2.0, 2.0);
    const cd w2[2] = {cd(0, 1.0), cd(0.5, 0.0)};  // w1 on the circle, w2 interior
    CHECK(lambda_boundary(two, 0, w2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(lambda_boundary(two, 2, w2), std::out_of_range);

    const cd s2[2] = {cd(0, 1.0), cd(1.0, 0.0)};
    CHECK(lambda_distinguished(two, s2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary consistency: rho limit matches e^{-phi} on the boundary") {
    WeightField f = unit_disc_field(1.0, CFunction::exp_decay(0.4));
    f.phi[0].poly_coeffs = {cd(0.3, 0.0), cd(0.1, -0.2)};
    Rng rng(9);
    for (int i = 0; i < 10; ++i) {
        const double s = kTwoPi * rng.next_double();
        const cd zb = std::exp(cd(0, s)) * 0.999999;
        const cd w[1] = {zb};
        const double ephi = std::exp(-eval_harmonic_field(f.factors[0], f.phi[0], zb));
        CHECK(rho_interior(f, w) == doctest::Approx(ephi).epsilon(1e-5));
    }
}

TEST_CASE("scaling covariance: phi + const scales all weights by e^{-const}") {
    WeightField f = bidisc_field(2.0, 4.0);
    WeightField g = f;
    const double alpha = 0.37;
    g.phi[0].poly_coeffs = {cd(alpha, 0.0)};
    const cd w[2] = {cd(0.3, 0.2), cd(-0.4, 0.1)};
    const cd wb[2] = {cd(0, 1.0), cd(0.5, 0.0)};
    const cd ws[2] = {cd(0, 1.0), cd(-1.0, 0.0)};
    const double scale = std::exp(-alpha);
    CHECK(rho_interior(g, w) == doctest::Approx(scale * rho_interior(f, w)).epsilon(1e-14));
    CHECK(lambda_boundary(g, 0, wb) == doctest::Approx(scale * lambda_boundary(f, 0, wb)).epsilon(1e-14));
    CHECK(lambda_distinguished(g, ws) == doctest::Approx(scale * lambda_distinguished(f, ws)).epsilon(1e-14));
}

TEST_CASE("admissibility_check") {
    const Domain d = Domain::disc(cd(0, 0), 1.0);
    const QuadratureRule rule = area_rule(d, 24, 48);

    // rho = |z|^{2 eps}, a = 0.9/(2 eps): integrable
    const double eps = 0.5;
    const auto pass_rep = admissibility_check([eps](cd z) { return std::pow(std::abs(z), 2 * eps); }, rule,
                                              0.9 / (2 * eps));
    CHECK(pass_rep.pass);

    // rho == 1: pass for any a
    CHECK(admissibility_check([](cd) { return 1.0; }, rule, 3.0).pass);

    // exploding boundary weight: fail
    const auto fail_rep =
        admissibility_check([](cd z) { return std::exp(-1.0 / std::max(1e-12, 1.0 - std::abs(z))); }, rule, 1.0);
    CHECK_FALSE(fail_rep.pass);
}

TEST_CASE("jet admissibility arithmetic") {
    bool eq = false;
    const double p22[2] = {2.0, 2.0};
    const int b00[2] = {0, 0};
    CHECK(jet_admissible(std::span<const double>(p22, 2), std::span<const int>(b00, 2), &eq));
    CHECK(eq);

    const int b10[2] = {1, 0};
    CHECK_FALSE(jet_admissible(std::span<const double>(p22, 2), std::span<const int>(b10, 2)));

    const double p4[4] = {4, 4, 4, 4};
    const int b0[4] = {0, 0, 0, 0};
    CHECK(jet_admissible(std::span<const double>(p4, 4), std::span<const int>(b0, 4), &eq));
    CHECK(eq);
}
