#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kerlab/products.hpp"

using namespace kerlab;

namespace {

WeightField bidisc_field(double p1 = 2.0, double p2 = 2.0) {
    WeightField f;
    f.factors = {Domain::disc(cd(0, 0), 1.0), Domain::disc(cd(0, 0), 1.0)};
    f.z0 = {cd(0, 0), cd(0, 0)};
    f.p = {p1, p2};
    f.phi = {HarmonicField{}, HarmonicField{}};
    return f;
}

ProductSpaceSpec small_spec(WeightField f, SpaceKind space) {
    ProductSpaceSpec spec;
    spec.field = std::move(f);
    spec.space = space;
    spec.degree = 4;
    spec.boundary_nodes = 64;
    spec.radial_nodes = 10;
    spec.angular_nodes = 24;
    return spec;
}

}  // namespace

TEST_CASE("direct_kernel: bidisc boundary measures at the base point") {
    const std::vector<cd> origin{cd(0, 0), cd(0, 0)};

    // bd(M) with rho from p = (2,2): ||1||^2 = pi, kernel 1/pi
    ProductSpaceSpec dm = small_spec(bidisc_field(), SpaceKind::ProductBoundary);
    CHECK(std::abs(direct_kernel(dm, origin, origin) - cd(1.0 / kPi)) < 1e-10);

    // distinguished boundary with lambda == 1 under d sigma: kernel 1
    ProductSpaceSpec s = small_spec(bidisc_field(), SpaceKind::Distinguished);
    CHECK(std::abs(direct_kernel(s, origin, origin) - cd(1.0)) < 1e-10);

    // permuted enumeration changes nothing
    ProductSpaceSpec perm = dm;
    perm.enumeration_seed = 99;
    perm.dense = true;
    CHECK(std::abs(direct_kernel(perm, origin, origin) - cd(1.0 / kPi)) < 1e-9);
}

TEST_CASE("direct_kernel: disc x fiber with unit weights") {
    WeightField f;
    f.factors = {Domain::disc(cd(0, 0), 1.0)};
    f.z0 = {cd(0, 0)};
    f.p = {1.0};
    f.phi = {HarmonicField{}};
    f.fiber_factors = {Domain::disc(cd(0, 0), 1.0)};
    f.u0 = {cd(0, 0)};
    ProductSpaceSpec spec = small_spec(f, SpaceKind::BoundaryFiber);
    const std::vector<cd> z{cd(0, 0), cd(0, 0)};
    // K_{D,lambda}(0) * B_U(0) = 1 * 1/pi
    CHECK(std::abs(direct_kernel(spec, z, z) - cd(1.0 / kPi)) < 1e-10);
}

TEST_CASE("factored_kernel: Bergman products and gamma scaling") {
    ProductSpaceSpec area = small_spec(bidisc_field(), SpaceKind::Area);
    const std::vector<cd> origin{cd(0, 0), cd(0, 0)};
    CHECK(std::abs(factored_kernel(area, origin, origin) - cd(1.0 / (kPi * kPi))) < 1e-10);

    // gamma scaled by 2 halves every fibered kernel value
    WeightField f = bidisc_field();
    f.fiber_factors = {Domain::disc(cd(0, 0), 1.0)};
    f.u0 = {cd(0.1, 0.0)};
    ProductSpaceSpec fib = small_spec(f, SpaceKind::DistinguishedFiber);
    const std::vector<cd> z{cd(0.1, 0.05), cd(-0.2, 0.1), cd(0.15, -0.1)};
    const cd v1 = factored_kernel(fib, z, z);
    fib.field.gamma_scale = 2.0;
    const cd v2 = factored_kernel(fib, z, z);
    CHECK(std::abs(v2 - v1 / 2.0) < 1e-12 * std::abs(v1));

    // plain bd(M) has no factorization
    ProductSpaceSpec dm = small_spec(bidisc_field(), SpaceKind::ProductBoundary);
    CHECK_THROWS_AS(factored_kernel(dm, origin, origin), std::invalid_argument);
}

TEST_CASE("Hermitian symmetry and truncation monotonicity on product kernels") {
    ProductSpaceSpec spec = small_spec(bidisc_field(), SpaceKind::ProductBoundary);
    const std::vector<cd> z{cd(0.3, 0.1), cd(-0.2, 0.25)};
    const std::vector<cd> w{cd(-0.1, -0.3), cd(0.4, 0.05)};
    const GramMatrix g = space_gram(spec);
    const OrthonormalBasis onb = orthonormalize(g);
    CHECK(std::abs(kernel_eval(onb, z, w) - std::conj(kernel_eval(onb, w, z))) < 1e-12);

    double prev = 0.0;
    for (int deg : {2, 3, 4, 5}) {
        ProductSpaceSpec s = spec;
        s.degree = deg;
        const double val = std::real(direct_kernel(s, z, z));
        CHECK(val >= prev - 1e-12);
        prev = val;
    }
}

TEST_CASE("bd(M) measure consistency: total mass with rho == 1") {
    // integrating 1 over bd(M) equals sum_j (len(bd D_j)/2pi) * vol(M_j)
    const Domain d1 = Domain::disc(cd(0, 0), 1.0);
    const Domain d2 = Domain::annulus(cd(0, 0), 0.5, 1.0);
    BasisSpec basis = BasisSpec::tensor({FactorBasis::for_domain(d1, 0), FactorBasis::for_domain(d2, 0)});
    std::vector<MeasurePiece> pieces;
    {
        MeasurePiece p;
        p.rule = tensor_rule({boundary_rule(d1, 64), area_rule(d2, 12, 32)});
        p.normalization = 1.0 / kTwoPi;
        p.weight = [](std::span<const cd>) { return 1.0; };
        pieces.push_back(std::move(p));
    }
    {
        MeasurePiece p;
        p.rule = tensor_rule({area_rule(d1, 12, 32), boundary_rule(d2, 64)});
        p.normalization = 1.0 / kTwoPi;
        p.weight = [](std::span<const cd>) { return 1.0; };
        pieces.push_back(std::move(p));
    }
    const GramMatrix g = assemble_gram(basis, MeasureTag::MixedBoundary, pieces);
    const double expected = (d1.boundary_length() / kTwoPi) * d2.area() + (d2.boundary_length() / kTwoPi) * d1.area();
    CHECK(g.entries(0, 0).real() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("verify_decomposition: fast identities") {
    WeightField f = bidisc_field();
    f.z0 = {cd(0.15, 0.1), cd(0.2, -0.05)};
    f.phi = {HarmonicField{{cd(0, 0), cd(0.2, 0.1)}, 0.0, {}}, HarmonicField{}};
    f.fiber_factors = {Domain::disc(cd(0, 0), 1.0)};
    f.u0 = {cd(0.1, 0.1)};

    ProductSpaceSpec spec;
    spec.field = f;
    spec.degree = 3;
    spec.boundary_nodes = 48;
    spec.radial_nodes = 6;
    spec.angular_nodes = 16;

    SUBCASE("3:E4 on a single factor") {
        ProductSpaceSpec s = spec;
        s.field.factors.resize(1);
        s.field.z0.resize(1);
        s.field.p.resize(1);
        s.field.phi.resize(1);
        const VerificationReport r = verify_decomposition(Identity::E3_4, s, 5, 7, 1e-6);
        CHECK(r.pass);
        CHECK(r.max_rel_err < 1e-8);
    }
    SUBCASE("3:E8 Bergman product") {
        const VerificationReport r = verify_decomposition(Identity::E3_8, spec, 5, 7, 1e-6);
        CHECK(r.pass);
        CHECK(r.max_rel_err < 1e-8);
    }
    SUBCASE("key-decomp1 on S x U") {
        const VerificationReport r = verify_decomposition(Identity::KeyDecomp1, spec, 5, 7, 1e-6);
        CHECK(r.pass);
    }
    SUBCASE("S-decomp jet variant") {
        const VerificationReport r = verify_decomposition(Identity::SDecomp, spec, 4, 11, 1e-6);
        CHECK(r.pass);
        CHECK(r.infeasible_consistent);
    }
    SUBCASE("Berg-decomp at reduced degree") {
        ProductSpaceSpec s = spec;
        s.degree = 2;
        const VerificationReport r = verify_decomposition(Identity::BergDecomp, s, 3, 13, 1e-6);
        CHECK(r.pass);
    }
}

TEST_CASE("jet kernels: infeasible boxes are consistent on both sides") {
    WeightField f = bidisc_field();
    f.fiber_factors = {Domain::disc(cd(0, 0), 1.0)};
    f.u0 = {cd(0, 0)};
    ProductSpaceSpec spec = small_spec(f, SpaceKind::AreaFiber);
    spec.degree = 2;

    // box beyond the truncated span: targets unreachable
    JetSpec js;
    js.beta_prime = {0, 0};
    js.beta_tilde_prime = {5, 0};  // exceeds degree 2
    js.l_coeffs = {{cd(1, 0), cd(0, 0), cd(0, 0), cd(0, 0), cd(0, 0), cd(0.7, 0)}, {cd(1, 0)}};
    js.beta_dprime = {0};
    js.beta_tilde_dprime = {0};
    js.b_coeffs = {cd(1, 0)};

    const ConstrainedKernelValue total = jet_kernel(spec, js);
    CHECK_FALSE(total.feasible);
    CHECK(total.kernel_value == 0.0);

    ProductSpaceSpec base = spec;
    base.space = SpaceKind::Area;
    base.field.fiber_factors.clear();
    base.field.u0.clear();
    const ConstrainedKernelValue base_val = jet_kernel(base, js);
    CHECK_FALSE(base_val.feasible);
    CHECK(base_val.kernel_value == 0.0);  // both sides zero by convention
}

TEST_CASE("JetSpec validation") {
    JetSpec js;
    js.beta_prime = {1};
    js.beta_tilde_prime = {0};  // beta~ < beta
    js.l_coeffs = {{cd(0, 0), cd(1, 0)}};
    CHECK_THROWS_AS(js.validate(1, 0), std::invalid_argument);

    js.beta_tilde_prime = {1};
    js.l_coeffs = {{cd(0.3, 0), cd(1, 0)}};  // nonzero below the order
    CHECK_THROWS_AS(js.validate(1, 0), std::invalid_argument);

    js.l_coeffs = {{cd(0, 0), cd(1, 0)}};
    CHECK_NOTHROW(js.validate(1, 0));
}
