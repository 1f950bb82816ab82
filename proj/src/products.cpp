#include "kerlab/products.hpp"

#include <algorithm>
#include <cmath>

namespace kerlab {

namespace {

bool area_weight_factorizes(const WeightField& f) {
    return f.n() == 1 || f.c.kind == CFunction::Kind::ConstantOne;
}

}  // namespace

int ProductSpaceSpec::total_arity() const {
    return includes_fiber() ? field.n() + field.m() : field.n();
}

bool ProductSpaceSpec::includes_fiber() const {
    switch (space) {
        case SpaceKind::BoundaryFiber:
        case SpaceKind::ProductBoundaryFiber:
        case SpaceKind::DistinguishedFiber:
        case SpaceKind::AreaFiber:
            return true;
        default:
            return false;
    }
}

BasisSpec space_basis(const ProductSpaceSpec& spec) {
    std::vector<FactorBasis> factors;
    for (const Domain& d : spec.field.factors) factors.push_back(FactorBasis::for_domain(d, spec.degree));
    if (spec.includes_fiber())
        for (const Domain& d : spec.field.fiber_factors) factors.push_back(FactorBasis::for_domain(d, spec.degree));
    return BasisSpec::tensor(std::move(factors), spec.enumeration_seed);
}

namespace {

// Quadrature floors: radial Gauss-Legendre must integrate r^{2 deg + 1}
// exactly and the angular trapezoid must not alias any basis-degree
// difference (Laurent spread is 2 deg) back onto a nonzero mode.
int eff_radial(const ProductSpaceSpec& spec) { return std::max(spec.radial_nodes, spec.degree + 3); }

int eff_angular(const ProductSpaceSpec& spec, const Domain& d) {
    const int spread = d.is_annulus() ? 4 * spec.degree : 2 * spec.degree;
    return std::max(spec.angular_nodes, spread + 16);
}

int eff_boundary(const ProductSpaceSpec& spec, const Domain& d) {
    const int spread = d.is_annulus() ? 4 * spec.degree : 2 * spec.degree;
    return std::max(spec.boundary_nodes, spread + 16);
}

MeasureTag tag_for(SpaceKind s) {
    switch (s) {
        case SpaceKind::Area:
        case SpaceKind::AreaFiber:
            return MeasureTag::Area;
        case SpaceKind::Distinguished:
        case SpaceKind::DistinguishedFiber:
            return MeasureTag::Distinguished;
        case SpaceKind::BoundaryFiber:
            return MeasureTag::Fibration;
        case SpaceKind::ProductBoundary:
        case SpaceKind::ProductBoundaryFiber:
            return MeasureTag::MixedBoundary;
    }
    return MeasureTag::Area;
}

// Dense measure pieces: full tensor rules over all coordinates.
std::vector<MeasurePiece> dense_pieces(const ProductSpaceSpec& spec) {
    const WeightField& f = spec.field;
    const int n = f.n();
    const bool fiber = spec.includes_fiber();

    std::vector<QuadratureRule> u_rules;
    if (fiber)
        for (const Domain& d : f.fiber_factors)
            u_rules.push_back(area_rule(d, eff_radial(spec), eff_angular(spec, d)));

    auto with_fiber_weight = [f, fiber, n](std::function<double(std::span<const cd>)> base) {
        return [f, fiber, n, base](std::span<const cd> pt) {
            const double b = base(pt.first(n));
            if (!fiber) return b;
            return b * gamma_weight(f, pt.subspan(n));
        };
    };

    std::vector<MeasurePiece> pieces;
    switch (spec.space) {
        case SpaceKind::Area:
        case SpaceKind::AreaFiber: {
            std::vector<QuadratureRule> rules;
            for (const Domain& d : f.factors) rules.push_back(area_rule(d, eff_radial(spec), eff_angular(spec, d)));
            rules.insert(rules.end(), u_rules.begin(), u_rules.end());
            pieces.push_back({tensor_rule(rules), 1.0,
                              with_fiber_weight([f](std::span<const cd> w) { return rho_interior(f, w); })});
            break;
        }
        case SpaceKind::Distinguished:
        case SpaceKind::DistinguishedFiber: {
            std::vector<QuadratureRule> rules;
            for (const Domain& d : f.factors) rules.push_back(boundary_rule(d, eff_boundary(spec, d)));
            rules.insert(rules.end(), u_rules.begin(), u_rules.end());
            pieces.push_back({tensor_rule(rules), std::pow(kTwoPi, -n),
                              with_fiber_weight([f](std::span<const cd> w) { return lambda_distinguished(f, w); })});
            break;
        }
        case SpaceKind::BoundaryFiber:
        case SpaceKind::ProductBoundary:
        case SpaceKind::ProductBoundaryFiber: {
            if (spec.space == SpaceKind::BoundaryFiber && n != 1)
                throw std::invalid_argument("BoundaryFiber measure requires a single base factor");
            for (int j = 0; j < n; ++j) {
                std::vector<QuadratureRule> rules;
                for (int l = 0; l < n; ++l) {
                    rules.push_back(l == j ? boundary_rule(f.factors[l], eff_boundary(spec, f.factors[l]))
                                           : area_rule(f.factors[l], eff_radial(spec), eff_angular(spec, f.factors[l])));
                }
                rules.insert(rules.end(), u_rules.begin(), u_rules.end());
                pieces.push_back({tensor_rule(rules), 1.0 / kTwoPi,
                                  with_fiber_weight([f, j](std::span<const cd> w) { return lambda_boundary(f, j, w); })});
            }
            break;
        }
    }
    return pieces;
}

// The product weight c(-psi) with non-constant c has a kink along the switch
// locus of psi = max_j 2 p_j G_j. With both base points at the disc centers
// the locus is radial: s_1 = s_2^{p_2/p_1} in disc-scaled radii, so the area
// integral splits into two regions with a smooth integrand each, quadratured
// by nesting the inner radial range inside the outer one.
bool nested_area_applicable(const WeightField& f) {
    if (f.n() != 2) return false;
    for (int j = 0; j < 2; ++j) {
        if (f.factors[j].is_annulus()) return false;
        if (std::abs(f.z0[j] - f.factors[j].center()) > 1e-14) return false;
    }
    return true;
}

QuadratureRule nested_area_rule(const Domain& outer_d, const Domain& inner_d, double kappa, int n_radial,
                                int n_ang_outer, int n_ang_inner) {
    QuadratureRule rule;
    rule.kind = QuadratureRule::Kind::Tensor;
    rule.arity = 2;

    std::vector<double> panel{0.0};
    for (int p = 5; p >= 1; --p) panel.push_back(std::pow(2.0, -p));
    panel.push_back(1.0);

    std::vector<double> sx, sw, tx, tw;
    for (size_t seg = 0; seg + 1 < panel.size(); ++seg) {
        gauss_legendre(n_radial, panel[seg], panel[seg + 1], &sx, &sw);
        for (int j = 0; j < n_radial; ++j) {
            const double s2 = sx[j];
            const double s1_max = std::pow(s2, kappa);
            gauss_legendre(n_radial, 0.0, s1_max, &tx, &tw);
            for (int i = 0; i < n_radial; ++i) {
                const double s1 = tx[i];
                for (int a2 = 0; a2 < n_ang_outer; ++a2) {
                    const double th2 = kTwoPi * (a2 + 0.5) / n_ang_outer;
                    const cd w2 = outer_d.center() + outer_d.outer_radius() * s2 * cd(std::cos(th2), std::sin(th2));
                    for (int a1 = 0; a1 < n_ang_inner; ++a1) {
                        const double th1 = kTwoPi * (a1 + 0.5) / n_ang_inner;
                        const cd w1 =
                            inner_d.center() + inner_d.outer_radius() * s1 * cd(std::cos(th1), std::sin(th1));
                        // order in the tuple: (inner factor, outer factor)
                        rule.nodes.push_back(w1);
                        rule.nodes.push_back(w2);
                        const double jac = (inner_d.outer_radius() * inner_d.outer_radius() * s1) *
                                           (outer_d.outer_radius() * outer_d.outer_radius() * s2) *
                                           (kTwoPi / n_ang_inner) * (kTwoPi / n_ang_outer);
                        rule.weights.push_back(sw[j] * tw[i] * jac);
                    }
                }
            }
        }
    }
    return rule;
}

std::vector<MeasurePiece> nested_area_pieces(const ProductSpaceSpec& spec) {
    const WeightField& f = spec.field;
    const int nr = eff_radial(spec);
    const int na0 = eff_angular(spec, f.factors[0]);
    const int na1 = eff_angular(spec, f.factors[1]);

    std::vector<QuadratureRule> u_rules;
    if (spec.includes_fiber())
        for (const Domain& d : f.fiber_factors)
            u_rules.push_back(area_rule(d, eff_radial(spec), eff_angular(spec, d)));

    auto make_piece = [&](QuadratureRule base_rule) {
        std::vector<QuadratureRule> rules{std::move(base_rule)};
        rules.insert(rules.end(), u_rules.begin(), u_rules.end());
        MeasurePiece piece;
        piece.rule = rules.size() == 1 ? std::move(rules[0]) : tensor_rule(rules);
        piece.normalization = 1.0;
        const WeightField field = f;
        const bool fiber = spec.includes_fiber();
        const int n = f.n();
        piece.weight = [field, fiber, n](std::span<const cd> pt) {
            const double b = rho_interior(field, pt.first(n));
            return fiber ? b * gamma_weight(field, pt.subspan(n)) : b;
        };
        return piece;
    };

    // Region s_1 <= s_2^{p_2/p_1}: factor 1 is inner; the tuple order from
    // nested_area_rule is (factor 0 = inner, factor 1 = outer), so swap roles
    // by permuting the node pair for the second region.
    QuadratureRule region_a = nested_area_rule(f.factors[1], f.factors[0], f.p[1] / f.p[0], nr, na1, na0);
    QuadratureRule region_b = nested_area_rule(f.factors[0], f.factors[1], f.p[0] / f.p[1], nr, na0, na1);
    // region_b tuples are (factor 1, factor 0); swap back to coordinate order.
    for (size_t i = 0; i < region_b.size(); ++i) std::swap(region_b.nodes[2 * i], region_b.nodes[2 * i + 1]);

    std::vector<MeasurePiece> pieces;
    pieces.push_back(make_piece(std::move(region_a)));
    pieces.push_back(make_piece(std::move(region_b)));
    return pieces;
}

FactorMeasure boundary_factor_measure(const WeightField& f, int j, int nodes, bool with_p) {
    const Domain d = f.factors[j];
    const cd zj = f.z0[j];
    const double pj = with_p ? f.p[j] : 1.0;
    const HarmonicField phi = f.phi[j];
    return FactorMeasure{boundary_rule(d, nodes), [d, zj, pj, phi](cd z) {
                             return std::exp(-eval_harmonic_field(d, phi, z)) / (pj * d.green_normal(z, zj));
                         }};
}

FactorMeasure area_factor_measure(const WeightField& f, int j, int nr, int na) {
    const Domain d = f.factors[j];
    const HarmonicField phi = f.phi[j];
    return FactorMeasure{area_rule(d, nr, na),
                         [d, phi](cd z) { return std::exp(-eval_harmonic_field(d, phi, z)); }};
}

// Single-factor area measure including c(-2 psi) (n = 1 only).
FactorMeasure area_factor_measure_single(const WeightField& f, int nr, int na) {
    const WeightField field = f;
    return FactorMeasure{area_rule(f.factors[0], nr, na), [field](cd z) {
                             const cd w[1] = {z};
                             return rho_interior(field, std::span<const cd>(w, 1));
                         }};
}

FactorMeasure fiber_factor_measure(const WeightField& f, int u_idx, int nr, int na, bool with_scale) {
    const Domain d = f.fiber_factors[u_idx];
    const HarmonicField g = f.gamma_exponent.empty() ? HarmonicField{} : f.gamma_exponent[u_idx];
    const double scale = with_scale ? f.gamma_scale : 1.0;
    return FactorMeasure{area_rule(d, nr, na),
                         [d, g, scale](cd z) { return scale * std::exp(-eval_harmonic_field(d, g, z)); }};
}

std::vector<std::pair<double, std::vector<CMatrix>>> tensor_pieces(const ProductSpaceSpec& spec,
                                                                   const BasisSpec& basis) {
    const WeightField& f = spec.field;
    const int n = f.n();
    const bool fiber = spec.includes_fiber();

    std::vector<CMatrix> u_grams;
    if (fiber)
        for (int u = 0; u < f.m(); ++u)
            u_grams.push_back(gram_1d(basis.factors[n + u],
                                      fiber_factor_measure(f, u, eff_radial(spec),
                                                           eff_angular(spec, f.fiber_factors[u]), u == 0)));

    auto append_fiber = [&](std::vector<CMatrix> base) {
        base.insert(base.end(), u_grams.begin(), u_grams.end());
        return base;
    };

    std::vector<std::pair<double, std::vector<CMatrix>>> pieces;
    switch (spec.space) {
        case SpaceKind::Area:
        case SpaceKind::AreaFiber: {
            if (!area_weight_factorizes(f))
                throw std::logic_error("tensor_pieces: area weight does not factor");
            std::vector<CMatrix> grams;
            if (n == 1) {
                grams.push_back(gram_1d(
                    basis.factors[0],
                    area_factor_measure_single(f, eff_radial(spec), eff_angular(spec, f.factors[0]))));
            } else {
                for (int j = 0; j < n; ++j)
                    grams.push_back(gram_1d(
                        basis.factors[j],
                        area_factor_measure(f, j, eff_radial(spec), eff_angular(spec, f.factors[j]))));
            }
            pieces.emplace_back(1.0, append_fiber(std::move(grams)));
            break;
        }
        case SpaceKind::Distinguished:
        case SpaceKind::DistinguishedFiber: {
            std::vector<CMatrix> grams;
            for (int j = 0; j < n; ++j)
                grams.push_back(
                    gram_1d(basis.factors[j], boundary_factor_measure(f, j, eff_boundary(spec, f.factors[j]), false)));
            pieces.emplace_back(std::pow(kTwoPi, -n), append_fiber(std::move(grams)));
            break;
        }
        case SpaceKind::BoundaryFiber:
        case SpaceKind::ProductBoundary:
        case SpaceKind::ProductBoundaryFiber: {
            for (int j = 0; j < n; ++j) {
                std::vector<CMatrix> grams;
                for (int l = 0; l < n; ++l) {
                    grams.push_back(
                        l == j ? gram_1d(basis.factors[l],
                                         boundary_factor_measure(f, l, eff_boundary(spec, f.factors[l]), true))
                               : gram_1d(basis.factors[l],
                                         area_factor_measure(f, l, eff_radial(spec), eff_angular(spec, f.factors[l]))));
                }
                pieces.emplace_back(1.0 / kTwoPi, append_fiber(std::move(grams)));
            }
            break;
        }
    }
    return pieces;
}

}  // namespace

GramMatrix space_gram(const ProductSpaceSpec& spec) {
    spec.field.validate();
    const BasisSpec basis = space_basis(spec);
    const bool area_kind = spec.space == SpaceKind::Area || spec.space == SpaceKind::AreaFiber;
    const bool must_dense = area_kind && !area_weight_factorizes(spec.field);
    if (must_dense && nested_area_applicable(spec.field))
        return assemble_gram(basis, tag_for(spec.space), nested_area_pieces(spec));
    if (spec.dense || must_dense) return assemble_gram(basis, tag_for(spec.space), dense_pieces(spec));
    return assemble_gram_tensor(basis, tag_for(spec.space), tensor_pieces(spec, basis));
}

cd direct_kernel(const ProductSpaceSpec& spec, std::span<const cd> z, std::span<const cd> w) {
    const GramMatrix g = space_gram(spec);
    const OrthonormalBasis onb = orthonormalize(g);
    return kernel_eval(onb, z, w);
}

namespace {

// 1D kernel on one factor from a FactorMeasure.
cd factor_kernel(const FactorBasis& fb, const FactorMeasure& fm, double normalization, cd z, cd w) {
    GramMatrix g;
    g.basis = BasisSpec::tensor({fb});
    g.tag = MeasureTag::Area;
    CMatrix raw = gram_1d(fb, fm);
    for (int a = 0; a < raw.rows(); ++a)
        for (int b = 0; b < raw.cols(); ++b) raw(a, b) *= normalization;
    g.entries = raw;
    const OrthonormalBasis onb = orthonormalize(g);
    const cd zs[1] = {z}, ws[1] = {w};
    return kernel_eval(onb, std::span<const cd>(zs, 1), std::span<const cd>(ws, 1));
}

// Offset sizes so the factored route never reuses the direct side's nodes.
ProductSpaceSpec offset_sizes(ProductSpaceSpec spec) {
    spec.boundary_nodes += 32;
    spec.radial_nodes += 4;
    spec.angular_nodes += 16;
    spec.enumeration_seed = 0;
    spec.dense = false;
    return spec;
}

cd fiber_kernel_product(const ProductSpaceSpec& spec, std::span<const cd> uz, std::span<const cd> uw) {
    const WeightField& f = spec.field;
    cd acc = 1.0;
    for (int u = 0; u < f.m(); ++u) {
        const FactorBasis fb = FactorBasis::for_domain(f.fiber_factors[u], spec.degree);
        acc *= factor_kernel(fb,
                             fiber_factor_measure(f, u, eff_radial(spec), eff_angular(spec, f.fiber_factors[u]), false),
                             1.0, uz[u], uw[u]);
    }
    return acc / f.gamma_scale;
}

ProductSpaceSpec base_space_spec(const ProductSpaceSpec& spec) {
    ProductSpaceSpec base = spec;
    base.field.fiber_factors.clear();
    base.field.u0.clear();
    base.field.gamma_exponent.clear();
    base.field.gamma_scale = 1.0;
    switch (spec.space) {
        case SpaceKind::BoundaryFiber:
        case SpaceKind::ProductBoundaryFiber:
            base.space = SpaceKind::ProductBoundary;
            break;
        case SpaceKind::DistinguishedFiber:
            base.space = SpaceKind::Distinguished;
            break;
        case SpaceKind::AreaFiber:
            base.space = SpaceKind::Area;
            break;
        default:
            throw std::invalid_argument("factored_kernel: selector has no factorization");
    }
    return base;
}

}  // namespace

cd factored_kernel(const ProductSpaceSpec& spec, std::span<const cd> z, std::span<const cd> w) {
    spec.field.validate();
    const int n = spec.field.n();
    if (spec.space == SpaceKind::Area) {
        // Bergman product formula over the base factors.
        if (n < 2) throw std::invalid_argument("factored_kernel: Area factorization needs n >= 2");
        if (!area_weight_factorizes(spec.field))
            throw std::invalid_argument("factored_kernel: area weight does not factor (non-constant c)");
        const ProductSpaceSpec s = offset_sizes(spec);
        cd acc = 1.0;
        for (int j = 0; j < n; ++j) {
            const FactorBasis fb = FactorBasis::for_domain(s.field.factors[j], s.degree);
            acc *= factor_kernel(fb, area_factor_measure(s.field, j, eff_radial(s), eff_angular(s, s.field.factors[j])),
                                 1.0, z[j], w[j]);
        }
        return acc;
    }
    if (!spec.includes_fiber())
        throw std::invalid_argument("factored_kernel: selector has no factorization");

    const ProductSpaceSpec base = offset_sizes(base_space_spec(spec));
    const GramMatrix g = space_gram(base);
    const OrthonormalBasis onb = orthonormalize(g);
    const cd base_val = kernel_eval(onb, z.first(n), w.first(n));
    return base_val * fiber_kernel_product(offset_sizes(spec), z.subspan(n), w.subspan(n));
}

void JetSpec::validate(int n, int m) const {
    if (static_cast<int>(beta_prime.size()) != n || static_cast<int>(beta_tilde_prime.size()) != n)
        throw std::invalid_argument("JetSpec: base-order vectors must match factor count");
    if (static_cast<int>(beta_dprime.size()) != m || static_cast<int>(beta_tilde_dprime.size()) != m)
        throw std::invalid_argument("JetSpec: fiber-order vectors must match fiber count");
    for (int j = 0; j < n; ++j) {
        if (beta_tilde_prime[j] < beta_prime[j]) throw std::invalid_argument("JetSpec: beta~' >= beta' required");
        if (static_cast<int>(l_coeffs[j].size()) <= beta_prime[j] || l_coeffs[j][beta_prime[j]] == cd(0.0))
            throw std::invalid_argument("JetSpec: l_j must have order beta'_j");
        for (int k = 0; k < beta_prime[j]; ++k)
            if (l_coeffs[j][k] != cd(0.0)) throw std::invalid_argument("JetSpec: l_j has a coefficient below its order");
    }
    for (int i = 0; i < m; ++i)
        if (beta_tilde_dprime[i] < beta_dprime[i]) throw std::invalid_argument("JetSpec: beta~'' >= beta'' required");
    if (m > 0) {
        const auto box = box_indices(beta_tilde_dprime);
        if (b_coeffs.size() != box.size()) throw std::invalid_argument("JetSpec: b_coeffs must cover the beta~'' box");
        for (size_t i = 0; i < box.size(); ++i) {
            const bool below = multiindex_less(box[i], beta_dprime);
            if (below && b_coeffs[i] != cd(0.0))
                throw std::invalid_argument("JetSpec: b_0 has a coefficient below its order");
        }
    }
}

cd JetSpec::l0_coeff(std::span<const int> alpha_prime) const {
    cd acc = 1.0;
    for (size_t j = 0; j < beta_prime.size(); ++j) {
        const int k = alpha_prime[j];
        acc *= (k < static_cast<int>(l_coeffs[j].size())) ? l_coeffs[j][k] : cd(0.0);
    }
    return acc;
}

cd JetSpec::b0_coeff(std::span<const int> alpha_dprime) const {
    if (beta_dprime.empty()) return 1.0;
    const auto box = box_indices(beta_tilde_dprime);
    for (size_t i = 0; i < box.size(); ++i) {
        if (std::equal(box[i].begin(), box[i].end(), alpha_dprime.begin(), alpha_dprime.end())) return b_coeffs[i];
    }
    return 0.0;
}

namespace {

// Constraint box for the selected space: I1 over the base, I' over base+fiber.
// The fiber block extends to beta~'' (the full beta~ box); a box truncated at
// beta'' breaks the product decompositions whenever beta~'' > beta''.
std::vector<std::vector<int>> constraint_box(const ProductSpaceSpec& spec, const JetSpec& jets) {
    std::vector<int> upper(jets.beta_tilde_prime.begin(), jets.beta_tilde_prime.end());
    if (spec.includes_fiber())
        upper.insert(upper.end(), jets.beta_tilde_dprime.begin(), jets.beta_tilde_dprime.end());
    return box_indices(upper);
}

std::vector<cd> base_point_of(const ProductSpaceSpec& spec) {
    std::vector<cd> at(spec.field.z0.begin(), spec.field.z0.end());
    if (spec.includes_fiber()) at.insert(at.end(), spec.field.u0.begin(), spec.field.u0.end());
    return at;
}

}  // namespace

namespace {

ConstrainedKernelValue jet_kernel_on(const GramMatrix& g, const ProductSpaceSpec& spec, const JetSpec& jets) {
    jets.validate(spec.field.n(), static_cast<int>(jets.beta_dprime.size()));
    if (spec.includes_fiber() && static_cast<int>(jets.beta_dprime.size()) != spec.field.m())
        throw std::invalid_argument("jet_kernel: fiber jet data does not match the fiber factor count");
    const std::vector<std::vector<int>> box = constraint_box(spec, jets);
    const std::vector<cd> at = base_point_of(spec);
    const CMatrix jmat = jet_map(g.basis, at, box);

    const int n = spec.field.n();
    std::vector<cd> targets;
    targets.reserve(box.size());
    for (const auto& alpha : box) {
        const std::span<const int> ap(alpha.data(), n);
        cd t = jets.l0_coeff(ap);
        if (spec.includes_fiber()) t *= jets.b0_coeff(std::span<const int>(alpha.data() + n, alpha.size() - n));
        targets.push_back(t);
    }
    const ExtremalResult res = constrained_min_norm(g, jmat, targets);
    return {res.kernel_value, res.min_norm_sq, res.feasible};
}

}  // namespace

ConstrainedKernelValue jet_kernel(const ProductSpaceSpec& spec, const JetSpec& jets) {
    spec.field.validate();
    const GramMatrix g = space_gram(spec);
    return jet_kernel_on(g, spec, jets);
}

namespace {

GramMatrix fiber_gram(const ProductSpaceSpec& spec) {
    const WeightField& f = spec.field;
    std::vector<FactorBasis> fbs;
    for (const Domain& d : f.fiber_factors) fbs.push_back(FactorBasis::for_domain(d, spec.degree));
    BasisSpec basis = BasisSpec::tensor(std::move(fbs));
    std::vector<CMatrix> grams;
    for (int u = 0; u < f.m(); ++u)
        grams.push_back(gram_1d(basis.factors[u],
                                fiber_factor_measure(f, u, eff_radial(spec),
                                                     eff_angular(spec, f.fiber_factors[u]), u == 0)));
    return assemble_gram_tensor(basis, MeasureTag::Area, {{1.0, grams}});
}

ConstrainedKernelValue fiber_jet_kernel_on(const GramMatrix& g, const ProductSpaceSpec& spec,
                                           const JetSpec& jets) {
    const WeightField& f = spec.field;
    const auto box = box_indices(jets.beta_tilde_dprime);
    const CMatrix jmat = jet_map(g.basis, f.u0, box);
    std::vector<cd> targets;
    for (const auto& alpha : box) targets.push_back(jets.b0_coeff(alpha));
    const ExtremalResult res = constrained_min_norm(g, jmat, targets);
    return {res.kernel_value, res.min_norm_sq, res.feasible};
}

}  // namespace

// B^{I2,b0}_{U,gamma} via a Bergman Gram over the fiber factors only.
ConstrainedKernelValue fiber_jet_kernel(const ProductSpaceSpec& spec, const JetSpec& jets) {
    const WeightField& f = spec.field;
    if (f.m() == 0) throw std::invalid_argument("fiber_jet_kernel: no fiber factors");
    if (static_cast<int>(jets.beta_dprime.size()) != f.m())
        throw std::invalid_argument("fiber_jet_kernel: jet fiber orders do not match the fiber dimension");
    return fiber_jet_kernel_on(fiber_gram(spec), spec, jets);
}

namespace {

std::vector<cd> random_interior_point(const WeightField& f, bool with_fiber, Rng& rng) {
    std::vector<cd> pt;
    auto sample = [&rng](const Domain& d) {
        const double lo = d.is_annulus() ? d.inner_radius() : 0.0;
        const double hi = d.outer_radius();
        const double r = lo + (hi - lo) * (0.15 + 0.7 * rng.next_double());
        const double s = kTwoPi * rng.next_double();
        return d.center() + r * cd(std::cos(s), std::sin(s));
    };
    for (const Domain& d : f.factors) pt.push_back(sample(d));
    if (with_fiber)
        for (const Domain& d : f.fiber_factors) pt.push_back(sample(d));
    return pt;
}

JetSpec random_jet_spec(const ProductSpaceSpec& spec, std::span<const int> beta_prime,
                        std::span<const int> beta_tilde_prime, std::span<const int> beta_dprime,
                        std::span<const int> beta_tilde_dprime, Rng& rng) {
    JetSpec js;
    js.beta_prime.assign(beta_prime.begin(), beta_prime.end());
    js.beta_tilde_prime.assign(beta_tilde_prime.begin(), beta_tilde_prime.end());
    js.beta_dprime.assign(beta_dprime.begin(), beta_dprime.end());
    js.beta_tilde_dprime.assign(beta_tilde_dprime.begin(), beta_tilde_dprime.end());
    auto coef = [&rng]() { return cd(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)); };
    for (size_t j = 0; j < beta_prime.size(); ++j) {
        std::vector<cd> c(beta_tilde_prime[j] + 1, 0.0);
        for (int k = beta_prime[j]; k <= beta_tilde_prime[j]; ++k) c[k] = coef();
        c[beta_prime[j]] += cd(1.5, 0.0);  // pin the order
        js.l_coeffs.push_back(std::move(c));
    }
    if (!beta_dprime.empty()) {
        const auto box = box_indices(beta_tilde_dprime);
        js.b_coeffs.assign(box.size(), 0.0);
        for (size_t i = 0; i < box.size(); ++i) {
            if (multiindex_less(box[i], beta_dprime)) continue;
            js.b_coeffs[i] = coef();
            if (std::equal(box[i].begin(), box[i].end(), beta_dprime.begin(), beta_dprime.end()))
                js.b_coeffs[i] += cd(1.5, 0.0);
        }
    }
    (void)spec;
    return js;
}

}  // namespace

Identity identity_from_string(const std::string& name) {
    if (name == "3:E4") return Identity::E3_4;
    if (name == "3:E8") return Identity::E3_8;
    if (name == "Pro-28") return Identity::Pro28;
    if (name == "Berg-decomp") return Identity::BergDecomp;
    if (name == "eq-1" || name == "eq-(1)") return Identity::Eq1;
    if (name == "key-decomp1") return Identity::KeyDecomp1;
    if (name == "S-decomp") return Identity::SDecomp;
    throw std::invalid_argument("unknown identity: " + name);
}

std::string identity_name(Identity id) {
    switch (id) {
        case Identity::E3_4: return "3:E4";
        case Identity::E3_8: return "3:E8";
        case Identity::Pro28: return "Pro-28";
        case Identity::BergDecomp: return "Berg-decomp";
        case Identity::Eq1: return "eq-1";
        case Identity::KeyDecomp1: return "key-decomp1";
        case Identity::SDecomp: return "S-decomp";
    }
    return "?";
}

VerificationReport verify_decomposition(Identity id, const ProductSpaceSpec& spec_in, int samples,
                                        std::uint64_t seed, double tol) {
    ProductSpaceSpec spec = spec_in;
    switch (id) {
        case Identity::E3_4: spec.space = SpaceKind::BoundaryFiber; break;
        case Identity::E3_8: spec.space = SpaceKind::Area; break;
        case Identity::Pro28: spec.space = SpaceKind::ProductBoundaryFiber; break;
        case Identity::BergDecomp: spec.space = SpaceKind::AreaFiber; break;
        case Identity::Eq1: spec.space = SpaceKind::ProductBoundaryFiber; break;
        case Identity::KeyDecomp1: spec.space = SpaceKind::DistinguishedFiber; break;
        case Identity::SDecomp: spec.space = SpaceKind::DistinguishedFiber; break;
    }
    spec.dense = true;
    if (spec.enumeration_seed == 0) spec.enumeration_seed = seed ^ 0xabcdef12345ull;

    VerificationReport rep;
    rep.identity = identity_name(id);
    rep.samples = samples;
    Rng rng(seed);

    const bool jet_identity =
        id == Identity::BergDecomp || id == Identity::Eq1 || id == Identity::SDecomp;

    if (!jet_identity) {
        const GramMatrix g = space_gram(spec);
        const OrthonormalBasis onb = orthonormalize(g);
        for (int s = 0; s < samples; ++s) {
            const std::vector<cd> z = random_interior_point(spec.field, spec.includes_fiber(), rng);
            const std::vector<cd> w = random_interior_point(spec.field, spec.includes_fiber(), rng);
            const cd direct = kernel_eval(onb, z, w);
            const cd fact = factored_kernel(spec, z, w);
            const double rel = std::abs(direct - fact) / std::max(std::abs(direct), 1e-300);
            if (rel > rep.max_rel_err) {
                rep.max_rel_err = rel;
                rep.worst_direct = std::abs(direct);
                rep.worst_factored = std::abs(fact);
            }
        }
        rep.pass = rep.max_rel_err <= tol;
        return rep;
    }

    // Jet identities: seeded random admissible jet targets. The Grams do not
    // depend on the targets, so they are assembled once.
    const int n = spec.field.n();
    const int m = spec.field.m();
    const GramMatrix total_gram = space_gram(spec);
    const ProductSpaceSpec base = offset_sizes(base_space_spec(spec));
    const GramMatrix base_gram = space_gram(base);
    const ProductSpaceSpec fiber_spec = offset_sizes(spec);
    const GramMatrix fib_gram = fiber_gram(fiber_spec);

    std::vector<int> beta_prime(n, 0), beta_tilde_prime(n, 0), beta_dprime(m, 0), beta_tilde_dprime(m, 0);
    for (int s = 0; s < samples; ++s) {
        for (int j = 0; j < n; ++j) {
            beta_prime[j] = rng.next_index(2);
            beta_tilde_prime[j] = beta_prime[j] + rng.next_index(2);
            beta_tilde_prime[j] = std::min(beta_tilde_prime[j], spec.degree - 1);
            beta_prime[j] = std::min(beta_prime[j], beta_tilde_prime[j]);
        }
        for (int i = 0; i < m; ++i) {
            beta_dprime[i] = rng.next_index(2);
            beta_tilde_dprime[i] = beta_dprime[i] + rng.next_index(2);
            beta_tilde_dprime[i] = std::min(beta_tilde_dprime[i], spec.degree - 1);
            beta_dprime[i] = std::min(beta_dprime[i], beta_tilde_dprime[i]);
        }
        const JetSpec js = random_jet_spec(spec, beta_prime, beta_tilde_prime, beta_dprime, beta_tilde_dprime, rng);

        const ConstrainedKernelValue direct = jet_kernel_on(total_gram, spec, js);
        const ConstrainedKernelValue base_val = jet_kernel_on(base_gram, base, js);
        const ConstrainedKernelValue fiber_val = fiber_jet_kernel_on(fib_gram, fiber_spec, js);

        if (direct.feasible != (base_val.feasible && fiber_val.feasible)) {
            rep.infeasible_consistent = false;
            continue;
        }
        if (!direct.feasible) continue;  // both sides zero by convention
        const double fact = base_val.kernel_value * fiber_val.kernel_value;
        const double rel = std::abs(direct.kernel_value - fact) / std::max(std::abs(direct.kernel_value), 1e-300);
        if (rel > rep.max_rel_err) {
            rep.max_rel_err = rel;
            rep.worst_direct = direct.kernel_value;
            rep.worst_factored = fact;
        }
    }
    rep.pass = rep.infeasible_consistent && rep.max_rel_err <= tol;
    return rep;
}

}  // namespace kerlab
