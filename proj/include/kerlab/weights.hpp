#pragma once

#include "kerlab/quadrature.hpp"

namespace kerlab {

// Catalog c-functions: c(0) = 1, c(t)e^{-t} nonincreasing, with closed-form
// integral of c(t)e^{-t} over [0, inf) so theorem constants are exact.
struct CFunction {
    enum class Kind { ConstantOne, ExpDecay };

    Kind kind = Kind::ConstantOne;
    double eps = 0.0;  // ExpDecay: c(t) = e^{-eps t}, eps in [0,1)

    static CFunction one() { return {}; }
    static CFunction exp_decay(double eps);

    double operator()(double t) const;
    double integral() const;  // closed form of int_0^inf c(t) e^{-t} dt
    double integral_numeric(int panels = 64, int nodes = 24) const;
};

// The full weight system for one configuration: factor domains D_1..D_n with
// base points z_j and exponents p_j, subharmonic fields phi_j, the c-function,
// and an optional fiber U = U_1 x .. x U_m with weight gamma.
struct WeightField {
    std::vector<Domain> factors;
    std::vector<cd> z0;
    std::vector<double> p;
    std::vector<HarmonicField> phi;  // per factor; Green-term coefficients >= 0

    CFunction c;

    std::vector<Domain> fiber_factors;  // U as a product of discs/annuli
    std::vector<cd> u0;
    std::vector<HarmonicField> gamma_exponent;  // gamma = gamma_scale * prod e^{-g_f(u_f)}
    double gamma_scale = 1.0;

    int n() const { return static_cast<int>(factors.size()); }
    int m() const { return static_cast<int>(fiber_factors.size()); }

    void validate() const;
};

// psi at w: p_0 G(w, z_0) for a single factor, max_j 2 p_j G_j(w_j, z_j) for
// products. Returns -inf at w = z0.
double psi(const WeightField& f, std::span<const cd> w);

// Interior Bergman weight: e^{-phi} c(-2 psi) in the single-factor case,
// c(-psi) prod e^{-phi_j} for products.
double rho_interior(const WeightField& f, std::span<const cd> w);

// Boundary weight on the j-th boundary piece bd(D_j) x M_j:
//   (1/p_j) (dG_j/dnu)^{-1} prod_l e^{-phi_l(w_l)};
// for n = 1 this is the single-domain lambda = e^{-phi} (p_0 dG/dnu)^{-1}.
double lambda_boundary(const WeightField& f, int j, std::span<const cd> w);

// Distinguished-boundary weight on S = prod bd(D_j):
//   prod_j (dG_j/dnu)^{-1} e^{-phi_j(w_j)}.
double lambda_distinguished(const WeightField& f, std::span<const cd> w);

double gamma_weight(const WeightField& f, std::span<const cd> u);

struct AdmissibilityReport {
    double integral = 0.0;
    double max_node_fraction = 0.0;  // largest single-node share of the integral
    bool pass = false;
};

// Integrates weight^{-a} over the rule; advisory finiteness check.
AdmissibilityReport admissibility_check(const std::function<double(cd)>& weight, const QuadratureRule& rule,
                                        double a);

// True iff sum (beta_tilde_j + 1)/p_j <= 1; *equality reports the borderline case.
bool jet_admissible(std::span<const double> p, std::span<const int> beta_tilde, bool* equality = nullptr);

}  // namespace kerlab
