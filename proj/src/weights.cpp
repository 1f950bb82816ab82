#include "kerlab/weights.hpp"

#include <cmath>
#include <limits>

namespace kerlab {

CFunction CFunction::exp_decay(double eps) {
    if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("CFunction::exp_decay: eps in [0,1)");
    CFunction c;
    c.kind = Kind::ExpDecay;
    c.eps = eps;
    return c;
}

double CFunction::operator()(double t) const {
    if (t < 0.0) throw std::domain_error("CFunction: t >= 0 required");
    return kind == Kind::ConstantOne ? 1.0 : std::exp(-eps * t);
}

double CFunction::integral() const {
    return kind == Kind::ConstantOne ? 1.0 : 1.0 / (1.0 + eps);
}

double CFunction::integral_numeric(int panels, int nodes) const {
    // Composite Gauss-Legendre over [0, 60]; the integrand is below 1e-26 past
    // that for every catalog member.
    double acc = 0.0;
    std::vector<double> x, w;
    const double length = 60.0 / panels;
    for (int p = 0; p < panels; ++p) {
        gauss_legendre(nodes, p * length, (p + 1) * length, &x, &w);
        for (int i = 0; i < nodes; ++i) acc += w[i] * (*this)(x[i]) * std::exp(-x[i]);
    }
    return acc;
}

void WeightField::validate() const {
    const size_t n_f = factors.size();
    if (n_f == 0) throw std::invalid_argument("WeightField: at least one factor domain");
    if (z0.size() != n_f || p.size() != n_f || phi.size() != n_f)
        throw std::invalid_argument("WeightField: z0/p/phi sizes must match factor count");
    for (size_t j = 0; j < n_f; ++j) {
        if (!(p[j] > 0.0)) throw std::invalid_argument("WeightField: exponents p_j must be positive");
        if (!factors[j].contains(z0[j])) throw std::invalid_argument("WeightField: z0_j must be interior");
        for (const auto& [a, pole] : phi[j].green_terms)
            if (a < 0.0) throw std::invalid_argument("WeightField: phi Green coefficients must be >= 0");
    }
    if (u0.size() != fiber_factors.size())
        throw std::invalid_argument("WeightField: u0 size must match fiber factor count");
    if (!gamma_exponent.empty() && gamma_exponent.size() != fiber_factors.size())
        throw std::invalid_argument("WeightField: gamma_exponent size mismatch");
    if (!(gamma_scale > 0.0)) throw std::invalid_argument("WeightField: gamma_scale must be positive");
}

double psi(const WeightField& f, std::span<const cd> w) {
    if (w.size() != f.factors.size()) throw std::invalid_argument("psi: point arity mismatch");
    if (f.n() == 1) {
        if (std::abs(w[0] - f.z0[0]) == 0.0) return -std::numeric_limits<double>::infinity();
        return f.p[0] * f.factors[0].green(w[0], f.z0[0]);
    }
    double v = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < f.n(); ++j) {
        if (std::abs(w[j] - f.z0[j]) == 0.0) continue;  // that factor contributes -inf
        v = std::max(v, 2.0 * f.p[j] * f.factors[j].green(w[j], f.z0[j]));
    }
    return v;
}

namespace {

double phi_product(const WeightField& f, std::span<const cd> w) {
    double acc = 0.0;
    for (int l = 0; l < f.n(); ++l) acc += eval_harmonic_field(f.factors[l], f.phi[l], w[l]);
    return acc;
}

}  // namespace

double rho_interior(const WeightField& f, std::span<const cd> w) {
    if (w.size() != f.factors.size()) throw std::invalid_argument("rho_interior: point arity mismatch");
    // -2 psi(single) and -psi(product) agree: both are -max_j 2 p_j G_j.
    double arg;
    if (f.n() == 1) {
        arg = -2.0 * psi(f, w);
    } else {
        arg = -psi(f, w);
    }
    const double cv = std::isinf(arg) ? 0.0 : f.c(arg);  // c(-2psi) -> 0 along psi -> -inf (exp_decay); 1 stays 1
    const double cval = (f.c.kind == CFunction::Kind::ConstantOne) ? 1.0 : cv;
    return cval * std::exp(-phi_product(f, w));
}

double lambda_boundary(const WeightField& f, int j, std::span<const cd> w) {
    if (j < 0 || j >= f.n()) throw std::out_of_range("lambda_boundary: factor index out of range");
    if (w.size() != f.factors.size()) throw std::invalid_argument("lambda_boundary: point arity mismatch");
    const double dg = f.factors[j].green_normal(w[j], f.z0[j]);
    return std::exp(-phi_product(f, w)) / (f.p[j] * dg);
}

double lambda_distinguished(const WeightField& f, std::span<const cd> w) {
    if (w.size() != f.factors.size()) throw std::invalid_argument("lambda_distinguished: point arity mismatch");
    double acc = 1.0;
    for (int j = 0; j < f.n(); ++j) {
        acc *= std::exp(-eval_harmonic_field(f.factors[j], f.phi[j], w[j])) /
               f.factors[j].green_normal(w[j], f.z0[j]);
    }
    return acc;
}

double gamma_weight(const WeightField& f, std::span<const cd> u) {
    if (u.size() != f.fiber_factors.size()) throw std::invalid_argument("gamma_weight: point arity mismatch");
    double acc = f.gamma_scale;
    for (size_t i = 0; i < f.gamma_exponent.size(); ++i)
        acc *= std::exp(-eval_harmonic_field(f.fiber_factors[i], f.gamma_exponent[i], u[i]));
    return acc;
}

AdmissibilityReport admissibility_check(const std::function<double(cd)>& weight, const QuadratureRule& rule,
                                        double a) {
    if (!(a > 0.0)) throw std::invalid_argument("admissibility_check: a > 0 required");
    AdmissibilityReport rep;
    double max_term = 0.0;
    for (size_t i = 0; i < rule.size(); ++i) {
        const double wv = weight(rule.nodes[i]);
        const double term = rule.weights[i] * std::pow(wv, -a);
        rep.integral += term;
        max_term = std::max(max_term, term);
    }
    rep.max_node_fraction = rep.integral > 0.0 ? max_term / rep.integral : 1.0;
    // A diverging integrand concentrates in single nodes or blows up outright.
    rep.pass = std::isfinite(rep.integral) && rep.integral < 1e8 && rep.max_node_fraction < 0.5;
    return rep;
}

bool jet_admissible(std::span<const double> p, std::span<const int> beta_tilde, bool* equality) {
    if (p.size() != beta_tilde.size()) throw std::invalid_argument("jet_admissible: dimension mismatch");
    double s = 0.0;
    for (size_t j = 0; j < p.size(); ++j) s += (beta_tilde[j] + 1.0) / p[j];
    if (equality) *equality = std::abs(s - 1.0) <= 1e-12;
    return s <= 1.0 + 1e-12;
}

}  // namespace kerlab
