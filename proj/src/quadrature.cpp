#include "kerlab/quadrature.hpp"

#include <cmath>

namespace kerlab {

double QuadratureRule::weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

void gauss_legendre(int n, double a, double b, std::vector<double>* x, std::vector<double>* w) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
    x->assign(n, 0.0);
    w->assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev estimate.
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double p0 = 0.0, p1 = 0.0, dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        (*x)[i] = 0.5 * (b + a) - 0.5 * (b - a) * t;
        (*x)[n - 1 - i] = 0.5 * (b + a) + 0.5 * (b - a) * t;
        (*w)[i] = 0.5 * (b - a) * wi;
        (*w)[n - 1 - i] = 0.5 * (b - a) * wi;
    }
}

QuadratureRule boundary_rule(const Domain& d, int n) {
    if (n < 8) throw std::invalid_argument("boundary_rule: n >= 8");
    QuadratureRule r;
    r.kind = QuadratureRule::Kind::Boundary;
    r.arity = 1;
    for (int comp = 0; comp < d.component_count(); ++comp) {
        const double radius = d.component_radius(comp);
        const double ds = kTwoPi / n;
        for (int i = 0; i < n; ++i) {
            const double s = ds * (i + 0.5);
            r.nodes.push_back(d.boundary_point(comp, s).z);
            r.weights.push_back(ds * radius);
            r.components.push_back(comp);
        }
    }
    return r;
}

QuadratureRule area_rule(const Domain& d, int n_radial, int n_angular) {
    if (n_radial < 4 || n_angular < 8) throw std::invalid_argument("area_rule: n_radial >= 4, n_angular >= 8");
    const double r0 = d.is_annulus() ? d.inner_radius() : 0.0;
    const double r1 = d.outer_radius();
    std::vector<double> rx, rw;
    gauss_legendre(n_radial, r0, r1, &rx, &rw);

    QuadratureRule r;
    r.kind = QuadratureRule::Kind::Area;
    r.arity = 1;
    const double ds = kTwoPi / n_angular;
    for (int j = 0; j < n_radial; ++j) {
        for (int i = 0; i < n_angular; ++i) {
            const double s = ds * (i + 0.5);
            r.nodes.push_back(d.center() + rx[j] * cd(std::cos(s), std::sin(s)));
            r.weights.push_back(rw[j] * rx[j] * ds);
        }
    }
    return r;
}

QuadratureRule tensor_rule(const std::vector<QuadratureRule>& rules) {
    if (rules.empty()) throw std::invalid_argument("tensor_rule: empty rule list");
    QuadratureRule r;
    r.kind = QuadratureRule::Kind::Tensor;
    r.arity = 0;
    for (const auto& f : rules) r.arity += f.arity;

    size_t total = 1;
    for (const auto& f : rules) total *= f.size();
    r.nodes.reserve(total * r.arity);
    r.weights.reserve(total);

    std::vector<size_t> idx(rules.size(), 0);
    for (size_t flat = 0; flat < total; ++flat) {
        double w = 1.0;
        for (size_t f = 0; f < rules.size(); ++f) {
            const auto pt = rules[f].node(idx[f]);
            r.nodes.insert(r.nodes.end(), pt.begin(), pt.end());
            w *= rules[f].weights[idx[f]];
        }
        r.weights.push_back(w);
        for (size_t f = rules.size(); f-- > 0;) {
            if (++idx[f] < rules[f].size()) break;
            idx[f] = 0;
        }
    }
    return r;
}

}  // namespace kerlab
