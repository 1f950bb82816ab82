#include "kerlab/domain.hpp"

#include <algorithm>
#include <cmath>

#include "kerlab/quadrature.hpp"

namespace kerlab {

namespace {

// Annulus prime factor P(x) = (1-x) * prod_{k=1..K} (1 - q^k x)(1 - q^k / x),
// q = rho^2. Only log|P| and P'/P are needed.
double log_abs_prime(cd x, double q, int terms) {
    double acc = std::log(std::abs(1.0 - x));
    double qk = 1.0;
    for (int k = 1; k <= terms; ++k) {
        qk *= q;
        acc += std::log(std::abs(1.0 - qk * x));
        acc += std::log(std::abs(1.0 - qk / x));
    }
    return acc;
}

cd dlog_prime(cd x, double q, int terms) {
    cd acc = -1.0 / (1.0 - x);
    double qk = 1.0;
    for (int k = 1; k <= terms; ++k) {
        qk *= q;
        acc += -qk / (1.0 - qk * x);
        acc += (qk / (x * x)) / (1.0 - qk / x);
    }
    return acc;
}

}  // namespace

Domain Domain::disc(cd center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("Domain::disc: radius must be positive");
    Domain d;
    d.kind_ = Kind::Disc;
    d.center_ = center;
    d.r_outer_ = radius;
    return d;
}

Domain Domain::annulus(cd center, double r_inner, double r_outer) {
    if (!(r_inner > 0.0) || !(r_outer > r_inner))
        throw std::invalid_argument("Domain::annulus: need 0 < r_inner < r_outer");
    Domain d;
    d.kind_ = Kind::Annulus;
    d.center_ = center;
    d.r_inner_ = r_inner;
    d.r_outer_ = r_outer;
    const double rho = r_inner / r_outer;
    // Tail of the image series is below 4 rho^{2K+1} / (1-rho)^2.
    int k = 1;
    double bound = 4.0 * std::pow(rho, 3) / ((1.0 - rho) * (1.0 - rho));
    while (bound > 1e-14 && k < 4000) {
        ++k;
        bound *= rho * rho;
    }
    d.series_terms_ = k;
    return d;
}

double Domain::component_radius(int comp) const {
    if (comp == 0) return r_outer_;
    if (comp == 1 && kind_ == Kind::Annulus) return r_inner_;
    throw std::out_of_range("Domain: boundary component index out of range");
}

BoundaryPoint Domain::boundary_point(int comp, double s) const {
    const double r = component_radius(comp);
    return BoundaryPoint{comp, s, center_ + r * cd(std::cos(s), std::sin(s))};
}

cd Domain::outward_normal(int comp, double s) const {
    component_radius(comp);  // range check
    const cd e(std::cos(s), std::sin(s));
    return comp == 0 ? e : -e;
}

int Domain::component_of(cd z) const {
    if (kind_ == Kind::Disc) return 0;
    const double r = std::abs(z - center_);
    return (std::abs(r - r_outer_) <= std::abs(r - r_inner_)) ? 0 : 1;
}

bool Domain::contains(cd z, double pad) const {
    const double r = std::abs(z - center_);
    if (kind_ == Kind::Disc) return r < r_outer_ - pad;
    return r > r_inner_ + pad && r < r_outer_ - pad;
}

bool Domain::in_closure(cd z, double tol) const {
    const double r = std::abs(z - center_);
    if (kind_ == Kind::Disc) return r <= r_outer_ + tol;
    return r >= r_inner_ - tol && r <= r_outer_ + tol;
}

double Domain::area() const {
    if (kind_ == Kind::Disc) return kPi * r_outer_ * r_outer_;
    return kPi * (r_outer_ * r_outer_ - r_inner_ * r_inner_);
}

double Domain::boundary_length() const {
    return kind_ == Kind::Disc ? kTwoPi * r_outer_ : kTwoPi * (r_outer_ + r_inner_);
}

void Domain::check_interior(cd z, const char* what) const {
    if (!contains(z))
        throw std::domain_error(std::string("Domain: ") + what + " must be an interior point");
}

double Domain::green(cd z, cd t) const {
    check_interior(t, "Green pole t");
    if (!in_closure(z)) throw std::domain_error("Domain::green: z outside closure");
    if (std::abs(z - t) == 0.0) throw std::domain_error("Domain::green: z == t singularity");

    const cd zeta = (z - center_) / r_outer_;
    const cd tau = (t - center_) / r_outer_;
    if (kind_ == Kind::Disc) {
        return std::log(std::abs(zeta - tau)) - std::log(std::abs(1.0 - zeta * std::conj(tau)));
    }
    const double rho = modulus();
    const double q = rho * rho;
    const double g = log_abs_prime(zeta / tau, q, series_terms_) -
                     log_abs_prime(zeta * std::conj(tau), q, series_terms_) + std::log(std::abs(tau)) -
                     std::log(std::abs(tau)) * std::log(std::abs(zeta)) / std::log(rho);
    return g;
}

cd Domain::green_gradient(cd z, cd t) const {
    check_interior(t, "Green pole t");
    if (!in_closure(z, 1e-9)) throw std::domain_error("Domain::green_gradient: z outside closure");
    if (std::abs(z - t) == 0.0) throw std::domain_error("Domain::green_gradient: z == t singularity");

    const cd zeta = (z - center_) / r_outer_;
    const cd tau = (t - center_) / r_outer_;
    cd grad_zeta;
    if (kind_ == Kind::Disc) {
        grad_zeta = std::conj(1.0 / (zeta - tau)) + std::conj(std::conj(tau) / (1.0 - zeta * std::conj(tau)));
    } else {
        const double rho = modulus();
        const double q = rho * rho;
        grad_zeta = std::conj(dlog_prime(zeta / tau, q, series_terms_) / tau) -
                    std::conj(std::conj(tau) * dlog_prime(zeta * std::conj(tau), q, series_terms_)) -
                    (std::log(std::abs(tau)) / std::log(rho)) * std::conj(1.0 / zeta);
    }
    return grad_zeta / r_outer_;
}

double Domain::green_normal(const BoundaryPoint& b, cd t) const {
    const cd n = outward_normal(b.component, b.s);
    const double v = std::real(std::conj(n) * green_gradient(b.z, t));
    if (!(v > 0.0)) throw std::runtime_error("Domain::green_normal: nonpositive normal derivative");
    return v;
}

double Domain::green_normal(cd boundary_z, cd t) const {
    const int comp = component_of(boundary_z);
    const cd dir = (boundary_z - center_) / std::abs(boundary_z - center_);
    const cd n = comp == 0 ? dir : -dir;
    const double v = std::real(std::conj(n) * green_gradient(boundary_z, t));
    if (!(v > 0.0)) throw std::runtime_error("Domain::green_normal: nonpositive normal derivative");
    return v;
}

double Domain::harmonic_measure_inner(cd t) const {
    if (kind_ != Kind::Annulus) throw std::domain_error("harmonic_measure_inner: annulus only");
    check_interior(t, "t");
    return std::log(std::abs(t - center_) / r_outer_) / std::log(modulus());
}

double eval_harmonic_field(const Domain& d, const HarmonicField& u, cd z) {
    const cd zeta = (z - d.center()) / d.outer_radius();
    double v = 0.0;
    cd pw = 1.0;
    for (const cd& ck : u.poly_coeffs) {
        v += std::real(ck * pw);
        pw *= zeta;
    }
    if (u.log_coeff != 0.0) {
        if (!d.is_annulus()) throw std::domain_error("HarmonicField: log term requires an annulus");
        v += u.log_coeff * std::log(std::abs(zeta));
    }
    for (const auto& [a, pole] : u.green_terms) v += a * d.green(z, pole);
    return v;
}

cd harmonic_field_gradient(const Domain& d, const HarmonicField& u, cd z) {
    const double scale = d.outer_radius();
    const cd zeta = (z - d.center()) / scale;
    cd dp = 0.0;
    cd pw = 1.0;
    for (size_t k = 1; k < u.poly_coeffs.size(); ++k) {
        dp += u.poly_coeffs[k] * static_cast<double>(k) * pw;
        pw *= zeta;
    }
    cd g = std::conj(dp) / scale;  // grad Re(p) = conj(p')
    if (u.log_coeff != 0.0) g += u.log_coeff * std::conj(1.0 / zeta) / scale;
    for (const auto& [a, pole] : u.green_terms) g += a * d.green_gradient(z, pole);
    return g;
}

double harmonic_flux(const Domain& d, const HarmonicField& u, int component, int nodes) {
    d.component_radius(component);  // range check
    const double r = d.component_radius(component);
    double acc = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double s = kTwoPi * (i + 0.5) / nodes;
        const BoundaryPoint b = d.boundary_point(component, s);
        const cd n = d.outward_normal(component, s);
        acc += std::real(std::conj(n) * harmonic_field_gradient(d, u, b.z));
    }
    return acc * kTwoPi * r / nodes;
}

bool flux_matches(const Domain& d, const HarmonicField& u1, const HarmonicField& u2, double tol) {
    for (int c = 0; c < d.component_count(); ++c) {
        const double f1 = harmonic_flux(d, u1, c);
        const double f2 = harmonic_flux(d, u2, c);
        const double diff = std::remainder(f1 - f2, kTwoPi);
        if (std::abs(diff) > tol) return false;
    }
    return true;
}

cd poisson_reproduce(const Domain& d, const QuadratureRule& rule, std::span<const cd> boundary_values, cd t) {
    if (rule.kind != QuadratureRule::Kind::Boundary)
        throw std::invalid_argument("poisson_reproduce: boundary rule required");
    if (boundary_values.size() != rule.size())
        throw std::invalid_argument("poisson_reproduce: sample/rule length mismatch");
    cd acc = 0.0;
    for (size_t i = 0; i < rule.size(); ++i) {
        const cd z = rule.nodes[i];
        acc += boundary_values[i] * d.green_normal(z, t) * rule.weights[i];
    }
    return acc / kTwoPi;
}

namespace {

// Disc level curves of G(.,t) are circles: the Moebius preimage of |w| = e^level.
// Exact parameterization; the scale factors of |grad G| and |dz/ds| cancel.
double disc_level_integral(const Domain& d, const std::function<cd(cd)>& f, cd t, double level,
                           int nodes, double* flux) {
    const cd tau = (t - d.center()) / d.outer_radius();
    const double rk = std::exp(level);
    double acc = 0.0;
    const double ds = kTwoPi / nodes;
    for (int i = 0; i < nodes; ++i) {
        const double s = ds * (i + 0.5);
        const cd w = rk * cd(std::cos(s), std::sin(s));
        const cd zeta = (w + tau) / (1.0 + std::conj(tau) * w);
        const cd z = d.center() + d.outer_radius() * zeta;
        // phi(zeta) = (zeta - tau)/(1 - conj(tau) zeta), |phi| = rk on the curve
        const cd phi_prime = (1.0 - std::norm(tau)) / ((1.0 - std::conj(tau) * zeta) * (1.0 - std::conj(tau) * zeta));
        const double grad_norm = std::abs(phi_prime) / rk;  // |grad log|phi|| in zeta coords
        const cd m_prime = (1.0 - std::norm(tau)) / ((1.0 + std::conj(tau) * w) * (1.0 + std::conj(tau) * w));
        const double arc = std::abs(m_prime) * rk * ds;  // |dzeta/ds| ds
        acc += std::norm(f(z)) * grad_norm * arc;
        *flux += grad_norm * arc;
    }
    return acc;
}

// Annulus level curves (two components hugging the boundary circles) traced
// radially from each circle; valid for levels above the saddle of G(.,t).
std::optional<double> level_radius_from_component(const Domain& d, cd t, double level, int comp, double s) {
    const cd e(std::cos(s), std::sin(s));
    const double lo = d.inner_radius();
    const double hi = d.outer_radius();

    auto g = [&](double r) { return d.green(d.center() + r * e, t); };

    // March inward from the boundary circle until G drops below the level.
    const int steps = 200;
    double prev = (comp == 0) ? hi : lo;
    for (int i = 1; i <= steps; ++i) {
        const double frac = static_cast<double>(i) / steps;
        const double r = (comp == 0) ? hi - frac * (hi - lo) : lo + frac * (hi - lo);
        if (std::abs((d.center() + r * e) - t) < 1e-12) continue;
        const double val = g(r);
        if (val <= level) {
            double a = std::min(prev, r), b = std::max(prev, r);
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (a + b);
                const bool mid_above = g(mid) > level;
                if (comp == 0) {
                    // G > level on the outer side of the crossing
                    if (mid_above) b = mid;
                    else a = mid;
                } else {
                    if (mid_above) a = mid;
                    else b = mid;
                }
            }
            return 0.5 * (a + b);
        }
        prev = r;
    }
    return std::nullopt;
}

double annulus_level_integral(const Domain& d, const std::function<cd(cd)>& f, cd t, double level,
                              int comp, int nodes, double* flux) {
    double acc = 0.0;
    const double ds = kTwoPi / nodes;
    for (int i = 0; i < nodes; ++i) {
        const double s = ds * (i + 0.5);
        const auto rad = level_radius_from_component(d, t, level, comp, s);
        if (!rad)
            throw std::runtime_error(
                "hardy_norm_exhaustion: level below the saddle of G(.,t); component lost");
        const cd e(std::cos(s), std::sin(s));
        const cd z = d.center() + *rad * e;
        const cd grad = d.green_gradient(z, t);
        const double g_r = std::real(std::conj(e) * grad);
        const double g_s = *rad * std::real(std::conj(cd(0, 1) * e) * grad);
        if (std::abs(g_r) < 1e-14) throw std::runtime_error("hardy_norm_exhaustion: tangential level curve");
        const double dr_ds = -g_s / g_r;
        const double w = std::abs(grad) * std::hypot(dr_ds, *rad) * ds;
        acc += std::norm(f(z)) * w;
        *flux += w;
    }
    return acc;
}

// Below the saddle of G(.,t) the level set is a single closed curve around t;
// trace it with rays from the pole.
double around_pole_level_integral(const Domain& d, const std::function<cd(cd)>& f, cd t, double level,
                                  int nodes, double* flux) {
    double acc = 0.0;
    const double ds = kTwoPi / nodes;
    for (int i = 0; i < nodes; ++i) {
        const double s = ds * (i + 0.5);
        const cd e(std::cos(s), std::sin(s));
        auto g = [&](double r) { return d.green(t + r * e, t); };

        const int steps = 400;
        double lo = 1e-9 * d.outer_radius();
        double hit = -1.0;
        for (int k = 1; k <= steps; ++k) {
            const double r = k * (2.0 * d.outer_radius()) / steps;
            if (!d.in_closure(t + r * e, 1e-14)) break;
            if (g(r) > level) {
                hit = r;
                break;
            }
            lo = r;
        }
        if (hit < 0.0) throw std::runtime_error("hardy_norm_exhaustion: level curve not found around the pole");
        double a = lo, b = hit;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (a + b);
            if (g(mid) > level) b = mid;
            else a = mid;
        }
        const double rad = 0.5 * (a + b);
        const cd z = t + rad * e;
        const cd grad = d.green_gradient(z, t);
        const double g_r = std::real(std::conj(e) * grad);
        const double g_s = rad * std::real(std::conj(cd(0, 1) * e) * grad);
        if (std::abs(g_r) < 1e-14) throw std::runtime_error("hardy_norm_exhaustion: tangential level curve");
        const double dr_ds = -g_s / g_r;
        const double w = std::abs(grad) * std::hypot(dr_ds, rad) * ds;
        acc += std::norm(f(z)) * w;
        *flux += w;
    }
    return acc;
}

}  // namespace

std::vector<double> hardy_norm_exhaustion(const Domain& d, const std::function<cd(cd)>& f, cd t,
                                          int levels, int nodes) {
    if (levels < 1) throw std::invalid_argument("hardy_norm_exhaustion: levels >= 1");
    if (!d.contains(t)) throw std::domain_error("hardy_norm_exhaustion: t must be interior");
    std::vector<double> out;
    out.reserve(levels);
    for (int k = 2; k <= levels + 1; ++k) {
        const double level = std::log(1.0 - 1.0 / k);
        double acc = 0.0;
        double flux = 0.0;
        if (d.kind() == Domain::Kind::Disc) {
            acc = disc_level_integral(d, f, t, level, nodes, &flux);
        } else {
            try {
                for (int comp = 0; comp < 2; ++comp)
                    acc += annulus_level_integral(d, f, t, level, comp, nodes, &flux);
            } catch (const std::runtime_error&) {
                acc = 0.0;
                flux = 0.0;
                acc = around_pole_level_integral(d, f, t, level, nodes, &flux);
            }
        }
        // The curve integral of dG_{D_k}/dnu must recover the full 2pi flux.
        if (std::abs(flux / kTwoPi - 1.0) > 1e-6)
            throw std::runtime_error("hardy_norm_exhaustion: level-curve flux check failed");
        out.push_back(acc / kTwoPi);
    }
    return out;
}

}  // namespace kerlab
