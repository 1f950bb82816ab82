#pragma once

#include <functional>
#include <optional>

#include "kerlab/common.hpp"

namespace kerlab {

struct QuadratureRule;  // integration module

struct BoundaryPoint {
    int component = 0;
    double s = 0.0;  // parameter in [0, 2pi)
    cd z{};
};

// Planar domain catalog: discs and concentric annuli (affine images thereof).
// Every boundary component is a circle, parameterized once over [0, 2pi).
class Domain {
public:
    enum class Kind { Disc, Annulus };

    Domain() = default;  // unit disc at the origin
    static Domain disc(cd center, double radius);
    static Domain annulus(cd center, double r_inner, double r_outer);

    Kind kind() const { return kind_; }
    bool is_annulus() const { return kind_ == Kind::Annulus; }
    cd center() const { return center_; }
    double radius() const { return r_outer_; }
    double inner_radius() const { return r_inner_; }
    double outer_radius() const { return r_outer_; }
    double modulus() const { return r_inner_ / r_outer_; }  // annulus ratio

    int component_count() const { return kind_ == Kind::Disc ? 1 : 2; }
    // component 0 is the outer circle; component 1 (annulus) the inner one.
    double component_radius(int comp) const;
    BoundaryPoint boundary_point(int comp, double s) const;
    cd outward_normal(int comp, double s) const;
    double arc_factor(int comp) const { return component_radius(comp); }  // |dz/ds|
    int component_of(cd z) const;  // nearest boundary circle

    bool contains(cd z, double pad = 0.0) const;
    bool in_closure(cd z, double tol = 1e-10) const;
    double area() const;
    double boundary_length() const;

    // Green function G(z,t): harmonic off t, log-singular at t, zero on the
    // boundary. Disc: Moebius closed form. Annulus: reflected-image series
    // with tail below 1e-13.
    double green(cd z, cd t) const;
    // Real gradient of z -> G(z,t), packed as gx + i*gy.
    cd green_gradient(cd z, cd t) const;
    // Outward normal derivative of G(.,t) at a boundary point; positive for
    // interior t.
    double green_normal(const BoundaryPoint& b, cd t) const;
    double green_normal(cd boundary_z, cd t) const;

    // Harmonic measure of the inner circle (annulus): log(|t-c|/R)/log(rho).
    double harmonic_measure_inner(cd t) const;

private:
    void check_interior(cd z, const char* what) const;

    Kind kind_ = Kind::Disc;
    cd center_{};
    double r_inner_ = 0.0;
    double r_outer_ = 1.0;
    int series_terms_ = 0;  // annulus image-series truncation
};

// u = Re(sum poly_coeffs[k] * zeta^k) + log_coeff * log|zeta| + sum a_i G(., t_i),
// zeta = (z - center)/R in domain coordinates. The log term is admissible only
// on the annulus (center excluded from the domain); it generates the period
// lattice needed for flux-matched configurations.
struct HarmonicField {
    std::vector<cd> poly_coeffs;
    double log_coeff = 0.0;
    std::vector<std::pair<double, cd>> green_terms;  // (coefficient, pole)

    bool is_zero() const { return poly_coeffs.empty() && log_coeff == 0.0 && green_terms.empty(); }
};

double eval_harmonic_field(const Domain& d, const HarmonicField& u, cd z);
cd harmonic_field_gradient(const Domain& d, const HarmonicField& u, cd z);

// Period of the conjugate of u around one boundary component: the flux
// integral of grad u through that circle (outward normal), by quadrature.
double harmonic_flux(const Domain& d, const HarmonicField& u, int component, int nodes = 512);

// Character proxy: all component periods agree mod 2pi.
bool flux_matches(const Domain& d, const HarmonicField& u1, const HarmonicField& u2, double tol = 1e-8);

// (1/2pi) * contour integral of f * dG(.,t)/dnu |dz| over the rule's nodes.
cd poisson_reproduce(const Domain& d, const QuadratureRule& rule, std::span<const cd> boundary_values, cd t);

// Norms over the exhaustion D_k = {G(.,t) <= log(1 - 1/k)}, k = 2..levels+1:
// (1/2pi) * integral over bd(D_k) of |f|^2 dG_{D_k}/dnu |dz|. Nondecreasing in k;
// the last entry estimates the squared Hardy norm.
std::vector<double> hardy_norm_exhaustion(const Domain& d, const std::function<cd(cd)>& f, cd t,
                                          int levels, int nodes = 512);

}  // namespace kerlab
