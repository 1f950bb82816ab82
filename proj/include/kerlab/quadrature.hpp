#pragma once

#include "kerlab/domain.hpp"

namespace kerlab {

// Nodes are tuples of complex coordinates, flattened row-major: node i lives at
// nodes[i*arity .. i*arity+arity). Weights carry the raw measure (arclength for
// boundary rules, area for area rules); the 1/2pi and (2pi)^{-n} measure
// normalizations are applied by the caller at assembly time.
struct QuadratureRule {
    enum class Kind { Boundary, Area, Tensor };

    Kind kind = Kind::Boundary;
    int arity = 1;
    std::vector<cd> nodes;
    std::vector<double> weights;
    std::vector<int> components;  // boundary rules only: circle index per node

    size_t size() const { return weights.size(); }
    std::span<const cd> node(size_t i) const { return {nodes.data() + i * arity, static_cast<size_t>(arity)}; }
    double weight_sum() const;
};

// Composite midpoint-offset trapezoid over each boundary circle: spectrally
// accurate for analytic integrands, and no node ever lands on a symmetry axis.
QuadratureRule boundary_rule(const Domain& d, int n);

// Gauss-Legendre radial x trapezoid angular about the domain center.
QuadratureRule area_rule(const Domain& d, int n_radial, int n_angular);

QuadratureRule tensor_rule(const std::vector<QuadratureRule>& rules);

// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>* x, std::vector<double>* w);

}  // namespace kerlab
