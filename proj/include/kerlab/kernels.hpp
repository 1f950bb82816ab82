#pragma once

#include "kerlab/linalg.hpp"
#include "kerlab/weights.hpp"

namespace kerlab {

// One coordinate's holomorphic family: monomials ((z-center)/scale)^k for disc
// factors, Laurent terms for annulus factors (negative degrees included).
// Laurent terms are sup-normalized per degree (scale at the geometric-mean
// radius, normalizer (r_in/r_out)^{|k|/2}) so Gram matrices stay conditioned
// at large degree ranges.
struct FactorBasis {
    enum class Kind { Monomial, Laurent };

    Kind kind = Kind::Monomial;
    cd center{};
    double scale = 1.0;
    double norm_base = 1.0;  // per-degree normalizer n_k = norm_base^{|k|}
    int min_deg = 0;
    int max_deg = 0;

    static FactorBasis for_domain(const Domain& d, int degree);

    int size() const { return max_deg - min_deg + 1; }
    int degree_of(int idx) const { return min_deg + idx; }
    double normalizer(int k) const { return std::pow(norm_base, std::abs(k)); }
    cd eval(int idx, cd z) const;
    // order-th derivative at `at`, exact
    cd derivative(int idx, int order, cd at) const;
};

// Tensor basis over all coordinates with an explicit (optionally permuted)
// enumeration of multi-indices.
struct BasisSpec {
    std::vector<FactorBasis> factors;
    std::vector<std::vector<int>> enumeration;  // enumeration[a] = per-factor basis indices

    static BasisSpec tensor(std::vector<FactorBasis> factors, std::uint64_t permute_seed = 0);

    int dim() const { return static_cast<int>(enumeration.size()); }
    int arity() const { return static_cast<int>(factors.size()); }
    cd eval(int a, std::span<const cd> point) const;
    void eval_all(std::span<const cd> point, std::span<cd> out) const;
};

// Taylor-coefficient map at `at`: row alpha, column a holds the coefficient of
// (w - at)^alpha in the expansion of basis function a.
CMatrix jet_map(const BasisSpec& basis, std::span<const cd> at, const std::vector<std::vector<int>>& alphas);

struct MeasurePiece {
    QuadratureRule rule;  // arity equals the basis arity
    double normalization = 1.0;
    std::function<double(std::span<const cd>)> weight;
};

enum class MeasureTag { Area, Boundary, MixedBoundary, Distinguished, Fibration };

struct GramMatrix {
    BasisSpec basis;
    MeasureTag tag = MeasureTag::Area;
    CMatrix entries;

    void check_invariants(double herm_tol = 1e-12, double psd_tol = 1e-10) const;
};

// Streaming dense assembly over the pieces' nodes. Honest multi-dimensional
// integration; cost grows with node count x dim^2.
GramMatrix assemble_gram(const BasisSpec& basis, MeasureTag tag, const std::vector<MeasurePiece>& pieces);

// Fast path for weights that factor per coordinate: 1D Grams per factor,
// tensored through the enumeration. Produces the same GramMatrix contract.
struct FactorMeasure {
    QuadratureRule rule;
    std::function<double(cd)> weight;
};
CMatrix gram_1d(const FactorBasis& basis, const FactorMeasure& fm);
GramMatrix assemble_gram_tensor(const BasisSpec& basis, MeasureTag tag,
                                const std::vector<std::pair<double, std::vector<CMatrix>>>& pieces);

struct OrthonormalBasis {
    BasisSpec basis;
    CMatrix coeff;  // rank x dim; e_m = sum_a coeff(m,a) phi_a
    int dropped = 0;

    int rank() const { return coeff.rows(); }
    cd eval(int m, std::span<const cd> point) const;
};

// Symmetric-eigendecomposition orthonormalization with relative rank cutoff
// 1e-12 * trace; rank-deficient directions are dropped and counted.
OrthonormalBasis orthonormalize(const GramMatrix& gram, double rel_cutoff = 1e-12);

cd kernel_eval(const OrthonormalBasis& onb, std::span<const cd> z, std::span<const cd> w);
inline double kernel_diag(const OrthonormalBasis& onb, std::span<const cd> z) {
    return std::real(kernel_eval(onb, z, z));
}

struct ExtremalResult {
    std::vector<cd> minimizer;  // coefficients in the raw basis
    double min_norm_sq = 0.0;
    double kernel_value = 0.0;  // 1/min_norm_sq, or 0 when infeasible
    bool feasible = false;
};

// Minimize f^H G f subject to jets A f = b over the Gram's numerical range.
ExtremalResult constrained_min_norm(const GramMatrix& gram, const CMatrix& jets, std::span<const cd> targets,
                                    double rel_cutoff = 1e-12, double feas_tol = 1e-8);

// Multi-index helpers (graded lexicographic order: total degree first, then
// the first differing coordinate).
bool multiindex_less(std::span<const int> a, std::span<const int> b);
std::vector<std::vector<int>> box_indices(std::span<const int> upper);  // {alpha : alpha <= upper}
std::vector<std::vector<int>> graded_indices(int arity, int max_total);  // all |alpha| <= max_total, sorted

struct OrderSortedBasis {
    OrthonormalBasis onb;
    std::vector<std::vector<int>> orders;  // attainable orders, ascending
};

// For each attainable order alpha (graded-lex), the normalized minimizer of
// the problem { f^(alpha)(at) = 1, f^(beta)(at) = 0 for beta < alpha }.
OrderSortedBasis order_sorted_onb(const GramMatrix& gram, std::span<const cd> at, int max_total_order,
                                  double rel_cutoff = 1e-12);

}  // namespace kerlab
