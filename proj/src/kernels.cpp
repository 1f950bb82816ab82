#include "kerlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kerlab {

FactorBasis FactorBasis::for_domain(const Domain& d, int degree) {
    FactorBasis b;
    b.center = d.center();
    if (d.is_annulus()) {
        b.kind = Kind::Laurent;
        b.scale = std::sqrt(d.inner_radius() * d.outer_radius());
        b.norm_base = std::sqrt(d.inner_radius() / d.outer_radius());
        b.min_deg = -degree;
        b.max_deg = degree;
    } else {
        b.kind = Kind::Monomial;
        b.scale = d.outer_radius();
        b.min_deg = 0;
        b.max_deg = degree;
    }
    return b;
}

cd FactorBasis::eval(int idx, cd z) const {
    const cd zeta = (z - center) / scale;
    const int k = degree_of(idx);
    return normalizer(k) * std::pow(zeta, k);
}

cd FactorBasis::derivative(int idx, int order, cd at) const {
    const int k = degree_of(idx);
    const cd zeta = (at - center) / scale;
    // d^m/dz^m zeta^k = k (k-1) ... (k-m+1) zeta^{k-m} / scale^m, valid for
    // Laurent degrees too (k may be negative).
    cd fac = 1.0;
    for (int i = 0; i < order; ++i) fac *= static_cast<double>(k - i);
    if (fac == cd(0.0)) return 0.0;
    return normalizer(k) * fac * std::pow(zeta, k - order) / std::pow(scale, order);
}

BasisSpec BasisSpec::tensor(std::vector<FactorBasis> factors, std::uint64_t permute_seed) {
    BasisSpec spec;
    spec.factors = std::move(factors);
    size_t total = 1;
    for (const auto& f : spec.factors) total *= f.size();
    spec.enumeration.reserve(total);
    std::vector<int> idx(spec.factors.size(), 0);
    for (size_t flat = 0; flat < total; ++flat) {
        spec.enumeration.push_back(idx);
        for (size_t f = spec.factors.size(); f-- > 0;) {
            if (++idx[f] < spec.factors[f].size()) break;
            idx[f] = 0;
        }
    }
    if (permute_seed != 0) {
        Rng rng(permute_seed);
        for (size_t i = spec.enumeration.size(); i > 1; --i)
            std::swap(spec.enumeration[i - 1], spec.enumeration[rng.next_index(static_cast<int>(i))]);
    }
    return spec;
}

cd BasisSpec::eval(int a, std::span<const cd> point) const {
    if (point.size() != factors.size()) throw std::invalid_argument("BasisSpec::eval: arity mismatch");
    cd v = 1.0;
    for (size_t f = 0; f < factors.size(); ++f) v *= factors[f].eval(enumeration[a][f], point[f]);
    return v;
}

void BasisSpec::eval_all(std::span<const cd> point, std::span<cd> out) const {
    // Per-factor value tables, then products along the enumeration.
    thread_local std::vector<std::vector<cd>> tables;
    tables.resize(factors.size());
    for (size_t f = 0; f < factors.size(); ++f) {
        auto& tab = tables[f];
        tab.resize(factors[f].size());
        const cd zeta = (point[f] - factors[f].center) / factors[f].scale;
        const int lo = factors[f].min_deg;
        tab[0] = std::pow(zeta, lo);
        for (int i = 1; i < factors[f].size(); ++i) tab[i] = tab[i - 1] * zeta;
        for (int i = 0; i < factors[f].size(); ++i) tab[i] *= factors[f].normalizer(lo + i);
    }
    for (int a = 0; a < dim(); ++a) {
        cd v = 1.0;
        for (size_t f = 0; f < factors.size(); ++f) v *= tables[f][enumeration[a][f]];
        out[a] = v;
    }
}

CMatrix jet_map(const BasisSpec& basis, std::span<const cd> at, const std::vector<std::vector<int>>& alphas) {
    const int m = static_cast<int>(alphas.size());
    CMatrix jets(m, basis.dim());
    for (int r = 0; r < m; ++r) {
        if (alphas[r].size() != basis.factors.size()) throw std::invalid_argument("jet_map: alpha arity mismatch");
        for (int a = 0; a < basis.dim(); ++a) {
            cd v = 1.0;
            for (size_t f = 0; f < basis.factors.size() && v != cd(0.0); ++f) {
                const int ord = alphas[r][f];
                double fact = 1.0;
                for (int i = 2; i <= ord; ++i) fact *= i;
                v *= basis.factors[f].derivative(basis.enumeration[a][f], ord, at[f]) / fact;
            }
            jets(r, a) = v;
        }
    }
    return jets;
}

void GramMatrix::check_invariants(double herm_tol, double psd_tol) const {
    double trace = 0.0;
    for (int i = 0; i < entries.rows(); ++i) trace += entries(i, i).real();
    if (entries.max_hermitian_defect() > herm_tol * std::max(1.0, trace))
        throw std::runtime_error("GramMatrix: Hermitian defect above tolerance");
    const HermitianEig eig = hermitian_eig(entries);
    if (!eig.values.empty() && eig.values.front() < -psd_tol * std::max(trace, 1e-300))
        throw std::runtime_error("GramMatrix: negative eigenvalue beyond tolerance");
}

GramMatrix assemble_gram(const BasisSpec& basis, MeasureTag tag, const std::vector<MeasurePiece>& pieces) {
    const int dim = basis.dim();
    GramMatrix g;
    g.basis = basis;
    g.tag = tag;
    g.entries = CMatrix(dim, dim);

    std::vector<cd> vals(dim);
    for (const MeasurePiece& piece : pieces) {
        if (piece.rule.arity != basis.arity())
            throw std::invalid_argument("assemble_gram: rule arity does not match basis");
        for (size_t i = 0; i < piece.rule.size(); ++i) {
            const auto pt = piece.rule.node(i);
            const double w = piece.normalization * piece.rule.weights[i] * piece.weight(pt);
            if (!std::isfinite(w)) throw std::runtime_error("assemble_gram: non-finite weight sample");
            if (w == 0.0) continue;
            basis.eval_all(pt, vals);
            for (int a = 0; a < dim; ++a) {
                const cd va = w * vals[a];
                cd* row = g.entries.row_ptr(a);
                for (int b = a; b < dim; ++b) row[b] += va * std::conj(vals[b]);
            }
        }
    }
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b) g.entries(b, a) = std::conj(g.entries(a, b));
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            if (!std::isfinite(g.entries(a, b).real()) || !std::isfinite(g.entries(a, b).imag()))
                throw std::runtime_error("assemble_gram: non-finite Gram entry (weight/rule mismatch)");
    return g;
}

CMatrix gram_1d(const FactorBasis& basis, const FactorMeasure& fm) {
    const int n = basis.size();
    CMatrix g(n, n);
    std::vector<cd> vals(n);
    for (size_t i = 0; i < fm.rule.size(); ++i) {
        const cd z = fm.rule.nodes[i];
        const double w = fm.rule.weights[i] * fm.weight(z);
        const cd zeta = (z - basis.center) / basis.scale;
        vals[0] = std::pow(zeta, basis.min_deg);
        for (int k = 1; k < n; ++k) vals[k] = vals[k - 1] * zeta;
        for (int k = 0; k < n; ++k) vals[k] *= basis.normalizer(basis.min_deg + k);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) g(a, b) += w * vals[a] * std::conj(vals[b]);
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) g(b, a) = std::conj(g(a, b));
    return g;
}

GramMatrix assemble_gram_tensor(const BasisSpec& basis, MeasureTag tag,
                                const std::vector<std::pair<double, std::vector<CMatrix>>>& pieces) {
    const int dim = basis.dim();
    GramMatrix g;
    g.basis = basis;
    g.tag = tag;
    g.entries = CMatrix(dim, dim);
    for (const auto& [norm, factor_grams] : pieces) {
        if (factor_grams.size() != basis.factors.size())
            throw std::invalid_argument("assemble_gram_tensor: factor gram count mismatch");
        for (int a = 0; a < dim; ++a) {
            for (int b = a; b < dim; ++b) {
                cd v = norm;
                for (size_t f = 0; f < factor_grams.size(); ++f)
                    v *= factor_grams[f](basis.enumeration[a][f], basis.enumeration[b][f]);
                g.entries(a, b) += v;
            }
        }
    }
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b) g.entries(b, a) = std::conj(g.entries(a, b));
    return g;
}

OrthonormalBasis orthonormalize(const GramMatrix& gram, double rel_cutoff) {
    const int dim = gram.entries.rows();
    double trace = 0.0;
    for (int i = 0; i < dim; ++i) trace += gram.entries(i, i).real();
    if (trace <= 0.0) throw std::invalid_argument("orthonormalize: zero Gram matrix");

    const HermitianEig eig = hermitian_eig(gram.entries);
    const double cutoff = rel_cutoff * trace;

    int rank = 0;
    for (double v : eig.values)
        if (v > cutoff) ++rank;

    OrthonormalBasis onb;
    onb.basis = gram.basis;
    onb.dropped = dim - rank;
    onb.coeff = CMatrix(rank, dim);
    int m = 0;
    for (int k = 0; k < dim; ++k) {
        if (eig.values[k] <= cutoff) continue;
        const double inv_sqrt = 1.0 / std::sqrt(eig.values[k]);
        for (int a = 0; a < dim; ++a) onb.coeff(m, a) = inv_sqrt * std::conj(eig.vectors(a, k));
        ++m;
    }
    return onb;
}

cd OrthonormalBasis::eval(int m, std::span<const cd> point) const {
    std::vector<cd> vals(basis.dim());
    basis.eval_all(point, vals);
    cd acc = 0.0;
    for (int a = 0; a < basis.dim(); ++a) acc += coeff(m, a) * vals[a];
    return acc;
}

cd kernel_eval(const OrthonormalBasis& onb, std::span<const cd> z, std::span<const cd> w) {
    const int dim = onb.basis.dim();
    std::vector<cd> vz(dim), vw(dim);
    onb.basis.eval_all(z, vz);
    onb.basis.eval_all(w, vw);
    cd acc = 0.0;
    for (int m = 0; m < onb.rank(); ++m) {
        cd ez = 0.0, ew = 0.0;
        const cd* row = onb.coeff.row_ptr(m);
        for (int a = 0; a < dim; ++a) {
            ez += row[a] * vz[a];
            ew += row[a] * vw[a];
        }
        acc += ez * std::conj(ew);
    }
    return acc;
}

ExtremalResult constrained_min_norm(const GramMatrix& gram, const CMatrix& jets, std::span<const cd> targets,
                                    double rel_cutoff, double feas_tol) {
    const int dim = gram.entries.rows();
    if (jets.cols() != dim) throw std::invalid_argument("constrained_min_norm: jet map shape mismatch");
    if (static_cast<int>(targets.size()) != jets.rows())
        throw std::invalid_argument("constrained_min_norm: target count mismatch");

    double trace = 0.0;
    for (int i = 0; i < dim; ++i) trace += gram.entries(i, i).real();
    const HermitianEig eig = hermitian_eig(gram.entries);
    const double cutoff = rel_cutoff * std::max(trace, 1e-300);

    std::vector<int> keep;
    for (int k = 0; k < dim; ++k)
        if (eig.values[k] > cutoff) keep.push_back(k);
    const int rank = static_cast<int>(keep.size());
    if (rank == 0) throw std::invalid_argument("constrained_min_norm: zero Gram matrix");

    // Transform to x = Lambda^{1/2} V^H f; constraints become (A V Lambda^{-1/2}) x = b.
    CMatrix b_mat(jets.rows(), rank);
    for (int r = 0; r < jets.rows(); ++r) {
        for (int c = 0; c < rank; ++c) {
            const int k = keep[c];
            cd acc = 0.0;
            for (int a = 0; a < dim; ++a) acc += jets(r, a) * eig.vectors(a, k);
            b_mat(r, c) = acc / std::sqrt(eig.values[k]);
        }
    }

    const LeastNormSolution sol = least_norm_solve(b_mat, targets, 1e-13, feas_tol);

    ExtremalResult res;
    res.feasible = sol.feasible;
    if (!sol.feasible) return res;  // kernel_value = 0 by the empty-set convention
    res.min_norm_sq = sol.norm_sq;
    res.kernel_value = 1.0 / sol.norm_sq;
    res.minimizer.assign(dim, 0.0);
    for (int c = 0; c < rank; ++c) {
        const int k = keep[c];
        const cd scaled = sol.x[c] / std::sqrt(eig.values[k]);
        for (int a = 0; a < dim; ++a) res.minimizer[a] += eig.vectors(a, k) * scaled;
    }
    return res;
}

bool multiindex_less(std::span<const int> a, std::span<const int> b) {
    int sa = std::accumulate(a.begin(), a.end(), 0);
    int sb = std::accumulate(b.begin(), b.end(), 0);
    if (sa != sb) return sa < sb;
    for (size_t k = 0; k < a.size(); ++k)
        if (a[k] != b[k]) return a[k] < b[k];
    return false;
}

std::vector<std::vector<int>> box_indices(std::span<const int> upper) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(upper.size(), 0);
    while (true) {
        out.emplace_back(idx);
        size_t f = upper.size();
        while (f-- > 0) {
            if (++idx[f] <= upper[f]) break;
            idx[f] = 0;
            if (f == 0) return out;
        }
        if (f == static_cast<size_t>(-1)) return out;
    }
}

std::vector<std::vector<int>> graded_indices(int arity, int max_total) {
    std::vector<int> upper(arity, max_total);
    std::vector<std::vector<int>> all = box_indices(upper);
    std::vector<std::vector<int>> out;
    for (auto& a : all) {
        if (std::accumulate(a.begin(), a.end(), 0) <= max_total) out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end(),
              [](const std::vector<int>& x, const std::vector<int>& y) { return multiindex_less(x, y); });
    return out;
}

OrderSortedBasis order_sorted_onb(const GramMatrix& gram, std::span<const cd> at, int max_total_order,
                                  double rel_cutoff) {
    const std::vector<std::vector<int>> orders = graded_indices(gram.basis.arity(), max_total_order);
    const CMatrix all_jets = jet_map(gram.basis, at, orders);
    // jet_map rows are Taylor coefficients; rescale to derivatives f^(alpha).
    std::vector<double> factorials(orders.size(), 1.0);
    for (size_t r = 0; r < orders.size(); ++r)
        for (int component : orders[r])
            for (int i = 2; i <= component; ++i) factorials[r] *= i;

    OrderSortedBasis out;
    out.onb.basis = gram.basis;

    std::vector<std::vector<cd>> rows;  // minimizer coefficient rows
    for (size_t r = 0; r < orders.size(); ++r) {
        // E^alpha problem: derivative alpha equals one, all lower orders zero.
        CMatrix jets(static_cast<int>(r) + 1, gram.basis.dim());
        std::vector<cd> targets(r + 1, 0.0);
        for (size_t q = 0; q <= r; ++q)
            for (int a = 0; a < gram.basis.dim(); ++a) jets(static_cast<int>(q), a) = all_jets(static_cast<int>(q), a) * factorials[q];
        targets[r] = 1.0;
        ExtremalResult res = constrained_min_norm(gram, jets, targets, rel_cutoff);
        if (!res.feasible) continue;  // unattainable order, skipped
        const double norm = std::sqrt(res.min_norm_sq);
        std::vector<cd> row(res.minimizer);
        for (cd& v : row) v /= norm;
        rows.push_back(std::move(row));
        out.orders.push_back(orders[r]);
    }

    out.onb.coeff = CMatrix(static_cast<int>(rows.size()), gram.basis.dim());
    for (size_t m = 0; m < rows.size(); ++m)
        for (int a = 0; a < gram.basis.dim(); ++a) out.onb.coeff(static_cast<int>(m), a) = rows[m][a];
    out.onb.dropped = 0;
    return out;
}

}  // namespace kerlab
