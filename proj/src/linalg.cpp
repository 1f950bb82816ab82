#include "kerlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kerlab {

CMatrix CMatrix::adjoint() const {
    CMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("CMatrix::operator*: shape mismatch");
    CMatrix r(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const cd aik = (*this)(i, k);
            if (aik == cd(0.0)) continue;
            const cd* rk = rhs.row_ptr(k);
            cd* ri = r.row_ptr(i);
            for (int j = 0; j < rhs.cols_; ++j) ri[j] += aik * rk[j];
        }
    }
    return r;
}

std::vector<cd> CMatrix::apply(std::span<const cd> x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("CMatrix::apply: shape mismatch");
    std::vector<cd> y(rows_);
    for (int i = 0; i < rows_; ++i) {
        cd acc = 0.0;
        const cd* ri = row_ptr(i);
        for (int j = 0; j < cols_; ++j) acc += ri[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cd& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double CMatrix::max_hermitian_defect() const {
    double d = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j) d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

HermitianEig hermitian_eig(CMatrix a, int max_sweeps, double tol) {
    const int n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("hermitian_eig: square matrix required");
    CMatrix v = CMatrix::identity(n);
    const double fro = std::max(a.frobenius_norm(), 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= tol * fro) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cd apq = a(p, q);
                const double h = std::abs(apq);
                if (h <= 1e-300) continue;

                // Phase-rotate column q so the pivot becomes real positive.
                const cd u = apq / h;
                const cd uc = std::conj(u);
                for (int i = 0; i < n; ++i) a(i, q) *= uc;
                for (int j = 0; j < n; ++j) a(q, j) *= u;
                for (int i = 0; i < n; ++i) v(i, q) *= uc;

                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * h);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(1.0, theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int i = 0; i < n; ++i) {
                    const cd aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const cd apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = s * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const cd vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEig out;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

LeastNormSolution least_norm_solve(const CMatrix& b_mat, std::span<const cd> b, double rcond, double feas_tol) {
    const int m = b_mat.rows();
    const int r = b_mat.cols();
    if (static_cast<int>(b.size()) != m) throw std::invalid_argument("least_norm_solve: rhs size mismatch");

    CMatrix gram(m, m);  // B B^H
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            cd acc = 0.0;
            for (int k = 0; k < r; ++k) acc += b_mat(i, k) * std::conj(b_mat(j, k));
            gram(i, j) = acc;
            gram(j, i) = std::conj(acc);
        }
    }
    HermitianEig eig = hermitian_eig(gram);
    const double smax = eig.values.empty() ? 0.0 : std::max(eig.values.back(), 0.0);
    const double cut = std::max(smax * rcond, 0.0);

    // y = (B B^H)^+ b through the spectral decomposition.
    std::vector<cd> vtb(m, 0.0);
    for (int k = 0; k < m; ++k) {
        cd acc = 0.0;
        for (int i = 0; i < m; ++i) acc += std::conj(eig.vectors(i, k)) * b[i];
        vtb[k] = (eig.values[k] > cut) ? acc / eig.values[k] : cd(0.0);
    }
    std::vector<cd> y(m, 0.0);
    for (int i = 0; i < m; ++i) {
        cd acc = 0.0;
        for (int k = 0; k < m; ++k) acc += eig.vectors(i, k) * vtb[k];
        y[i] = acc;
    }

    LeastNormSolution sol;
    sol.x.assign(r, 0.0);
    for (int k = 0; k < r; ++k) {
        cd acc = 0.0;
        for (int i = 0; i < m; ++i) acc += std::conj(b_mat(i, k)) * y[i];
        sol.x[k] = acc;
    }
    double nsq = 0.0;
    for (const cd& v : sol.x) nsq += std::norm(v);
    sol.norm_sq = nsq;

    double res = 0.0, bnorm = 0.0;
    for (int i = 0; i < m; ++i) {
        cd acc = 0.0;
        for (int k = 0; k < r; ++k) acc += b_mat(i, k) * sol.x[k];
        res += std::norm(acc - b[i]);
        bnorm += std::norm(b[i]);
    }
    sol.residual = std::sqrt(res);
    sol.feasible = sol.residual <= feas_tol * std::max(1.0, std::sqrt(bnorm));
    return sol;
}

}  // namespace kerlab
