#pragma once

#include <functional>

#include "kerlab/common.hpp"

namespace kerlab {

// Dense row-major complex matrix. Sized for desk-scale Gram work (dim up to a
// few hundred), not for large-scale linear algebra.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cd& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const cd& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    cd* row_ptr(int i) { return a_.data() + static_cast<size_t>(i) * cols_; }
    const cd* row_ptr(int i) const { return a_.data() + static_cast<size_t>(i) * cols_; }

    CMatrix adjoint() const;
    CMatrix operator*(const CMatrix& rhs) const;
    std::vector<cd> apply(std::span<const cd> x) const;

    double frobenius_norm() const;
    double max_hermitian_defect() const;  // max |A(i,j) - conj(A(j,i))|

private:
    int rows_ = 0, cols_ = 0;
    std::vector<cd> a_;
};

struct HermitianEig {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // columns; A = V diag(values) V^H
};

// Cyclic Jacobi for complex Hermitian matrices. Accurate to ~1e-14 * ||A||.
HermitianEig hermitian_eig(CMatrix a, int max_sweeps = 80, double tol = 1e-15);

struct LeastNormSolution {
    std::vector<cd> x;
    double norm_sq = 0.0;
    double residual = 0.0;  // ||Bx - b||
    bool feasible = false;
};

// Minimal-norm x with B x = b, via the Hermitian eigendecomposition of B B^H.
// Rows of B whose singular value falls below rcond * s_max are projected out;
// feasibility is judged by the residual against `feas_tol * max(1, ||b||)`.
LeastNormSolution least_norm_solve(const CMatrix& b_mat, std::span<const cd> b,
                                   double rcond = 1e-13, double feas_tol = 1e-8);

}  // namespace kerlab
