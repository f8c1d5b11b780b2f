#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "floq/errors.hpp"

namespace floq {

using cplx = std::complex<double>;

inline constexpr double kPatternTol = 1e-12;   // structural-zero acceptance
inline constexpr double kSingularTol = 1e-12;  // pivot / eigenvalue floor

/// Dense complex matrix, row-major. The workhorse value type at desk scale
/// (dimensions up to a few dozen); no sparsity, no expression templates.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
    }
    explicit CMatrix(int n) : CMatrix(n, n) {}

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    const cplx& operator()(int r, int c) const {
        return a_[static_cast<std::size_t>(r) * cols_ + c];
    }

    /// Leading m-by-m principal block.
    CMatrix leading(int m) const {
        if (m < 0 || m > rows_ || m > cols_)
            throw RangeError("leading block size " + std::to_string(m) + " out of range");
        CMatrix out(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) out(r, c) = (*this)(r, c);
        return out;
    }

    std::vector<cplx> diagonal() const {
        const int n = std::min(rows_, cols_);
        std::vector<cplx> d(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = (*this)(i, i);
        return d;
    }

    /// Max entry modulus.
    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    /// Max absolute row sum (operator infinity norm).
    double norm_inf() const {
        double m = 0.0;
        for (int r = 0; r < rows_; ++r) {
            double s = 0.0;
            for (int c = 0; c < cols_; ++c) s += std::abs((*this)(r, c));
            m = std::max(m, s);
        }
        return m;
    }

    bool is_finite() const {
        for (const cplx& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    std::vector<cplx> apply(const std::vector<cplx>& x) const {
        if (static_cast<int>(x.size()) != cols_) throw ShapeError("vector length mismatch");
        std::vector<cplx> y(static_cast<std::size_t>(rows_));
        for (int r = 0; r < rows_; ++r) {
            cplx s = 0.0;
            for (int c = 0; c < cols_; ++c) s += (*this)(r, c) * x[static_cast<std::size_t>(c)];
            y[static_cast<std::size_t>(r)] = s;
        }
        return y;
    }

    CMatrix& operator+=(const CMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    CMatrix& operator-=(const CMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    CMatrix& operator*=(cplx s) {
        for (cplx& z : a_) z *= s;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(double s, CMatrix a) { return a *= cplx(s); }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        if (a.cols_ != b.rows_) throw ShapeError("matrix product shape mismatch");
        CMatrix out(a.rows_, b.cols_);
        for (int r = 0; r < a.rows_; ++r)
            for (int k = 0; k < a.cols_; ++k) {
                const cplx ark = a(r, k);
                for (int c = 0; c < b.cols_; ++c) out(r, c) += ark * b(k, c);
            }
        return out;
    }

    friend bool operator==(const CMatrix& a, const CMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    void check_same_shape(const CMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix shape mismatch");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> a_;
};

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError("matrix shape mismatch");
    double m = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
    return m;
}

/// True iff every entry strictly above the diagonal has modulus <= tol.
inline bool is_lower_triangular_within(const CMatrix& m, double tol) {
    for (int r = 0; r < m.rows(); ++r)
        for (int c = r + 1; c < m.cols(); ++c)
            if (std::abs(m(r, c)) > tol) return false;
    return true;
}

/// Copy with the strict upper triangle set to exact zeros.
inline CMatrix cleared_strict_upper(CMatrix m) {
    for (int r = 0; r < m.rows(); ++r)
        for (int c = r + 1; c < m.cols(); ++c) m(r, c) = 0.0;
    return m;
}

/// Solve y * L = mu for the row vector y, with L lower triangular.
/// Runs column by column from the last: y_j = (mu_j - sum_{k>j} y_k L_kj) / L_jj.
inline std::vector<cplx> solve_row_lower(const CMatrix& L, const std::vector<cplx>& mu,
                                         double pivot_floor = kSingularTol) {
    if (!L.is_square()) throw ShapeError("triangular solve needs a square matrix");
    const int n = L.rows();
    if (static_cast<int>(mu.size()) != n) throw ShapeError("right-hand side length mismatch");
    std::vector<cplx> y(static_cast<std::size_t>(n));
    for (int j = n - 1; j >= 0; --j) {
        cplx s = mu[static_cast<std::size_t>(j)];
        for (int k = j + 1; k < n; ++k) s -= y[static_cast<std::size_t>(k)] * L(k, j);
        const cplx piv = L(j, j);
        if (std::abs(piv) < pivot_floor)
            throw ConditioningError("triangular solve pivot " + std::to_string(j + 1) +
                                    " below threshold");
        y[static_cast<std::size_t>(j)] = s / piv;
    }
    return y;
}

/// Inverse of a lower-triangular matrix by forward substitution, one column
/// at a time. The result is lower triangular with exact zeros above.
inline CMatrix lower_triangular_inverse(const CMatrix& L, double pivot_floor = kSingularTol) {
    if (!L.is_square()) throw ShapeError("triangular inverse needs a square matrix");
    const int n = L.rows();
    CMatrix inv(n, n);
    for (int j = 0; j < n; ++j) {
        // solve L x = e_j; x vanishes above row j
        for (int i = j; i < n; ++i) {
            cplx s = (i == j) ? cplx(1.0) : cplx(0.0);
            for (int k = j; k < i; ++k) s -= L(i, k) * inv(k, j);
            const cplx piv = L(i, i);
            if (std::abs(piv) < pivot_floor)
                throw ConditioningError("triangular inverse pivot " + std::to_string(i + 1) +
                                        " below threshold");
            inv(i, j) = s / piv;
        }
    }
    return inv;
}

}  // namespace floq
