#pragma once

#include <cmath>
#include <string>

#include "floq/cmatrix.hpp"
#include "floq/errors.hpp"

namespace floq {

/// The series matrix S = sum_{k>=1} (1/k!) sum_{j=1}^k B^{k-j} c^{j-1},
/// i.e. the divided difference (e^z - e^c)/(z - c) evaluated at B. For a
/// lower-triangular B its diagonal carries the scalar values gamma_i.
struct PhiMatrix {
    CMatrix S;       // the series matrix, lower triangular
    cplx center;     // c
    CMatrix source;  // the B it was built from

    cplx gamma(int i) const { return S(i - 1, i - 1); }  // 1-based
};

namespace detail {

/// Scalar divided difference (e^b - e^c)/(b - c), switching to a three-term
/// Taylor expansion around c when b and c nearly coincide (the quotient form
/// cancels catastrophically there).
inline cplx phi_divided_difference(cplx b, cplx c) {
    const cplx d = b - c;
    if (std::abs(d) < 1e-3) return std::exp(c) * (1.0 + d / 2.0 + d * d / 6.0);
    return (std::exp(b) - std::exp(c)) / d;
}

}  // namespace detail

/// Evaluate the series directly, accumulating terms T_k = P_k / k! with
/// P_{k+1} = B P_k + c^k I, until two consecutive terms fall below
/// tol * |partial sum|. The diagonal is then cross-checked against the
/// closed forms: gamma_i = (e^{b_i} - e^c)/(b_i - c), and e^c when b_i = c.
inline PhiMatrix phi_series(const CMatrix& B, cplx c, double tol = 1e-13,
                            int max_terms = 200) {
    if (!B.is_square()) throw ShapeError("phi series needs a square matrix");
    if (tol <= 0.0) throw RangeError("tolerance must be positive");
    if (!B.is_finite()) throw NumericError("phi series of non-finite input");
    if (!is_lower_triangular_within(B, kPatternTol))
        throw ShapeError("phi series input must be lower triangular");

    const double tol_eff = std::max(tol, 1e-13);  // series floor in double precision
    const int n = B.rows();

    CMatrix term = CMatrix::identity(n);  // T_1 = I
    CMatrix sum = term;
    cplx c_pow_over_fact = c;  // c^k / k! at k = 1
    int small_in_a_row = 0;
    bool converged = false;
    for (int k = 1; k <= max_terms; ++k) {
        // T_{k+1} = (B T_k + (c^k/k!) I) / (k+1)
        CMatrix next = B * term;
        for (int i = 0; i < n; ++i) next(i, i) += c_pow_over_fact;
        next *= cplx(1.0 / (k + 1));
        term = std::move(next);
        sum += term;
        c_pow_over_fact *= c / static_cast<double>(k + 1);

        if (term.norm_inf() <= tol_eff * sum.norm_inf()) {
            if (++small_in_a_row >= 2) {
                converged = true;
                break;
            }
        } else {
            small_in_a_row = 0;
        }
    }
    if (!converged)
        throw NumericError("phi series did not converge within " + std::to_string(max_terms) +
                           " terms");

    // Diagonal must agree with the scalar closed forms.
    for (int i = 0; i < n; ++i) {
        const cplx b = B(i, i);
        const cplx closed = detail::phi_divided_difference(b, c);
        const bool near = std::abs(b - c) < 1e-3;
        // The three-term Taylor form used near b = c is itself only accurate
        // to ~|b-c|^3, so the comparison floor widens there.
        const double thr =
            std::max(10.0 * tol_eff, near ? 1e-9 : 0.0) * std::max(1.0, std::abs(closed));
        if (std::abs(sum(i, i) - closed) > thr)
            throw NumericError("phi series diagonal " + std::to_string(i + 1) +
                               " disagrees with its closed form");
    }

    return PhiMatrix{std::move(sum), c, B};
}

}  // namespace floq
