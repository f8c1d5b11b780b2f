#pragma once

#include <cmath>
#include <string>

#include "floq/cmatrix.hpp"
#include "floq/errors.hpp"
#include "floq/tower.hpp"

namespace floq {

/// e^B by scaling and squaring around a truncated Taylor core: scale so the
/// row-sum norm is <= 0.5, sum the series until two consecutive terms fall
/// below tol relative to the partial sum, square back. Lower-triangular
/// input yields exactly lower-triangular output (zero entries never mix in).
inline CMatrix matrix_exp(const CMatrix& B, double tol = 1e-14) {
    if (!B.is_square()) throw ShapeError("matrix exponential needs a square matrix");
    if (tol <= 0.0) throw RangeError("tolerance must be positive");
    if (!B.is_finite()) throw NumericError("matrix exponential of non-finite input");

    const int n = B.rows();
    const double norm = B.norm_inf();

    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        if (squarings > 60) throw NumericError("matrix norm too large for exponential scaling");
    }
    const double scale = std::ldexp(1.0, -squarings);

    CMatrix A = scale * B;
    CMatrix sum = CMatrix::identity(n);
    CMatrix term = CMatrix::identity(n);
    int small_in_a_row = 0;
    const int max_terms = 64;  // ample for norm <= 0.5
    int k = 1;
    for (; k <= max_terms; ++k) {
        term = (1.0 / k) * (A * term);
        sum += term;
        if (term.norm_inf() <= tol * sum.norm_inf()) {
            if (++small_in_a_row >= 2) break;
        } else {
            small_in_a_row = 0;
        }
    }
    if (k > max_terms) throw NumericError("matrix exponential series did not converge");

    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    if (!sum.is_finite()) throw NumericError("matrix exponential overflow");
    return sum;
}

/// Levelwise exponential of a tower: exp maps projective systems to
/// projective systems, so exponentiating the top level and reading the
/// principal blocks gives every exp(B_n) at once.
inline InvertibleNestedMatrix exp_tower(const NestedMatrix& Bbar, double tol = 1e-14) {
    CMatrix e = matrix_exp(Bbar.top(), tol);
    return InvertibleNestedMatrix(std::move(e));
}

}  // namespace floq
