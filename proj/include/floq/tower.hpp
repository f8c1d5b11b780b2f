#pragma once

#include <string>
#include <utility>
#include <vector>

#include "floq/cmatrix.hpp"
#include "floq/errors.hpp"

namespace floq {

/// The finite-depth tower C^1 <- C^2 <- ... <- C^N with coordinate-truncation
/// projections. Level n carries dimension n; projecting from level j down to
/// level i drops components i+1..j.
class Tower {
public:
    explicit Tower(int depth) : depth_(depth) {
        if (depth < 1) throw RangeError("tower depth must be >= 1");
    }

    int depth() const { return depth_; }

    std::vector<cplx> project(const std::vector<cplx>& x, int from_level, int to_level) const {
        if (from_level < 1 || from_level > depth_ || to_level < 1 || to_level > from_level)
            throw RangeError("projection levels out of range");
        if (static_cast<int>(x.size()) != from_level)
            throw ShapeError("vector length does not match source level");
        return std::vector<cplx>(x.begin(), x.begin() + to_level);
    }

private:
    int depth_;
};

/// p_i(x) = max modulus of the first i coordinates.
inline double seminorm(const std::vector<cplx>& x, int i) {
    if (i < 1 || i > static_cast<int>(x.size()))
        throw RangeError("seminorm index " + std::to_string(i) + " out of range");
    double m = 0.0;
    for (int k = 0; k < i; ++k) m = std::max(m, std::abs(x[static_cast<std::size_t>(k)]));
    return m;
}

/// The i-th seminorm as a callable value.
struct Seminorm {
    int index;
    double operator()(const std::vector<cplx>& x) const { return seminorm(x, index); }
};

/// A projective system of linear maps M_1, ..., M_N stored as the single
/// N-by-N matrix M_N; each level is its leading principal block, so the
/// strict upper triangle vanishes. Immutable after construction. Entries
/// above the diagonal are accepted up to pattern_tol and then stored as
/// exact zeros.
class NestedMatrix {
public:
    explicit NestedMatrix(CMatrix top, double pattern_tol = kPatternTol) {
        if (!top.is_square()) throw ShapeError("nested matrix must be square");
        if (top.rows() < 1) throw RangeError("nested matrix depth must be >= 1");
        if (!top.is_finite()) throw NumericError("nested matrix has non-finite entries");
        for (int r = 0; r < top.rows(); ++r)
            for (int c = r + 1; c < top.cols(); ++c)
                if (std::abs(top(r, c)) > pattern_tol)
                    throw ValidationError("entry (" + std::to_string(r + 1) + "," +
                                          std::to_string(c + 1) +
                                          ") breaks the nested zero pattern");
        m_ = cleared_strict_upper(std::move(top));
    }

    int depth() const { return m_.rows(); }

    /// The depth-N matrix M_N.
    const CMatrix& top() const { return m_; }

    /// M_n, the leading n-by-n principal block (levels are 1-based).
    CMatrix level(int n) const {
        if (n < 1 || n > depth()) throw RangeError("level " + std::to_string(n) + " out of range");
        return m_.leading(n);
    }

    std::vector<cplx> diagonal() const { return m_.diagonal(); }

    friend bool operator==(const NestedMatrix& a, const NestedMatrix& b) {
        return a.m_ == b.m_;
    }

private:
    CMatrix m_;
};

/// A NestedMatrix whose levels are all invertible, i.e. every diagonal entry
/// stays above the singular threshold.
class InvertibleNestedMatrix : public NestedMatrix {
public:
    explicit InvertibleNestedMatrix(CMatrix top, double pattern_tol = kPatternTol,
                                    double singular_tol = kSingularTol)
        : NestedMatrix(std::move(top), pattern_tol) {
        const auto d = diagonal();
        for (std::size_t k = 0; k < d.size(); ++k)
            if (std::abs(d[k]) <= singular_tol)
                throw ValidationError("diagonal entry " + std::to_string(k + 1) +
                                      " below singular threshold; tower not invertible");
    }

    explicit InvertibleNestedMatrix(NestedMatrix n, double singular_tol = kSingularTol)
        : InvertibleNestedMatrix(n.top(), kPatternTol, singular_tol) {}
};

/// Leading principal tower of depth to_level.
inline NestedMatrix truncate(const NestedMatrix& m, int to_level) {
    if (to_level < 1 || to_level > m.depth())
        throw RangeError("truncation level " + std::to_string(to_level) + " out of range");
    return NestedMatrix(m.level(to_level));
}

inline InvertibleNestedMatrix truncate(const InvertibleNestedMatrix& m, int to_level) {
    if (to_level < 1 || to_level > m.depth())
        throw RangeError("truncation level " + std::to_string(to_level) + " out of range");
    return InvertibleNestedMatrix(m.level(to_level));
}

/// True iff f commutes with all coordinate truncations, i.e. every entry
/// strictly above the diagonal has modulus <= tol.
inline bool is_projective_map(const CMatrix& f, double tol) {
    if (!f.is_square()) throw ShapeError("projective-map test needs a square matrix");
    return is_lower_triangular_within(f, tol);
}

}  // namespace floq
