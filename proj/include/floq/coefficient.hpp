#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "floq/errors.hpp"
#include "floq/tower.hpp"
#include "floq/trig_poly.hpp"

namespace floq {

/// Pass/fail record of a residual check, with per-level detail where the
/// check is levelwise.
struct CheckReport {
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::vector<double> per_level;
    std::string note;
};

/// A time-periodic projective system of coefficients: one trig polynomial
/// per lower-triangular position (row, col), absent positions are zero.
/// Every evaluation A(t) is structurally a NestedMatrix. The tower's period
/// field is the claim checked by check_coefficient_periodicity; the entries
/// themselves must agree on one common period.
class CoefficientTower {
public:
    using EntryMap = std::map<std::pair<int, int>, TrigPolynomial>;

    CoefficientTower(int depth, double period, EntryMap entries)
        : depth_(depth), period_(period), entries_(std::move(entries)) {
        if (depth_ < 1) throw RangeError("coefficient depth must be >= 1");
        if (!(period_ > 0.0)) throw ValidationError("coefficient period must be positive");
        double shared = 0.0;
        for (const auto& [pos, poly] : entries_) {
            const auto [row, col] = pos;
            if (col > row)
                throw ValidationError("upper-triangular entry (" + std::to_string(row) + "," +
                                      std::to_string(col) + ")");
            if (row < 1 || row > depth_ || col < 1)
                throw ValidationError("entry (" + std::to_string(row) + "," +
                                      std::to_string(col) + ") outside depth " +
                                      std::to_string(depth_));
            if (shared == 0.0)
                shared = poly.period();
            else if (poly.period() != shared)
                throw ValidationError("entries do not share one period");
        }
    }

    int depth() const { return depth_; }
    double period() const { return period_; }
    const EntryMap& entries() const { return entries_; }

    const TrigPolynomial* entry(int row, int col) const {
        auto it = entries_.find({row, col});
        return it == entries_.end() ? nullptr : &it->second;
    }

    /// A(t) as a nested matrix; t is extended periodically.
    NestedMatrix eval(double t) const { return NestedMatrix(eval_level(t, depth_)); }

    /// Leading n-by-n block of A(t). Evaluating a level directly gives the
    /// same bits as truncating the top-level evaluation.
    CMatrix eval_level(double t, int n) const {
        if (n < 1 || n > depth_) throw RangeError("level out of range");
        CMatrix a(n, n);
        for (const auto& [pos, poly] : entries_) {
            const auto [row, col] = pos;
            if (row <= n) a(row - 1, col - 1) = poly.eval(t);
        }
        return a;
    }

    /// Rescale to period 1: with s = t/T the equation in s has coefficient
    /// T * A(T s), which for trig polynomials is exact coefficient scaling.
    CoefficientTower normalized() const {
        if (period_ == 1.0 && entries_shared_period() == 1.0) return *this;
        EntryMap scaled;
        for (const auto& [pos, poly] : entries_) scaled.emplace(pos, poly.scaled(period_, 1.0));
        return CoefficientTower(depth_, 1.0, std::move(scaled));
    }

private:
    double entries_shared_period() const {
        return entries_.empty() ? period_ : entries_.begin()->second.period();
    }

    int depth_;
    double period_;
    EntryMap entries_;
};

/// Max over sampled t of |A(t + period) - A(t)|, per level and overall. By
/// the projective structure, levelwise periodicity and tower periodicity
/// coincide; the report carries both views.
inline CheckReport check_coefficient_periodicity(const CoefficientTower& A, int samples,
                                                 double tol) {
    if (samples < 1) throw RangeError("sample count must be >= 1");
    const double T = A.period();
    CheckReport rep;
    rep.tolerance = tol;
    rep.per_level.assign(static_cast<std::size_t>(A.depth()), 0.0);
    for (int m = 0; m < samples; ++m) {
        const double t = T * (static_cast<double>(m) / samples);
        const CMatrix now = A.eval_level(t, A.depth());
        const CMatrix later = A.eval_level(t + T, A.depth());
        for (int n = 1; n <= A.depth(); ++n) {
            double& lv = rep.per_level[static_cast<std::size_t>(n - 1)];
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    lv = std::max(lv, std::abs(later(r, c) - now(r, c)));
        }
    }
    rep.residual = rep.per_level.empty() ? 0.0 : rep.per_level.back();
    rep.pass = rep.residual <= tol;
    rep.note = "levelwise periodicity and tower periodicity are equivalent; "
               "residuals reported per level and overall";
    return rep;
}

}  // namespace floq
