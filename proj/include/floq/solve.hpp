#pragma once

#include <string>
#include <utility>
#include <vector>

#include "floq/cmatrix.hpp"
#include "floq/coefficient.hpp"
#include "floq/errors.hpp"
#include "floq/tower.hpp"

namespace floq {

enum class SolveMode {
    truncated,    // integrate the top level, read lower levels as blocks
    independent,  // integrate every level on its own (verification mode)
};

/// Fundamental-solution samples Phi_n(t_s) on the uniform grid t_s =
/// duration * s / steps. In truncated mode only the top series is stored
/// and lower levels are principal blocks of it, which realizes the
/// projection compatibility by construction; in independent mode every
/// level carries its own integration so compatibility becomes a checkable
/// claim. Immutable after construction.
class SolutionTower {
public:
    SolutionTower(double period, double duration, int steps,
                  std::vector<CMatrix> top_samples, double error_estimate)
        : period_(period),
          duration_(duration),
          steps_(steps),
          error_estimate_(error_estimate),
          top_(std::move(top_samples)) {
        validate();
    }

    SolutionTower(double period, double duration, int steps,
                  std::vector<std::vector<CMatrix>> level_samples, double error_estimate)
        : period_(period),
          duration_(duration),
          steps_(steps),
          error_estimate_(error_estimate),
          levels_(std::move(level_samples)) {
        if (levels_.empty()) throw ValidationError("independent solution needs at least level 1");
        top_ = levels_.back();
        validate();
        if (static_cast<int>(levels_.size()) != depth())
            throw ValidationError("level count does not match the top dimension");
        for (int n = 1; n <= depth(); ++n) {
            const auto& series = levels_[static_cast<std::size_t>(n - 1)];
            if (static_cast<int>(series.size()) != steps_ + 1)
                throw ValidationError("level " + std::to_string(n) + " sample count mismatch");
            for (const CMatrix& m : series)
                if (m.rows() != n || m.cols() != n)
                    throw ValidationError("level " + std::to_string(n) + " sample has wrong shape");
            if (max_abs_diff(series.front(), CMatrix::identity(n)) != 0.0)
                throw ValidationError("level " + std::to_string(n) + " does not start at identity");
        }
    }

    int depth() const { return top_.front().rows(); }
    int steps() const { return steps_; }
    double period() const { return period_; }
    double duration() const { return duration_; }
    int order() const { return 4; }
    double error_estimate() const { return error_estimate_; }
    SolveMode mode() const { return levels_.empty() ? SolveMode::truncated : SolveMode::independent; }

    double time_at(int s) const {
        check_sample(s);
        return duration_ * (static_cast<double>(s) / steps_);
    }

    const CMatrix& top_sample(int s) const {
        check_sample(s);
        return top_[static_cast<std::size_t>(s)];
    }

    /// Phi_n(t_s); truncation of the top series in truncated mode, the
    /// level's own integration in independent mode.
    CMatrix sample(int level, int s) const {
        if (level < 1 || level > depth())
            throw RangeError("level " + std::to_string(level) + " out of range");
        check_sample(s);
        if (levels_.empty()) return top_[static_cast<std::size_t>(s)].leading(level);
        return levels_[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(s)];
    }

private:
    void validate() const {
        if (!(period_ > 0.0)) throw ValidationError("period must be positive");
        if (!(duration_ > 0.0)) throw ValidationError("duration must be positive");
        if (steps_ < 1) throw ValidationError("steps must be >= 1");
        if (static_cast<int>(top_.size()) != steps_ + 1)
            throw ValidationError("sample count does not match grid");
        const int n = top_.front().rows();
        for (const CMatrix& m : top_) {
            if (m.rows() != n || m.cols() != n) throw ValidationError("sample shape mismatch");
            if (!m.is_finite()) throw NumericError("non-finite solution sample");
            if (!is_lower_triangular_within(m, kPatternTol))
                throw ValidationError("solution sample breaks the nested zero pattern");
            for (const cplx& d : m.diagonal())
                if (std::abs(d) <= kSingularTol)
                    throw ValidationError("solution sample not invertible");
        }
        if (max_abs_diff(top_.front(), CMatrix::identity(n)) != 0.0)
            throw ValidationError("fundamental solution must start at identity");
    }

    void check_sample(int s) const {
        if (s < 0 || s > steps_) throw RangeError("sample index out of range");
    }

    double period_;
    double duration_;
    int steps_;
    double error_estimate_;
    std::vector<CMatrix> top_;                   // always present (top level)
    std::vector<std::vector<CMatrix>> levels_;   // independent mode only
};

namespace detail {

/// Classical fourth-order Runge-Kutta sweep of Phi' = A_n(t) Phi over
/// [0, period] at the given level, identity start.
inline std::vector<CMatrix> rk4_series(const CoefficientTower& A, int level, int steps) {
    const double T = A.period();
    const double h = T / steps;
    std::vector<CMatrix> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    CMatrix phi = CMatrix::identity(level);
    out.push_back(phi);
    for (int s = 0; s < steps; ++s) {
        const double t0 = T * (static_cast<double>(s) / steps);
        const CMatrix a0 = A.eval_level(t0, level);
        const CMatrix am = A.eval_level(t0 + 0.5 * h, level);
        const CMatrix a1 = A.eval_level(t0 + h, level);
        const CMatrix k1 = a0 * phi;
        const CMatrix k2 = am * (phi + (0.5 * h) * k1);
        const CMatrix k3 = am * (phi + (0.5 * h) * k2);
        const CMatrix k4 = a1 * (phi + h * k3);
        phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back(phi);
    }
    return out;
}

}  // namespace detail

/// Integrate Phi' = A(t) Phi, Phi(0) = I over one period. The global error
/// is estimated by a Richardson comparison against a half-step sweep; if the
/// estimate exceeds tol the caller must raise steps.
inline SolutionTower solve_fundamental(const CoefficientTower& A, int steps, double tol,
                                       SolveMode mode = SolveMode::truncated) {
    if (steps < 8) throw RangeError("steps must be >= 8");
    if (tol <= 0.0) throw RangeError("tolerance must be positive");

    std::vector<CMatrix> coarse = detail::rk4_series(A, A.depth(), steps);
    for (const CMatrix& m : coarse)
        if (!m.is_finite()) throw NumericError("integration produced non-finite values");

    const std::vector<CMatrix> fine = detail::rk4_series(A, A.depth(), 2 * steps);
    if (!fine.back().is_finite()) throw NumericError("integration produced non-finite values");
    // fourth order: coarse error ~ diff * 16/15
    const double err = max_abs_diff(coarse.back(), fine.back()) * (16.0 / 15.0);
    if (err > tol)
        throw AccuracyError("integration error estimate " + detail::num_str(err) +
                            " exceeds tolerance " + detail::num_str(tol) +
                            "; increase steps");

    if (mode == SolveMode::truncated)
        return SolutionTower(A.period(), A.period(), steps, std::move(coarse), err);

    std::vector<std::vector<CMatrix>> levels;
    levels.reserve(static_cast<std::size_t>(A.depth()));
    for (int n = 1; n < A.depth(); ++n) levels.push_back(detail::rk4_series(A, n, steps));
    levels.push_back(std::move(coarse));
    return SolutionTower(A.period(), A.period(), steps, std::move(levels), err);
}

/// Max over samples and levels of |truncate(Phi_{n+1}(t_s), n) - Phi_n(t_s)|.
/// Zero by construction for truncation-built solutions; a genuine residual
/// when the levels were integrated independently.
inline CheckReport check_projective_consistency(const SolutionTower& sol, double tol) {
    CheckReport rep;
    rep.tolerance = tol;
    const int N = sol.depth();
    rep.per_level.assign(static_cast<std::size_t>(N > 1 ? N - 1 : 0), 0.0);
    for (int n = 1; n < N; ++n) {
        double worst = 0.0;
        for (int s = 0; s <= sol.steps(); ++s) {
            const CMatrix upper = sol.sample(n + 1, s).leading(n);
            worst = std::max(worst, max_abs_diff(upper, sol.sample(n, s)));
        }
        rep.per_level[static_cast<std::size_t>(n - 1)] = worst;
        rep.residual = std::max(rep.residual, worst);
    }
    rep.pass = rep.residual <= tol;
    rep.note = sol.mode() == SolveMode::truncated
                   ? "levels are principal blocks of the top integration"
                   : "levels integrated independently";
    return rep;
}

}  // namespace floq
