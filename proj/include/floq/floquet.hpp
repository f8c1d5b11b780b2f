#pragma once

#include <string>
#include <utility>
#include <vector>

#include "floq/cmatrix.hpp"
#include "floq/coefficient.hpp"
#include "floq/compatible_log.hpp"
#include "floq/errors.hpp"
#include "floq/matrix_exp.hpp"
#include "floq/solve.hpp"
#include "floq/tower.hpp"

namespace floq {

/// Phi(period) as an invertible tower; the value of the monodromy
/// homomorphism at 1.
class MonodromyTower {
public:
    MonodromyTower(InvertibleNestedMatrix m, double period)
        : m_(std::move(m)), period_(period) {}

    const InvertibleNestedMatrix& tower() const { return m_; }
    double period() const { return period_; }
    bool period_normalized() const { return period_ == 1.0; }

    /// Floquet multipliers; the diagonal, since the tower is triangular.
    std::vector<cplx> eigenvalues() const { return m_.diagonal(); }

private:
    InvertibleNestedMatrix m_;
    double period_;
};

inline MonodromyTower monodromy(const SolutionTower& sol) {
    if (sol.duration() != sol.period())
        throw UsageError("solution grid does not end at the period");
    return MonodromyTower(InvertibleNestedMatrix(sol.top_sample(sol.steps())), sol.period());
}

/// The monodromy homomorphism on integers: n -> M^n, with negative powers
/// through the triangular inverse.
inline InvertibleNestedMatrix monodromy_hom(const MonodromyTower& M, int n) {
    const int N = M.tower().depth();
    const CMatrix base = n >= 0 ? M.tower().top() : lower_triangular_inverse(M.tower().top());
    CMatrix acc = CMatrix::identity(N);
    for (int i = 0; i < std::abs(n); ++i) acc = acc * base;
    return InvertibleNestedMatrix(std::move(acc));
}

struct FloquetResiduals {
    double periodicity = 0.0;
    double constancy = 0.0;
    double exp_log = 0.0;
    double extension = 0.0;
    double connection = 0.0;
};

/// Everything the reduction produces: the monodromy tower, its compatible
/// logarithm Bbar, the constant coefficient B (the top level of Bbar), the
/// transform samples Q_n(t_s), and the verification residuals.
class FloquetResult {
public:
    FloquetResult(MonodromyTower monodromy, NestedMatrix log_tower, std::vector<cplx> chosen_logs,
                  std::vector<double> min_gammas, std::vector<CMatrix> q_top, int steps,
                  double period, FloquetResiduals residuals)
        : monodromy_(std::move(monodromy)),
          log_tower_(std::move(log_tower)),
          constant_(log_tower_.top()),
          chosen_logs_(std::move(chosen_logs)),
          min_gammas_(std::move(min_gammas)),
          q_top_(std::move(q_top)),
          steps_(steps),
          period_(period),
          residuals_(residuals) {}

    const MonodromyTower& monodromy() const { return monodromy_; }
    const NestedMatrix& log_tower() const { return log_tower_; }
    const CMatrix& constant_coefficient() const { return constant_; }
    const std::vector<cplx>& chosen_logs() const { return chosen_logs_; }
    const std::vector<double>& min_gammas() const { return min_gammas_; }
    int steps() const { return steps_; }
    double period() const { return period_; }
    const FloquetResiduals& residuals() const { return residuals_; }

    const CMatrix& q_top_sample(int s) const {
        if (s < 0 || s > steps_) throw RangeError("sample index out of range");
        return q_top_[static_cast<std::size_t>(s)];
    }

    /// Q_n(t_s); levels are principal blocks of the top-level transform.
    CMatrix q_sample(int level, int s) const {
        if (level < 1 || level > log_tower_.depth())
            throw RangeError("level " + std::to_string(level) + " out of range");
        return q_top_sample(s).leading(level);
    }

private:
    MonodromyTower monodromy_;
    NestedMatrix log_tower_;
    CMatrix constant_;
    std::vector<cplx> chosen_logs_;
    std::vector<double> min_gammas_;
    std::vector<CMatrix> q_top_;
    int steps_;
    double period_;
    FloquetResiduals residuals_;
};

namespace detail {

/// Fourth-order central difference over five points of a sampled series.
inline CMatrix central_derivative(const std::vector<CMatrix>& x, int s, double h) {
    return (1.0 / (12.0 * h)) *
           (-1.0 * x[static_cast<std::size_t>(s + 2)] + 8.0 * x[static_cast<std::size_t>(s + 1)] -
            8.0 * x[static_cast<std::size_t>(s - 1)] + x[static_cast<std::size_t>(s - 2)]);
}

inline double constancy_residual(const std::vector<CMatrix>& q, const CMatrix& B,
                                 const SolutionTower& sol, const CoefficientTower& A) {
    const int S = sol.steps();
    const int N = sol.depth();
    const double h = sol.duration() / S;
    double worst = 0.0;
    for (int s = 2; s <= S - 2; ++s) {
        const CMatrix qdot = central_derivative(q, s, h);
        const CMatrix a = A.eval_level(sol.time_at(s), N);
        const CMatrix qinv = lower_triangular_inverse(q[static_cast<std::size_t>(s)]);
        const CMatrix rebuilt = (qdot + q[static_cast<std::size_t>(s)] * a) * qinv;
        worst = std::max(worst, max_abs_diff(rebuilt, B));
    }
    return worst;
}

inline double extension_residual(const CMatrix& B, const CMatrix& M, int n_max) {
    const int N = M.rows();
    const CMatrix Minv = lower_triangular_inverse(M);

    double worst = 0.0;
    // alpha#(n) against exp(n B), walking outward in both directions
    CMatrix pow_pos = CMatrix::identity(N);
    CMatrix pow_neg = CMatrix::identity(N);
    std::vector<CMatrix> F(static_cast<std::size_t>(2 * n_max) + 1, CMatrix(N, N));
    auto Fat = [&](int n) -> CMatrix& { return F[static_cast<std::size_t>(n + n_max)]; };
    for (int n = 0; n <= n_max; ++n) {
        Fat(n) = matrix_exp(static_cast<double>(n) * B);
        if (n > 0) Fat(-n) = matrix_exp(static_cast<double>(-n) * B);
        worst = std::max(worst, max_abs_diff(Fat(n), pow_pos));
        if (n > 0) worst = std::max(worst, max_abs_diff(Fat(-n), pow_neg));
        pow_pos = pow_pos * M;
        pow_neg = pow_neg * Minv;
    }

    // homomorphism law F(m+n) = F(m) F(n) on the integer window
    for (int m = -n_max; m <= n_max; ++m)
        for (int n = -n_max; n <= n_max; ++n) {
            if (std::abs(m + n) > n_max) continue;
            worst = std::max(worst, max_abs_diff(Fat(m + n), Fat(m) * Fat(n)));
        }

    // real-parameter spot check: F(1/2)^2 = F(1)
    const CMatrix half = matrix_exp(0.5 * B);
    worst = std::max(worst, max_abs_diff(half * half, Fat(1)));
    return worst;
}

}  // namespace detail

/// Per-level max of |Q(period) - Q(0)|. Since Q(period) = exp(B) M^{-1} and
/// Q(0) = I, this doubles as the exp-log residual at the endpoint.
inline double check_Q_periodicity(const FloquetResult& result) {
    return max_abs_diff(result.q_top_sample(result.steps()), result.q_top_sample(0));
}

/// Max over interior samples and levels of
/// |(Qdot + Q A) Q^{-1} - B|, the reconstructed coefficient of the
/// transformed equation against the constant it must equal. Qdot comes from
/// fourth-order central differences on the grid, so the residual is
/// finite-difference dominated.
inline double check_constant_reduction(const FloquetResult& result, const SolutionTower& sol,
                                       const CoefficientTower& A) {
    if (sol.steps() != result.steps())
        throw UsageError("solution grid does not match the reduction grid");
    if (A.depth() != sol.depth()) throw ShapeError("coefficient and solution depth mismatch");
    std::vector<CMatrix> q;
    q.reserve(static_cast<std::size_t>(result.steps()) + 1);
    for (int s = 0; s <= result.steps(); ++s) q.push_back(result.q_top_sample(s));
    return detail::constancy_residual(q, result.constant_coefficient(), sol, A);
}

/// Max over |n| <= n_max and levels of |exp(n B) - M^n|, together with the
/// homomorphism law on the same window and the F(1/2)^2 = F(1) spot check.
inline double check_extension(const FloquetResult& result, const MonodromyTower& M,
                              int n_max = 3) {
    if (n_max < 1) throw RangeError("n_max must be >= 1");
    return detail::extension_residual(result.constant_coefficient(), M.tower().top(), n_max);
}

/// Max over interior samples of |Phidot Phi^{-1} - A| at the top level: the
/// one-dimensional content of reading the equation back off its solution.
inline double connection_residual(const SolutionTower& sol, const CoefficientTower& A) {
    if (A.depth() != sol.depth()) throw ShapeError("coefficient and solution depth mismatch");
    const int S = sol.steps();
    const int N = sol.depth();
    const double h = sol.duration() / S;

    std::vector<CMatrix> phi;
    phi.reserve(static_cast<std::size_t>(S) + 1);
    for (int s = 0; s <= S; ++s) phi.push_back(sol.top_sample(s));

    double worst = 0.0;
    for (int s = 2; s <= S - 2; ++s) {
        const CMatrix phidot = detail::central_derivative(phi, s, h);
        const CMatrix phiinv = lower_triangular_inverse(phi[static_cast<std::size_t>(s)]);
        const CMatrix a = A.eval_level(sol.time_at(s), N);
        worst = std::max(worst, max_abs_diff(phidot * phiinv, a));
    }
    return worst;
}

/// The full reduction: monodromy, its compatible logarithm Bbar, the
/// constant coefficient B, the transform samples
/// Q(t_s) = exp(t_s B) Phi(t_s)^{-1}, and all verification residuals
/// including the integer-extension check.
inline FloquetResult floquet_reduce(const SolutionTower& sol, const CoefficientTower& A,
                                    const LogBranch& branch = {}, double tol = 1e-9,
                                    int extension_n_max = 3) {
    if (A.depth() != sol.depth()) throw ShapeError("coefficient and solution depth mismatch");
    if (!check_projective_consistency(sol, tol).pass)
        throw UsageError("solution tower is not projectively consistent");

    MonodromyTower mono = monodromy(sol);
    CompatibleLog log = compatible_log_detailed(mono.tower(), branch, tol);
    const CMatrix& B = log.Bbar.top();

    std::vector<CMatrix> q_top;
    q_top.reserve(static_cast<std::size_t>(sol.steps()) + 1);
    for (int s = 0; s <= sol.steps(); ++s) {
        const CMatrix expo = matrix_exp(sol.time_at(s) * B);
        q_top.push_back(expo * lower_triangular_inverse(sol.top_sample(s)));
    }

    FloquetResiduals res;
    res.exp_log = log.exp_log_residual;
    res.periodicity = max_abs_diff(q_top.back(), q_top.front());
    res.extension = detail::extension_residual(B, mono.tower().top(), extension_n_max);
    res.constancy = detail::constancy_residual(q_top, B, sol, A);
    res.connection = connection_residual(sol, A);

    return FloquetResult(std::move(mono), std::move(log.Bbar), std::move(log.chosen_logs),
                         std::move(log.min_gamma), std::move(q_top), sol.steps(), sol.period(),
                         res);
}

}  // namespace floq
