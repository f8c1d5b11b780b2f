#pragma once

#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "floq/cmatrix.hpp"
#include "floq/errors.hpp"
#include "floq/matrix_exp.hpp"
#include "floq/phi_series.hpp"
#include "floq/tower.hpp"

namespace floq {

/// Principal complex logarithm with the imaginary part in (-pi, pi]. A
/// negative-zero imaginary part is normalized first so that negative real
/// numbers land on the +pi side of the cut.
inline cplx principal_log(cplx z) {
    if (z.imag() == 0.0) z = cplx(z.real(), +0.0);
    return std::log(z);
}

/// Branch convention for the tower logarithm: principal branch everywhere,
/// plus explicit per-level winding overrides log lambda_k = Log lambda_k +
/// 2 pi i m_k.
class LogBranch {
public:
    LogBranch() = default;

    explicit LogBranch(const std::vector<std::pair<int, int>>& windings) {
        for (const auto& [level, m] : windings) {
            if (level < 1)
                throw ValidationError("winding override level " + std::to_string(level) +
                                      " must be >= 1");
            if (!windings_.emplace(level, m).second)
                throw ValidationError("duplicate winding override for level " +
                                      std::to_string(level));
        }
    }

    int winding(int level) const {
        auto it = windings_.find(level);
        return it == windings_.end() ? 0 : it->second;
    }

    int max_level() const { return windings_.empty() ? 0 : windings_.rbegin()->first; }

    const std::map<int, int>& windings() const { return windings_; }

    cplx log_of(cplx lambda, int level) const {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        return principal_log(lambda) + cplx(0.0, two_pi * winding(level));
    }

private:
    std::map<int, int> windings_;
};

/// compatible_log output plus the per-step diagnostics the construction
/// produces along the way.
struct CompatibleLog {
    NestedMatrix Bbar;
    std::vector<cplx> chosen_logs;    // log lambda_k, one per level
    std::vector<double> min_gamma;    // smallest |gamma_i| met in each y_n solve
    double exp_log_residual = 0.0;    // per-level max entry of |Exp(Bbar) - M|
};

/// Tower logarithm built level by level: B_1 = log lambda_1, then each
/// B_{n+1} extends B_n by the row y_n solving y_n S_n = mu_n against the
/// series matrix S_n = phi_series(B_n, log lambda_{n+1}), and by the new
/// diagonal entry log lambda_{n+1}. The result is verified to satisfy
/// Exp(Bbar) = M within tol before it is returned.
inline CompatibleLog compatible_log_detailed(const InvertibleNestedMatrix& M,
                                             const LogBranch& branch = {}, double tol = 1e-9) {
    if (tol <= 0.0) throw RangeError("tolerance must be positive");
    const int N = M.depth();
    if (branch.max_level() > N)
        throw RangeError("winding override level " + std::to_string(branch.max_level()) +
                         " exceeds tower depth " + std::to_string(N));

    const CMatrix& top = M.top();
    std::vector<cplx> logs(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) logs[static_cast<std::size_t>(k)] = branch.log_of(top(k, k), k + 1);

    CMatrix B(N, N);
    B(0, 0) = logs[0];
    std::vector<double> min_gamma;
    min_gamma.reserve(static_cast<std::size_t>(N > 0 ? N - 1 : 0));

    for (int n = 1; n < N; ++n) {
        const CMatrix Bn = B.leading(n);
        const cplx c = logs[static_cast<std::size_t>(n)];
        const PhiMatrix phi = phi_series(Bn, c, std::min(tol, 1e-12));

        double mg = std::abs(phi.gamma(1));
        for (int i = 2; i <= n; ++i) mg = std::min(mg, std::abs(phi.gamma(i)));
        min_gamma.push_back(mg);
        if (mg < kSingularTol)
            throw ConditioningError("series matrix numerically singular at level " +
                                    std::to_string(n + 1) + " (|gamma| = " + detail::num_str(mg) +
                                    ")");

        std::vector<cplx> mu(static_cast<std::size_t>(n));
        for (int c_idx = 0; c_idx < n; ++c_idx) mu[static_cast<std::size_t>(c_idx)] = top(n, c_idx);
        const std::vector<cplx> y = solve_row_lower(phi.S, mu);

        for (int c_idx = 0; c_idx < n; ++c_idx) B(n, c_idx) = y[static_cast<std::size_t>(c_idx)];
        B(n, n) = c;
    }

    NestedMatrix Bbar(std::move(B));
    const InvertibleNestedMatrix E = exp_tower(Bbar);
    const double residual = max_abs_diff(E.top(), top);
    if (residual > tol)
        throw VerificationError("exp-log residual " + detail::num_str(residual) +
                                " exceeds tolerance");

    return CompatibleLog{std::move(Bbar), std::move(logs), std::move(min_gamma), residual};
}

inline NestedMatrix compatible_log(const InvertibleNestedMatrix& M, const LogBranch& branch = {},
                                   double tol = 1e-9) {
    return compatible_log_detailed(M, branch, tol).Bbar;
}

}  // namespace floq
