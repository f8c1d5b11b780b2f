#pragma once

#include <chrono>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "floq/floquet.hpp"
#include "floq/problem.hpp"
#include "floq/solve.hpp"

namespace floq {

/// Pipeline stages, each one construction further than the last.
enum class Stage { solve, monodromy, logtower, floquet, verify };

enum class Format { json, csv };

struct ResidualEntry {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = true;
};

struct StageTimings {
    double solve_ms = 0.0;
    double consistency_ms = 0.0;
    double reduce_ms = 0.0;
    double total_ms = 0.0;
};

/// Everything a run produces. Sections beyond the requested stage stay
/// empty. All matrices are in normalized time (period rescaled to 1).
struct Report {
    ProblemSpec spec;  // effective problem (after any level truncation)
    Stage stage = Stage::verify;

    int steps = 0;
    double period = 1.0;  // normalized grid period
    double original_period = 1.0;
    int integrator_order = 4;
    double integrator_error_estimate = 0.0;

    std::vector<CMatrix> phi_top;  // fundamental solution on the grid

    std::optional<CMatrix> monodromy_top;
    std::vector<cplx> eigenvalues;

    std::optional<CMatrix> log_tower_top;  // top level of Bbar; equals B
    std::vector<cplx> chosen_logs;

    std::vector<CMatrix> q_top;  // Floquet transform on the grid

    std::vector<ResidualEntry> residuals;
    bool pass = true;

    StageTimings timings;
};

namespace detail {

// Finite-difference based checks cannot reach the base tolerance; they get
// a documented widening factor instead of a silently loosened gate.
inline constexpr double kFiniteDifferenceFactor = 100.0;
inline constexpr double kCoefficientPeriodicityTol = 1e-12;
inline constexpr int kPeriodicitySamples = 64;

inline double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace detail

/// Run the solve -> monodromy -> logarithm -> reduction -> verification
/// pipeline up to the requested stage. Deterministic for a fixed spec:
/// every numeric field outside `timings` is reproducible bit for bit.
inline Report run_pipeline(const ProblemSpec& spec, Stage stage = Stage::verify) {
    const auto t_total = std::chrono::steady_clock::now();
    Report rep;
    rep.spec = spec;
    rep.stage = stage;
    rep.steps = spec.solver.steps;
    rep.original_period = spec.period;
    rep.period = 1.0;

    const double tol = spec.solver.tol;
    const CoefficientTower A = spec.coefficient();
    const CheckReport coeff_periodicity = check_coefficient_periodicity(
        A, detail::kPeriodicitySamples, detail::kCoefficientPeriodicityTol);
    const CoefficientTower An = A.normalized();

    const auto t_solve = std::chrono::steady_clock::now();
    const SolutionTower sol = solve_fundamental(An, spec.solver.steps, tol);
    rep.timings.solve_ms = detail::ms_since(t_solve);
    rep.integrator_error_estimate = sol.error_estimate();
    rep.integrator_order = sol.order();
    rep.phi_top.reserve(static_cast<std::size_t>(sol.steps()) + 1);
    for (int s = 0; s <= sol.steps(); ++s) rep.phi_top.push_back(sol.top_sample(s));

    if (stage >= Stage::monodromy) {
        const MonodromyTower mono = monodromy(sol);
        rep.monodromy_top = mono.tower().top();
        rep.eigenvalues = mono.eigenvalues();
    }

    if (stage == Stage::logtower) {
        const CompatibleLog log =
            compatible_log_detailed(monodromy(sol).tower(), spec.branch(), tol);
        rep.log_tower_top = log.Bbar.top();
        rep.chosen_logs = log.chosen_logs;
    }

    if (stage >= Stage::floquet) {
        const auto t_reduce = std::chrono::steady_clock::now();
        const FloquetResult fr = floquet_reduce(sol, An, spec.branch(), tol);
        rep.timings.reduce_ms = detail::ms_since(t_reduce);

        rep.log_tower_top = fr.log_tower().top();
        rep.chosen_logs = fr.chosen_logs();
        rep.q_top.reserve(static_cast<std::size_t>(fr.steps()) + 1);
        for (int s = 0; s <= fr.steps(); ++s) rep.q_top.push_back(fr.q_top_sample(s));

        const FloquetResiduals& r = fr.residuals();
        const double fd_tol = detail::kFiniteDifferenceFactor * tol;
        if (stage == Stage::verify) {
            const auto t_cons = std::chrono::steady_clock::now();
            const SolutionTower independent =
                solve_fundamental(An, spec.solver.steps, tol, SolveMode::independent);
            const CheckReport consistency = check_projective_consistency(independent, tol);
            rep.timings.consistency_ms = detail::ms_since(t_cons);
            rep.residuals.push_back(
                {"projective-consistency", consistency.residual, tol, consistency.pass});
        }
        rep.residuals.push_back({"periodicity", r.periodicity, tol, r.periodicity <= tol});
        rep.residuals.push_back({"constancy", r.constancy, fd_tol, r.constancy <= fd_tol});
        rep.residuals.push_back({"exp-log", r.exp_log, tol, r.exp_log <= tol});
        rep.residuals.push_back({"extension", r.extension, tol, r.extension <= tol});
        rep.residuals.push_back({"connection", r.connection, fd_tol, r.connection <= fd_tol});
        if (stage == Stage::verify)
            rep.residuals.push_back({"coefficient-periodicity", coeff_periodicity.residual,
                                     coeff_periodicity.tolerance, coeff_periodicity.pass});
    }

    for (const ResidualEntry& e : rep.residuals) rep.pass = rep.pass && e.pass;
    rep.timings.total_ms = detail::ms_since(t_total);
    return rep;
}

namespace detail {

inline json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

inline json report_to_json(const Report& rep) {
    json doc;
    doc["problem"] = problem_to_json(rep.spec);
    doc["grid"] = {{"steps", rep.steps},
                   {"period", rep.period},
                   {"original_period", rep.original_period},
                   {"period_normalized", true}};
    doc["integrator"] = {{"order", rep.integrator_order},
                         {"error_estimate", rep.integrator_error_estimate}};
    if (rep.monodromy_top) {
        json eig = json::array();
        for (const cplx& z : rep.eigenvalues) eig.push_back(detail::complex_to_json(z));
        doc["monodromy"] = {{"matrix", detail::matrix_to_json(*rep.monodromy_top)},
                            {"eigenvalues", std::move(eig)}};
    }
    if (rep.log_tower_top) {
        json logs = json::array();
        for (const cplx& z : rep.chosen_logs) logs.push_back(detail::complex_to_json(z));
        json winds = json::array();
        for (const auto& [level, m] : rep.spec.windings) winds.push_back({level, m});
        doc["log_tower"] = {{"matrix", detail::matrix_to_json(*rep.log_tower_top)},
                            {"chosen_logs", std::move(logs)},
                            {"windings", std::move(winds)}};
        doc["constant_coefficient"] = detail::matrix_to_json(*rep.log_tower_top);
    }
    if (!rep.residuals.empty()) {
        json table = json::array();
        for (const ResidualEntry& e : rep.residuals)
            table.push_back({{"name", e.name},
                             {"value", e.value},
                             {"threshold", e.threshold},
                             {"pass", e.pass}});
        doc["residuals"] = std::move(table);
        doc["status"] = rep.pass ? "pass" : "fail";
    }
    doc["timings_ms"] = {{"solve", rep.timings.solve_ms},
                         {"consistency", rep.timings.consistency_ms},
                         {"reduce", rep.timings.reduce_ms},
                         {"total", rep.timings.total_ms}};
    return doc;
}

/// Write the report: json is the full document above; csv is the time
/// series of Phi (and Q when present), one row per grid sample, columns
/// t then re/im per lower-triangular entry in row-major order.
inline void emit_to_stream(const Report& rep, Format format, std::ostream& out) {
    if (format == Format::json) {
        out << report_to_json(rep).dump(2) << '\n';
    } else {
        out.precision(17);
        for (int s = 0; s <= rep.steps; ++s) {
            const double t = rep.period * (static_cast<double>(s) / rep.steps);
            out << t;
            auto put_series = [&](const std::vector<CMatrix>& series) {
                const CMatrix& m = series[static_cast<std::size_t>(s)];
                for (int r = 0; r < m.rows(); ++r)
                    for (int c = 0; c <= r; ++c)
                        out << ',' << m(r, c).real() << ',' << m(r, c).imag();
            };
            put_series(rep.phi_top);
            if (!rep.q_top.empty()) put_series(rep.q_top);
            out << '\n';
        }
    }
}

inline void emit(const Report& rep, Format format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    emit_to_stream(rep, format, out);
    if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace floq
