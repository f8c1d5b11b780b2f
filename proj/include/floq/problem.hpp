#pragma once

#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "floq/coefficient.hpp"
#include "floq/compatible_log.hpp"
#include "floq/errors.hpp"
#include "floq/trig_poly.hpp"

namespace floq {

using json = nlohmann::ordered_json;

/// One lower-triangular coefficient entry of the problem file: a constant
/// plus cosine and sine harmonics, all complex as [re, im].
struct ProblemEntry {
    int row = 1;
    int col = 1;
    cplx constant;
    std::vector<Harmonic> cos_terms;
    std::vector<Harmonic> sin_terms;
};

struct SolverOptions {
    int steps = 2000;
    double tol = 1e-8;
    bool tol_from_file = false;  // whether tol came from the document
};

/// A parsed and validated problem document.
struct ProblemSpec {
    int depth = 1;
    double period = 1.0;
    std::vector<ProblemEntry> entries;
    SolverOptions solver;
    std::vector<std::pair<int, int>> windings;  // (level, integer winding)

    CoefficientTower coefficient() const {
        CoefficientTower::EntryMap map;
        for (const ProblemEntry& e : entries)
            map.emplace(std::make_pair(e.row, e.col),
                        TrigPolynomial(e.constant, e.cos_terms, e.sin_terms, period));
        return CoefficientTower(depth, period, std::move(map));
    }

    LogBranch branch() const { return LogBranch(windings); }

    /// Leading sub-problem of the given depth: rows above it are dropped,
    /// winding overrides are filtered. The projective structure makes this
    /// exactly the level-`level` view of the full problem.
    ProblemSpec truncated(int level) const {
        if (level < 1 || level > depth)
            throw ValidationError("level " + std::to_string(level) + " out of range 1.." +
                                  std::to_string(depth));
        ProblemSpec out = *this;
        out.depth = level;
        out.entries.clear();
        for (const ProblemEntry& e : entries)
            if (e.row <= level) out.entries.push_back(e);
        out.windings.clear();
        for (const auto& w : windings)
            if (w.first <= level) out.windings.push_back(w);
        return out;
    }
};

namespace detail {

inline cplx parse_complex(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(where + ": complex values are two-element [re, im] arrays");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

inline std::vector<Harmonic> parse_harmonics(const json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError(where + ": expected a list of [k, re, im]");
    std::vector<Harmonic> out;
    for (const json& h : j) {
        if (!h.is_array() || h.size() != 3 || !h[0].is_number_integer() || !h[1].is_number() ||
            !h[2].is_number())
            throw ValidationError(where + ": harmonics are [k, re, im] triples");
        out.push_back(Harmonic{h[0].get<int>(), cplx(h[1].get<double>(), h[2].get<double>())});
    }
    return out;
}

}  // namespace detail

inline ProblemSpec problem_from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("problem document must be an object");
    ProblemSpec spec;

    if (!doc.contains("depth") || !doc["depth"].is_number_integer())
        throw ValidationError("field 'depth' (integer) is required");
    spec.depth = doc["depth"].get<int>();
    if (spec.depth < 1) throw ValidationError("depth must be >= 1");

    if (doc.contains("period")) {
        if (!doc["period"].is_number()) throw ValidationError("field 'period' must be a number");
        spec.period = doc["period"].get<double>();
    }
    if (!(spec.period > 0.0)) throw ValidationError("period must be positive");

    if (!doc.contains("entries") || !doc["entries"].is_array())
        throw ValidationError("field 'entries' (list) is required");
    std::set<std::pair<int, int>> seen;
    for (const json& e : doc["entries"]) {
        if (!e.is_object() || !e.contains("row") || !e.contains("col"))
            throw ValidationError("each entry needs integer 'row' and 'col'");
        ProblemEntry entry;
        entry.row = e["row"].get<int>();
        entry.col = e["col"].get<int>();
        const std::string where =
            "entry (" + std::to_string(entry.row) + "," + std::to_string(entry.col) + ")";
        if (entry.col > entry.row)
            throw ValidationError("upper-triangular entry (" + std::to_string(entry.row) + "," +
                                  std::to_string(entry.col) + ")");
        if (entry.row < 1 || entry.row > spec.depth || entry.col < 1)
            throw ValidationError(where + " outside depth " + std::to_string(spec.depth));
        if (!seen.insert({entry.row, entry.col}).second)
            throw ValidationError("duplicate " + where);
        if (e.contains("constant")) entry.constant = detail::parse_complex(e["constant"], where);
        if (e.contains("cos")) entry.cos_terms = detail::parse_harmonics(e["cos"], where + " cos");
        if (e.contains("sin")) entry.sin_terms = detail::parse_harmonics(e["sin"], where + " sin");
        // surfaces duplicate/invalid harmonics with the entry named
        try {
            (void)TrigPolynomial(entry.constant, entry.cos_terms, entry.sin_terms, spec.period);
        } catch (const ValidationError& err) {
            throw ValidationError(where + ": " + err.what());
        }
        spec.entries.push_back(std::move(entry));
    }

    if (doc.contains("solver")) {
        const json& s = doc["solver"];
        if (!s.is_object()) throw ValidationError("field 'solver' must be an object");
        if (s.contains("steps")) spec.solver.steps = s["steps"].get<int>();
        if (s.contains("tol")) {
            spec.solver.tol = s["tol"].get<double>();
            spec.solver.tol_from_file = true;
        }
    }
    if (spec.solver.steps < 8) throw ValidationError("solver.steps must be >= 8");
    if (!(spec.solver.tol > 0.0)) throw ValidationError("solver.tol must be positive");

    if (doc.contains("branch")) {
        const json& b = doc["branch"];
        if (!b.is_object()) throw ValidationError("field 'branch' must be an object");
        if (b.contains("windings")) {
            if (!b["windings"].is_array())
                throw ValidationError("branch.windings must be a list of [level, m]");
            std::set<int> levels;
            for (const json& w : b["windings"]) {
                if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() ||
                    !w[1].is_number_integer())
                    throw ValidationError("branch.windings must be a list of [level, m]");
                const int level = w[0].get<int>();
                if (level < 1 || level > spec.depth)
                    throw ValidationError("winding level " + std::to_string(level) +
                                          " outside depth " + std::to_string(spec.depth));
                if (!levels.insert(level).second)
                    throw ValidationError("duplicate winding for level " + std::to_string(level));
                spec.windings.emplace_back(level, w[1].get<int>());
            }
        }
    }
    return spec;
}

inline json problem_to_json(const ProblemSpec& spec) {
    json doc;
    doc["depth"] = spec.depth;
    doc["period"] = spec.period;
    doc["entries"] = json::array();
    for (const ProblemEntry& e : spec.entries) {
        json je;
        je["row"] = e.row;
        je["col"] = e.col;
        je["constant"] = {e.constant.real(), e.constant.imag()};
        je["cos"] = json::array();
        for (const Harmonic& h : e.cos_terms)
            je["cos"].push_back({h.k, h.coef.real(), h.coef.imag()});
        je["sin"] = json::array();
        for (const Harmonic& h : e.sin_terms)
            je["sin"].push_back({h.k, h.coef.real(), h.coef.imag()});
        doc["entries"].push_back(std::move(je));
    }
    doc["solver"] = {{"steps", spec.solver.steps}, {"tol", spec.solver.tol}};
    doc["branch"] = json::object();
    doc["branch"]["windings"] = json::array();
    for (const auto& [level, m] : spec.windings) doc["branch"]["windings"].push_back({level, m});
    return doc;
}

/// Parse and validate a problem file. Parse failures carry the byte
/// position reported by the JSON parser; validation failures name the
/// offending field or entry.
inline ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open problem file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("parse error in " + path + ": " + e.what());
    }
    return problem_from_json(doc);
}

}  // namespace floq
