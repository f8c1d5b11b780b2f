// Command-line front end: each pipeline stage is its own subcommand, all
// sharing the same flags and report machinery.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "floq/floq.hpp"

namespace {

struct Options {
    std::string spec_path;
    std::string out_path;  // empty: write to stdout
    std::string format = "json";
    int steps = 0;    // 0: keep the problem file's value
    double tol = 0.0; // 0: file value, then FLOQ_TOL, then built-in default
    int level = 0;    // 0: full depth
};

void add_shared_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--spec", opt.spec_path, "problem file (json)")->required();
    cmd->add_option("--steps", opt.steps, "grid steps per period (overrides the file)");
    cmd->add_option("--tol", opt.tol, "verification tolerance (overrides file and FLOQ_TOL)");
    cmd->add_option("--out", opt.out_path, "output path (default: stdout)");
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--level", opt.level, "run the leading sub-problem of this depth");
}

int run(floq::Stage stage, const Options& opt) {
    floq::ProblemSpec spec = floq::load_problem(opt.spec_path);
    if (opt.level != 0) spec = spec.truncated(opt.level);
    if (opt.steps != 0) {
        if (opt.steps < 8) throw floq::ValidationError("--steps must be >= 8");
        spec.solver.steps = opt.steps;
    }
    if (opt.tol != 0.0) {
        if (!(opt.tol > 0.0)) throw floq::ValidationError("--tol must be positive");
        spec.solver.tol = opt.tol;
    } else if (!spec.solver.tol_from_file) {
        if (const char* env = std::getenv("FLOQ_TOL")) {
            try {
                spec.solver.tol = std::stod(env);
            } catch (const std::exception&) {
                throw floq::ValidationError("FLOQ_TOL is not a number: " + std::string(env));
            }
            if (!(spec.solver.tol > 0.0))
                throw floq::ValidationError("FLOQ_TOL must be positive");
        }
    }

    const floq::Report report = floq::run_pipeline(spec, stage);
    const floq::Format format = opt.format == "csv" ? floq::Format::csv : floq::Format::json;
    if (opt.out_path.empty()) {
        floq::emit_to_stream(report, format, std::cout);
    } else {
        floq::emit(report, format, opt.out_path);
        for (const floq::ResidualEntry& e : report.residuals)
            std::cout << (e.pass ? "pass  " : "FAIL  ") << e.name << "  " << e.value
                      << "  (threshold " << e.threshold << ")\n";
        if (!report.residuals.empty())
            std::cout << "status: " << (report.pass ? "pass" : "fail") << " (report written to "
                      << opt.out_path << ")\n";
        else
            std::cout << "report written to " << opt.out_path << "\n";
    }
    return report.pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floquet-Liapunov reduction of periodic linear systems on projective towers"};
    app.require_subcommand(1);

    Options opt;
    struct Sub {
        const char* name;
        const char* help;
        floq::Stage stage;
    };
    const Sub subs[] = {
        {"solve", "integrate the fundamental solution over one period", floq::Stage::solve},
        {"monodromy", "solve and report the monodromy tower", floq::Stage::monodromy},
        {"logtower", "compute the compatible tower logarithm", floq::Stage::logtower},
        {"floquet", "full reduction with transform samples and residuals", floq::Stage::floquet},
        {"verify", "full pipeline plus every residual check", floq::Stage::verify},
    };
    for (const Sub& s : subs) add_shared_flags(app.add_subcommand(s.name, s.help), opt);

    CLI11_PARSE(app, argc, argv);

    const auto error_record = [](const char* type, const char* what) {
        floq::json rec;
        rec["error"] = {{"type", type}, {"message", what}};
        std::cerr << rec.dump() << "\n";
    };

    try {
        for (const Sub& s : subs)
            if (app.got_subcommand(s.name)) return run(s.stage, opt);
        return 1;
    } catch (const floq::NumericError& e) {  // includes accuracy and conditioning
        error_record("numeric", e.what());
        return 3;
    } catch (const floq::VerificationError& e) {
        error_record("verification", e.what());
        return 4;
    } catch (const floq::Error& e) {  // validation, range, shape, usage, io
        error_record("validation", e.what());
        return 2;
    } catch (const std::exception& e) {
        error_record("internal", e.what());
        return 1;
    }
}
