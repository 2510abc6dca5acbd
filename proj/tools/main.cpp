// Experiment CLI: reproduces the convergence tables of the test problems and
// emits CSV or Markdown. With no arguments the full six-table default sweep
// runs; --oracle swaps in the scalar-mode Mittag-Leffler validation and
// --seed-check runs the property battery.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "cqsmooth/tables.hpp"

using namespace cqsmooth;

namespace {

std::string output_path(const tables::ExperimentPlan& plan, tables::CaseId id, bool multi) {
    const std::string ext = plan.format == tables::Format::csv ? ".csv" : ".md";
    if (plan.out.empty()) return "table_" + tables::case_name(id) + ext;
    if (!multi) return plan.out;
    const auto dot = plan.out.rfind('.');
    if (dot == std::string::npos) return plan.out + "_" + tables::case_name(id) + ext;
    return plan.out.substr(0, dot) + "_" + tables::case_name(id) + plan.out.substr(dot);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ID-m-BDF-k convolution-quadrature solver: convergence-table driver"};
    app.get_formatter()->column_width(34);

    std::string case_arg;
    std::string format_arg = "csv";
    tables::ExperimentPlan plan;
    std::vector<double> gammas, mus;
    std::vector<int> ms, Ns;

    app.add_option("--case", case_arg,
                   "test case: a | b-conv | b-prod | c-power | c-conv | c-prod (default: all)");
    app.add_option("--gamma", gammas, "fractional orders, comma separated, in (0,1) or (1,2)")
        ->delimiter(',');
    app.add_option("--mu", mus,
                   "hyper-singular exponents in (-2,-1), paired elementwise with --gamma")
        ->delimiter(',');
    app.add_option("--k", plan.k, "BDF step number (1..6)")->capture_default_str();
    app.add_option("--m", ms, "smoothing levels, comma separated (default 2..7)")->delimiter(',');
    app.add_option("--N", Ns, "time-step counts, each double the previous (default 200..3200)")
        ->delimiter(',');
    app.add_option("--M", plan.M, "spectral resolution (Chebyshev degree)")->capture_default_str();
    app.add_option("--T", plan.T, "time horizon")->capture_default_str();
    app.add_option("--out", plan.out, "output path (per-case suffix added for multi-case runs)");
    app.add_option("--format", format_arg, "output format: csv | md")->capture_default_str();
    app.add_flag("--oracle", plan.oracle_mode,
                 "run the scalar-mode Mittag-Leffler validation instead of table runs");
    app.add_flag("--seed-check", plan.seed_check, "run the property suite instead of table runs");

    try {
        app.parse(argc, argv);

        if (!case_arg.empty()) {
            auto id = tables::parse_case(case_arg);
            if (!id) throw CLI::ValidationError("--case", "unknown case name: " + case_arg);
            plan.cases = {*id};
        }
        if (!gammas.empty()) plan.gammas = gammas;
        if (!mus.empty()) plan.mus = mus;
        if (!ms.empty()) plan.ms = ms;
        if (!Ns.empty()) plan.Ns = Ns;
        if (format_arg == "csv") plan.format = tables::Format::csv;
        else if (format_arg == "md") plan.format = tables::Format::markdown;
        else throw CLI::ValidationError("--format", "must be csv or md");
        plan.validate();
        for (tables::CaseId id : plan.cases) {
            if (tables::case_uses_mu(id) && !plan.gammas.empty() &&
                plan.mus.size() != plan.gammas.size())
                throw CLI::ValidationError(
                    "--mu", "singular cases pair --mu with --gamma elementwise; the lists must "
                            "have equal length");
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // prints usage; non-zero on error
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    if (plan.oracle_mode) return tables::run_oracle_validation(std::cout) ? 0 : 2;
    if (plan.seed_check) {
        std::cout << "property suite\n";
        return tables::run_seed_check(std::cout) ? 0 : 2;
    }

    bool any_failure = false;
    const bool multi = plan.cases.size() > 1;
    for (tables::CaseId id : plan.cases) {
        std::cout << "case " << tables::case_name(id) << ": running "
                  << (tables::case_is_subdiffusion(id) ? "subdiffusion" : "diffusion-wave")
                  << " sweep (k=" << plan.k << ")\n";
        auto table = tables::run_case<extended>(id, plan);
        const std::string path = output_path(plan, id, multi);
        tables::emit_file(table, plan.format, path);
        for (const auto& row : table.rows) {
            std::printf("  gamma=%-5g", row.gamma);
            if (row.has_mu) std::printf(" mu=%-5g", row.mu);
            std::printf(" m=%d M=%-3d", row.m, row.M_used);
            if (row.solver_failure) {
                std::printf(" SOLVER FAILURE (%s)\n", row.note.c_str());
                any_failure = true;
                continue;
            }
            if (row.rate) std::printf(" rate=%.4f", *row.rate);
            else std::printf(" rate=n/a");
            if (!row.note.empty()) std::printf("  [%s]", row.note.c_str());
            std::printf("\n");
        }
        std::cout << "  wrote " << path << "\n";
    }
    return any_failure ? 2 : 0;
}
