#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppbvp/problem_io.hpp"

namespace {

using namespace ppbvp;

constexpr int kExitOk = 0;
constexpr int kExitDomainFailure = 1;
constexpr int kExitInputError = 2;

struct GridOverride {
    std::optional<int> nx, ny;
};

GridOverride parse_grid_flag(const std::string& s) {
    if (s.empty()) return {};
    int nx = 0, ny = 0;
    if (std::sscanf(s.c_str(), "%d,%d", &nx, &ny) != 2)
        throw InputError("--grid expects NX,NY");
    return GridOverride{nx, ny};
}

Exponent parse_p_flag(const std::string& s, Exponent fallback) {
    if (s.empty()) return fallback;
    if (s == "inf") return Exponent::inf();
    try {
        return Exponent(std::stod(s));
    } catch (const std::exception&) {
        throw InputError("--p expects a number >= 1 or 'inf'");
    }
}

std::vector<int> parse_sizes_flag(const std::string& s) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        try {
            out.push_back(std::stoi(s.substr(pos, next - pos)));
        } catch (const std::exception&) {
            throw InputError("--sizes expects a comma-separated list of node counts");
        }
        pos = next + 1;
    }
    if (out.empty()) throw InputError("--sizes expects a comma-separated list of node counts");
    return out;
}

void print_solve_summary(const SolveResult& r) {
    std::printf("unknowns        %d\n", r.unknowns);
    std::printf("rank            %d\n", r.rank);
    std::printf("residual_norm   %.6g\n", r.residual_norm);
    std::printf("condition_est   %.6g\n", r.condition_estimate);
    std::printf("max_violation   pde %.6g  boundary %.6g  derivative %.6g\n",
                r.max_violation_pde, r.max_violation_boundary, r.max_violation_derivative);
    if (r.rank < r.unknowns)
        std::printf("warning: rank deficiency %d\n", r.unknowns - r.rank);
    if (r.ill_conditioned)
        std::printf("warning: condition estimate exceeds 1e10; solution is suspect\n");
}

int cmd_validate(const std::string& file, const GridOverride& go, double tol) {
    ProblemFile pf = load_problem_file(file);
    if (!pf.has_classical())
        throw InputError("validate: 'classical' block required");
    Grid grid = pf.make_grid(go.nx, go.ny);
    AgreementReport rep = agreement_check(pf.classical_data(grid), tol);
    std::printf("agreement conditions (tol %.3g):\n", tol);
    for (const auto& c : rep.conditions)
        std::printf("  %-18s lhs %+.9e  rhs %+.9e  |diff| %.3e  %s\n",
                    c.name.c_str(), c.lhs, c.rhs, c.difference,
                    c.difference <= tol ? "ok" : "FAIL");
    std::printf("%s (max |diff| %.3e)\n", rep.pass ? "PASS" : "FAIL", rep.max_difference());
    return rep.pass ? kExitOk : kExitDomainFailure;
}

int cmd_convert(const std::string& file, const GridOverride& go,
                const std::string& direction, const std::string& out) {
    ProblemFile pf = load_problem_file(file);
    Grid grid = pf.make_grid(go.nx, go.ny);

    std::string rendered;
    if (direction == "to-classical") {
        if (!pf.has_nonclassical())
            throw InputError("convert --direction to-classical: 'nonclassical' block required");
        rendered = classical_block_json(nonclassical_to_classical(pf.nonclassical_data(grid)));
    } else if (direction == "to-nonclassical") {
        if (!pf.has_classical())
            throw InputError("convert --direction to-nonclassical: 'classical' block required");
        std::vector<DualSourceEntry> dual;
        rendered = nonclassical_block_json(
            classical_to_nonclassical(pf.classical_data(grid), &dual));
        std::fprintf(stderr, "dual-source discrepancies:\n");
        for (const auto& d : dual)
            std::fprintf(stderr, "  %-28s used %+.9e  alt %+.9e  |diff| %.3e\n",
                         d.name.c_str(), d.used, d.alternate, d.difference);
    } else {
        throw InputError("--direction must be to-classical or to-nonclassical");
    }

    if (out.empty()) {
        std::printf("%s\n", rendered.c_str());
    } else {
        std::ofstream os(out, std::ios::binary);
        if (!os) throw InputError("cannot open '" + out + "' for writing");
        os << rendered << '\n';
        std::printf("wrote %s\n", out.c_str());
    }
    return kExitOk;
}

int cmd_solve(const std::string& file, const GridOverride& go, const std::string& out) {
    ProblemFile pf = load_problem_file(file);
    Grid grid = pf.make_grid(go.nx, go.ny);
    ProblemSpec spec = pf.make_problem_spec(grid);
    SolveResult res = solve(spec);

    print_solve_summary(res);
    if (pf.has_manufactured()) {
        GridFunction2D exact(grid, pf.u_exact());
        double err = 0.0;
        for (std::size_t k = 0; k < exact.samples().size(); ++k)
            err = std::max(err, std::abs(res.u.samples()[k] - exact.samples()[k]));
        std::printf("max_error       %.6g\n", err);
    }
    if (!out.empty()) {
        write_csv(out, res.u);
        std::printf("wrote %s\n", out.c_str());
    }
    return res.ill_conditioned ? kExitDomainFailure : kExitOk;
}

int cmd_equiv(const std::string& file, const GridOverride& go, double tol) {
    ProblemFile pf = load_problem_file(file);
    Grid grid = pf.make_grid(go.nx, go.ny);
    if (!pf.has_nonclassical() && !pf.has_manufactured())
        throw InputError("equiv: 'nonclassical' or 'manufactured' block required");
    ProblemSpec spec = pf.make_problem_spec(grid, /*pose_nonclassical=*/true);
    EquivalenceReport rep = equivalence_check(spec);

    std::printf("equivalence check (tol %.3g):\n", tol);
    for (const auto& d : rep.scalar_deviations)
        std::printf("  scalar %-8s |dev| %.3e\n", d.name.c_str(), d.value);
    for (const auto& d : rep.trace_deviations)
        std::printf("  trace  %-8s sup|dev| %.3e\n", d.name.c_str(), d.value);
    std::printf("max deviation %.3e  (scalars %.3e, traces %.3e)\n",
                rep.max_deviation, rep.max_scalar_deviation, rep.max_trace_deviation);
    print_solve_summary(rep.solve);
    const bool ok = rep.max_deviation <= tol && !rep.solve.ill_conditioned;
    std::printf("%s\n", ok ? "PASS" : "FAIL");
    return ok ? kExitOk : kExitDomainFailure;
}

int cmd_norm(const std::string& file, const GridOverride& go, const std::string& p_flag,
             const std::string& target) {
    ProblemFile pf = load_problem_file(file);
    Grid grid = pf.make_grid(go.nx, go.ny);
    Exponent p = parse_p_flag(p_flag, pf.p);

    if (!target.empty() && target.size() == 3 && target[1] == ',') {
        // A single coefficient: report its class norm.
        CoefficientClassReport rep = validate_coefficients(pf.coefficients, grid, p);
        const int i = target[0] - '0';
        const int j = target[2] - '0';
        for (const auto& e : rep.entries) {
            if (e.i != i || e.j != j) continue;
            std::printf("a_{%d,%d}  class %-22s  norm %.12g  %s%s\n", e.i, e.j,
                        e.required_class.c_str(), e.norm, e.finite ? "finite" : "NOT finite",
                        e.error.empty() ? "" : ("  error: " + e.error).c_str());
            return e.finite ? kExitOk : kExitDomainFailure;
        }
        throw InputError("norm: --target coefficient must name one of the 15 free a_{i,j}");
    }

    if (!target.empty()) {
        GridFunction2D f = read_csv(target, grid);
        std::printf("L_%s norm        %.12g\n", p.to_string().c_str(), lp_norm_2d(f, p));
        std::printf("W_%s^(3,3) norm  %.12g\n", p.to_string().c_str(), sobolev_norm_2d(f, p));
        return kExitOk;
    }

    CoefficientClassReport rep = validate_coefficients(pf.coefficients, grid, p);
    std::printf("coefficient class report (p = %s):\n", p.to_string().c_str());
    for (const auto& e : rep.entries)
        std::printf("  a_{%d,%d}  %-22s  norm %.12g  %s%s\n", e.i, e.j,
                    e.required_class.c_str(), e.norm, e.finite ? "finite" : "NOT finite",
                    e.error.empty() ? "" : ("  error: " + e.error).c_str());
    std::printf("%s\n", rep.all_finite ? "all finite" : "non-finite entries present");
    return rep.all_finite ? kExitOk : kExitDomainFailure;
}

int cmd_mms(const std::string& file, const std::string& sizes_flag, const std::string& out) {
    ProblemFile pf = load_problem_file(file);
    if (!pf.has_manufactured())
        throw InputError("mms: 'manufactured' block required");
    std::vector<int> sizes = parse_sizes_flag(sizes_flag.empty() ? "11,21,41" : sizes_flag);

    ManufacturedCase mc{pf.u_exact(), pf.coefficients, pf.rhs};
    auto rows = convergence_study(mc, pf.rect, sizes);

    std::printf("%6s  %12s  %14s  %8s\n", "n", "h", "max_error", "order");
    for (const auto& r : rows)
        std::printf("%6d  %12.6g  %14.6e  %8s\n", r.n, r.h, r.max_error,
                    r.order_label.c_str());

    if (!out.empty()) {
        std::ofstream os(out, std::ios::binary);
        if (!os) throw InputError("cannot open '" + out + "' for writing");
        os << "h,max_error,order\n";
        char buf[96];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s\n", r.h, r.max_error,
                          r.order_label.c_str());
            os << buf;
        }
        std::printf("wrote %s\n", out.c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-value problems for the sixth-order operator "
                 "sum a_{i,j} D_x^i D_y^j with a_{3,3} = 1 on a rectangle: "
                 "boundary-data conversion, agreement checking, norms, and a "
                 "least-squares collocation solver."};
    app.require_subcommand(1);

    std::string file, grid_flag, out, direction, p_flag, target, sizes_flag;
    double tol = 1e-6;

    auto add_common = [&](CLI::App* sub, bool with_grid = true) {
        sub->add_option("file", file, "problem file (JSON)")->required();
        if (with_grid)
            sub->add_option("--grid", grid_flag, "override grid node counts: NX,NY");
    };

    CLI::App* validate = app.add_subcommand("validate", "check the nine agreement conditions");
    add_common(validate);
    validate->add_option("--tol", tol, "residual tolerance (default 1e-6 at 33x33; scale as O(h^2))");

    CLI::App* convert = app.add_subcommand("convert", "convert boundary data between forms");
    add_common(convert);
    convert->add_option("--direction", direction, "to-classical | to-nonclassical")->required();
    convert->add_option("--out", out, "write the converted block to a file");

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve the problem by least-squares collocation");
    add_common(solve_cmd);
    solve_cmd->add_option("--out", out, "solution CSV path");

    CLI::App* equiv = app.add_subcommand("equiv", "round-trip the non-classical data through a solve");
    add_common(equiv);
    equiv->add_option("--tol", tol, "max deviation allowed (default 1e-6; scale as O(h^2))");

    CLI::App* norm = app.add_subcommand("norm", "compute norms / coefficient class report");
    add_common(norm);
    norm->add_option("--p", p_flag, "exponent override: number or 'inf'");
    norm->add_option("--target", target, "solution CSV path or coefficient key \"i,j\"");

    CLI::App* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
    add_common(mms, /*with_grid=*/false);
    mms->add_option("--sizes", sizes_flag, "node counts, e.g. 11,21,41");
    mms->add_option("--out", out, "study table CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitInputError;
    }

    try {
        GridOverride go = parse_grid_flag(grid_flag);
        if (validate->parsed()) return cmd_validate(file, go, tol);
        if (convert->parsed()) return cmd_convert(file, go, direction, out);
        if (solve_cmd->parsed()) return cmd_solve(file, go, out);
        if (equiv->parsed()) return cmd_equiv(file, go, tol);
        if (norm->parsed()) return cmd_norm(file, go, p_flag, target);
        if (mms->parsed()) return cmd_mms(file, sizes_flag, out);
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "input error: %s at offset %zu\n", e.what(), e.offset());
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomainFailure;
    }
    return kExitInputError;
}
