#include "ppbvp/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ppbvp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw InputError(msg); }

const json& member(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + ": missing '" + key + "'");
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where + ": expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where + ": expected an integer");
    return j.get<int>();
}

Expr expr_field(const json& j, const std::string& where) {
    if (j.is_number()) return Expr::constant(j.get<double>());
    if (!j.is_string()) fail(where + ": expected an expression string or a number");
    try {
        return Expr::parse(j.get<std::string>());
    } catch (const ParseError& e) {
        fail(where + ": " + e.what() + " at offset " + std::to_string(e.offset()));
    }
}

OneDData oned_field(const json& j, const std::string& where) {
    if (j.is_array()) {
        std::vector<double> v;
        v.reserve(j.size());
        for (const auto& el : j) v.push_back(number(el, where));
        return v;
    }
    return expr_field(j, where);
}

GridFunction1D materialize(const OneDData& d, const Grid& grid, Axis axis,
                           const std::string& where) {
    if (const auto* samples = std::get_if<std::vector<double>>(&d)) {
        if (static_cast<int>(samples->size()) != grid.count(axis))
            fail(where + ": sample array has " + std::to_string(samples->size()) +
                 " entries, grid axis has " + std::to_string(grid.count(axis)));
        return GridFunction1D(grid, axis, *samples);
    }
    try {
        return GridFunction1D(grid, axis, std::get<Expr>(d));
    } catch (const std::invalid_argument& e) {
        fail(where + ": " + e.what());
    } catch (const EvalError& e) {
        fail(where + ": " + e.what());
    }
}

ClassicalBlock parse_classical(const json& j) {
    if (!j.is_object()) fail("classical: expected an object");
    return ClassicalBlock{
        oned_field(member(j, "phi1", "classical"), "classical.phi1"),
        oned_field(member(j, "phi2", "classical"), "classical.phi2"),
        oned_field(member(j, "phi3", "classical"), "classical.phi3"),
        oned_field(member(j, "psi1", "classical"), "classical.psi1"),
        oned_field(member(j, "psi2", "classical"), "classical.psi2"),
        oned_field(member(j, "psi3", "classical"), "classical.psi3")};
}

NonClassicalBlock parse_nonclassical(const json& j) {
    if (!j.is_object()) fail("nonclassical: expected an object");
    auto scalar = [&](const char* key) {
        return number(member(j, key, "nonclassical"), std::string("nonclassical.") + key);
    };
    auto trace = [&](const char* key) {
        return oned_field(member(j, key, "nonclassical"), std::string("nonclassical.") + key);
    };
    return NonClassicalBlock{
        scalar("z00"), scalar("z01"), scalar("z02"),
        scalar("z10"), scalar("z11"), scalar("z12"),
        scalar("z20"), scalar("z21"),
        scalar("zh1_00"), scalar("zh1_01"), scalar("zh1_02"),
        scalar("zh2_00"), scalar("zh2_10"), scalar("zh2_20"),
        trace("z03"), trace("z13"), trace("zh1_03"),
        trace("z30"), trace("z31"), trace("zh2_30")};
}

}  // namespace

ProblemFile parse_problem_text(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("problem file: ") + e.what());
    }
    if (!doc.is_object()) fail("problem file: expected a JSON object");

    ProblemFile pf;

    const json& domain = member(doc, "domain", "problem file");
    const double h1 = number(member(domain, "h1", "domain"), "domain.h1");
    const double h2 = number(member(domain, "h2", "domain"), "domain.h2");
    if (h1 <= 0.0 || h2 <= 0.0) fail("domain: extents must be positive");
    pf.rect = Rect(h1, h2);

    const json& grid = member(doc, "grid", "problem file");
    pf.nx = integer(member(grid, "nx", "grid"), "grid.nx");
    pf.ny = integer(member(grid, "ny", "grid"), "grid.ny");

    if (auto it = doc.find("p"); it != doc.end()) {
        if (it->is_string()) {
            if (it->get<std::string>() != "inf") fail("p: expected a number or \"inf\"");
            pf.p = Exponent::inf();
        } else {
            const double p = number(*it, "p");
            if (p < 1.0) fail("p: must be at least 1");
            pf.p = Exponent(p);
        }
    }

    if (auto it = doc.find("coefficients"); it != doc.end()) {
        if (!it->is_object()) fail("coefficients: expected an object");
        for (const auto& [key, value] : it->items()) {
            int i = -1, j = -1;
            if (key.size() == 3 && key[1] == ',' &&
                key[0] >= '0' && key[0] <= '3' && key[2] >= '0' && key[2] <= '3') {
                i = key[0] - '0';
                j = key[2] - '0';
            } else {
                fail("coefficients: bad key '" + key + "' (expected \"i,j\" with i,j in 0..3)");
            }
            if (i == 3 && j == 3)
                fail("coefficients: key \"3,3\" is rejected; a_{3,3} is fixed to 1");
            pf.coefficients.set(i, j, expr_field(value, "coefficients[\"" + key + "\"]"));
        }
    }

    if (auto it = doc.find("rhs"); it != doc.end())
        pf.rhs = expr_field(*it, "rhs");

    int data_blocks = 0;
    if (doc.contains("classical")) ++data_blocks;
    if (doc.contains("nonclassical")) ++data_blocks;
    if (doc.contains("manufactured")) ++data_blocks;
    if (data_blocks != 1)
        fail("problem file: exactly one of 'classical', 'nonclassical', 'manufactured' required");

    if (doc.contains("classical")) {
        pf.data = parse_classical(doc["classical"]);
    } else if (doc.contains("nonclassical")) {
        pf.data = parse_nonclassical(doc["nonclassical"]);
    } else {
        const json& m = doc["manufactured"];
        if (!m.is_object()) fail("manufactured: expected an object");
        pf.data = ManufacturedBlock{expr_field(member(m, "u_exact", "manufactured"),
                                               "manufactured.u_exact")};
    }
    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail("cannot open problem file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_problem_text(ss.str());
}

Grid ProblemFile::make_grid(std::optional<int> nx_override,
                            std::optional<int> ny_override) const {
    const int use_nx = nx_override.value_or(nx);
    const int use_ny = ny_override.value_or(ny);
    if (use_nx < 9 || use_ny < 9)
        fail("grid: node counts must be at least 9 (got " + std::to_string(use_nx) +
             "x" + std::to_string(use_ny) + ")");
    return Grid(rect, use_nx, use_ny);
}

ClassicalBoundaryData ProblemFile::classical_data(const Grid& grid) const {
    if (!has_classical()) fail("problem file: 'classical' block required");
    const auto& b = std::get<ClassicalBlock>(data);
    return ClassicalBoundaryData(
        materialize(b.phi1, grid, Axis::Y, "classical.phi1"),
        materialize(b.phi2, grid, Axis::Y, "classical.phi2"),
        materialize(b.phi3, grid, Axis::Y, "classical.phi3"),
        materialize(b.psi1, grid, Axis::X, "classical.psi1"),
        materialize(b.psi2, grid, Axis::X, "classical.psi2"),
        materialize(b.psi3, grid, Axis::X, "classical.psi3"));
}

NonClassicalBoundaryData ProblemFile::nonclassical_data(const Grid& grid) const {
    if (!has_nonclassical()) fail("problem file: 'nonclassical' block required");
    const auto& b = std::get<NonClassicalBlock>(data);
    return NonClassicalBoundaryData(
        b.z00, b.z01, b.z02, b.z10, b.z11, b.z12, b.z20, b.z21,
        b.zh1_00, b.zh1_01, b.zh1_02, b.zh2_00, b.zh2_10, b.zh2_20,
        materialize(b.z03, grid, Axis::Y, "nonclassical.z03"),
        materialize(b.z13, grid, Axis::Y, "nonclassical.z13"),
        materialize(b.zh1_03, grid, Axis::Y, "nonclassical.zh1_03"),
        materialize(b.z30, grid, Axis::X, "nonclassical.z30"),
        materialize(b.z31, grid, Axis::X, "nonclassical.z31"),
        materialize(b.zh2_30, grid, Axis::X, "nonclassical.zh2_30"));
}

const Expr& ProblemFile::u_exact() const {
    if (!has_manufactured()) fail("problem file: 'manufactured' block required");
    return std::get<ManufacturedBlock>(data).u_exact;
}

ProblemSpec ProblemFile::make_problem_spec(const Grid& grid, bool pose_nonclassical) const {
    if (has_manufactured()) {
        ManufacturedCase mc{u_exact(), coefficients, rhs};
        return make_problem(mc, grid, pose_nonclassical);
    }
    if (!rhs) fail("problem file: 'rhs' required to solve");
    if (has_classical())
        return ProblemSpec{grid, coefficients, *rhs, classical_data(grid)};
    return ProblemSpec{grid, coefficients, *rhs, nonclassical_data(grid)};
}

namespace {

json trace_json(const GridFunction1D& g) {
    json arr = json::array();
    for (int i = 0; i < g.size(); ++i) arr.push_back(g[i]);
    return arr;
}

}  // namespace

std::string classical_block_json(const ClassicalBoundaryData& c) {
    json j;
    j["classical"] = {{"phi1", trace_json(c.phi1)}, {"phi2", trace_json(c.phi2)},
                      {"phi3", trace_json(c.phi3)}, {"psi1", trace_json(c.psi1)},
                      {"psi2", trace_json(c.psi2)}, {"psi3", trace_json(c.psi3)}};
    return j.dump(2);
}

std::string nonclassical_block_json(const NonClassicalBoundaryData& z) {
    json j;
    j["nonclassical"] = {
        {"z00", z.z00}, {"z01", z.z01}, {"z02", z.z02},
        {"z10", z.z10}, {"z11", z.z11}, {"z12", z.z12},
        {"z20", z.z20}, {"z21", z.z21},
        {"zh1_00", z.zh1_00}, {"zh1_01", z.zh1_01}, {"zh1_02", z.zh1_02},
        {"zh2_00", z.zh2_00}, {"zh2_10", z.zh2_10}, {"zh2_20", z.zh2_20},
        {"z03", trace_json(z.z03)}, {"z13", trace_json(z.z13)},
        {"zh1_03", trace_json(z.zh1_03)}, {"z30", trace_json(z.z30)},
        {"z31", trace_json(z.z31)}, {"zh2_30", trace_json(z.zh2_30)}};
    return j.dump(2);
}

}  // namespace ppbvp
