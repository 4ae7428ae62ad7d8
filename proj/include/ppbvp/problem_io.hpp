#pragma once

#include <optional>
#include <string>
#include <variant>

#include "ppbvp/solver.hpp"

namespace ppbvp {

/// Problem-file rejection: malformed JSON, missing or duplicate blocks,
/// unparseable expressions, size mismatches.  The CLI maps this to exit 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A one-variable datum as written in a problem file: an expression in the
/// axis variable or an explicit sample array.
using OneDData = std::variant<Expr, std::vector<double>>;

struct ClassicalBlock {
    OneDData phi1, phi2, phi3;  // functions of y
    OneDData psi1, psi2, psi3;  // functions of x
};

struct NonClassicalBlock {
    double z00, z01, z02;
    double z10, z11, z12;
    double z20, z21;
    double zh1_00, zh1_01, zh1_02;
    double zh2_00, zh2_10, zh2_20;
    OneDData z03, z13, zh1_03;  // functions of y
    OneDData z30, z31, zh2_30;  // functions of x
};

struct ManufacturedBlock {
    Expr u_exact;
};

/// Parsed problem file: domain + grid + exponent + coefficients + rhs +
/// exactly one data block.  Data stays in file form until a grid is fixed
/// (the --grid flag may override the file's node counts).
struct ProblemFile {
    Rect rect{1.0, 1.0};
    int nx = 0;
    int ny = 0;
    Exponent p = Exponent(2.0);
    CoefficientField coefficients;
    std::optional<Expr> rhs;
    std::variant<ClassicalBlock, NonClassicalBlock, ManufacturedBlock> data;

    bool has_classical() const { return std::holds_alternative<ClassicalBlock>(data); }
    bool has_nonclassical() const { return std::holds_alternative<NonClassicalBlock>(data); }
    bool has_manufactured() const { return std::holds_alternative<ManufacturedBlock>(data); }

    Grid make_grid(std::optional<int> nx_override = std::nullopt,
                   std::optional<int> ny_override = std::nullopt) const;

    ClassicalBoundaryData classical_data(const Grid& grid) const;
    NonClassicalBoundaryData nonclassical_data(const Grid& grid) const;
    const Expr& u_exact() const;

    /// Problem instance for the solver.  Manufactured data is posed through
    /// the classical traces unless `pose_nonclassical` is set.
    ProblemSpec make_problem_spec(const Grid& grid, bool pose_nonclassical = false) const;
};

ProblemFile parse_problem_text(const std::string& json_text);
ProblemFile load_problem_file(const std::string& path);

/// JSON renderings (sampled trace arrays) for the convert command.
std::string classical_block_json(const ClassicalBoundaryData& c);
std::string nonclassical_block_json(const NonClassicalBoundaryData& z);

}  // namespace ppbvp
