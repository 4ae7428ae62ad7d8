#pragma once

#include <optional>
#include <span>
#include <variant>

#include "ppbvp/boundary.hpp"
#include "ppbvp/pde_operator.hpp"

namespace ppbvp {

/// A complete problem instance: equation (V33 u) = rhs on the grid, with
/// either classical or non-classical boundary data.
struct ProblemSpec {
    Grid grid;
    CoefficientField coefficients;
    std::variant<Expr, GridFunction2D> rhs;
    std::variant<ClassicalBoundaryData, NonClassicalBoundaryData> data;
};

enum class RowKind { Pde, BoundaryValue, NormalDerivative };

/// Dense collocation system, row-equilibrated (each row and its right-hand
/// side divided by the row's max |coefficient|); row_scale recovers the
/// original scaling for unscaled diagnostics.
struct LinearSystem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;  // row-major
    std::vector<double> b;
    std::vector<RowKind> kind;
    std::vector<double> row_scale;

    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }

    /// Residual b - A*v of a candidate sample vector, per row (equilibrated).
    std::vector<double> residual(std::span<const double> v) const;
};

/// Build the collocation system: PDE rows at all interior nodes, Dirichlet
/// rows on the four boundary lines (corner nodes carried by the x = 0 and
/// x = h1 lines), one-sided u_x rows at x = 0 and u_y rows at y = 0.  The
/// system is intentionally mildly overdetermined; non-classical data is first
/// converted through the Taylor-remainder reconstruction.
LinearSystem assemble(const ProblemSpec& spec);

struct SolveResult {
    GridFunction2D u;
    double residual_norm;       // l2 residual of the equilibrated system
    double condition_estimate;  // from the rank-revealing R diagonal
    int rank;
    int unknowns;
    bool ill_conditioned;       // condition_estimate > 1e10
    // Max |row residual| of the original (unequilibrated) rows, per row kind.
    double max_violation_pde;
    double max_violation_boundary;
    double max_violation_derivative;
};

/// Minimum-norm least-squares solution via a rank-revealing complete
/// orthogonal decomposition.  Never asserts well-posedness: conditioning and
/// per-constraint violations are reported and it is the caller's business to
/// reject a suspect solve.
SolveResult solve(const ProblemSpec& spec);

struct Deviation {
    std::string name;
    double value;  // absolute for scalars, sup-norm for traces
};

/// Result of the round-trip equivalence test: solve the classical problem
/// built from non-classical data, then read the non-classical data back off
/// the computed solution.
struct EquivalenceReport {
    std::vector<Deviation> scalar_deviations;  // 14 entries
    std::vector<Deviation> trace_deviations;   // 6 entries
    double max_scalar_deviation;
    double max_trace_deviation;
    double max_deviation;
    SolveResult solve;
};

/// Requires spec.data to hold NonClassicalBoundaryData.
EquivalenceReport equivalence_check(const ProblemSpec& spec);

/// A problem with a known exact solution.  The right-hand side may be given
/// explicitly (e.g. obtained by hand differentiation); when absent it is
/// derived by applying the discrete operator to the exact samples, which
/// makes the collocation system consistent to rounding.
struct ManufacturedCase {
    Expr u_exact;
    CoefficientField coefficients;
    std::optional<Expr> rhs;
};

/// Assemble a ProblemSpec from a manufactured case: boundary data from the
/// traces of the exact samples, posed classically or non-classically.
ProblemSpec make_problem(const ManufacturedCase& mc, const Grid& grid,
                         bool pose_nonclassical = false);

struct ConvergenceRow {
    int n;             // nodes per axis
    double h;          // x-spacing
    double max_error;  // max nodal |u - u_exact|
    double residual_norm;
    std::optional<double> order;  // log2(e(h)/e(h/2)); absent on first row
    std::string order_label;      // formatted order, "exact", or "-"
};

/// Solve the case on each grid size and report errors and observed orders.
/// Sizes must be >= 9 each and at least three are required.
std::vector<ConvergenceRow> convergence_study(const ManufacturedCase& mc, Rect rect,
                                              std::span<const int> sizes);

}  // namespace ppbvp
