#include "ppbvp/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ppbvp {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

GridFunction2D sample_rhs(const ProblemSpec& spec) {
    if (const auto* gf = std::get_if<GridFunction2D>(&spec.rhs)) {
        require(gf->grid().same_layout(spec.grid), "assemble: rhs grid mismatch");
        return *gf;
    }
    return GridFunction2D(spec.grid, std::get<Expr>(spec.rhs));
}

void check_data_axes(const Grid& g, const ClassicalBoundaryData& c) {
    require(c.phi1.size() == g.ny() && c.phi1.spacing() == g.dy(),
            "assemble: boundary data does not match the grid's y axis");
    require(c.psi1.size() == g.nx() && c.psi1.spacing() == g.dx(),
            "assemble: boundary data does not match the grid's x axis");
}

struct AxisTaps {
    int first;
    double w[5];
    int count;
};

// Order 0 is the identity tap; orders 1..3 come from the stencil table.
AxisTaps taps(const AxisStencils& s, int order, int node) {
    AxisTaps t;
    if (order == 0) {
        t.first = node;
        t.w[0] = 1.0;
        t.count = 1;
        return t;
    }
    const auto st = s.at(order, node);
    t.first = st.first;
    t.count = static_cast<int>(st.w.size());
    for (int p = 0; p < t.count; ++p) t.w[p] = st.w[static_cast<std::size_t>(p)];
    return t;
}

}  // namespace

std::vector<double> LinearSystem::residual(std::span<const double> v) const {
    std::vector<double> r(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        double acc = -b[i];
        const double* row = a.data() + i * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * v[c];
        r[i] = acc;
    }
    return r;
}

LinearSystem assemble(const ProblemSpec& spec) {
    const Grid& g = spec.grid;

    const ClassicalBoundaryData data =
        std::holds_alternative<NonClassicalBoundaryData>(spec.data)
            ? nonclassical_to_classical(std::get<NonClassicalBoundaryData>(spec.data))
            : std::get<ClassicalBoundaryData>(spec.data);
    check_data_axes(g, data);

    const GridFunction2D rhs = sample_rhs(spec);
    const StencilTable table(g);
    const AxisStencils& sx = table.axis(Axis::X);
    const AxisStencils& sy = table.axis(Axis::Y);

    // Coefficient samples for every active term.
    struct Term {
        int i, j;
        std::vector<double> coef;
    };
    std::vector<Term> terms;
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j)
            if (spec.coefficients.has(i, j)) {
                std::vector<double> coef;
                try {
                    coef = spec.coefficients.sample(i, j, g);
                } catch (const EvalError& e) {
                    throw CoefficientError(i, j, e.what());
                }
                bool all_zero = true;
                for (double v : coef) {
                    if (!std::isfinite(v)) throw CoefficientError(i, j, "non-finite samples");
                    if (v != 0.0) all_zero = false;
                }
                if (!all_zero) terms.push_back(Term{i, j, std::move(coef)});
            }

    const int nx = g.nx(), ny = g.ny();
    const std::size_t cols = static_cast<std::size_t>(nx) * ny;
    const std::size_t n_pde = static_cast<std::size_t>(nx - 2) * (ny - 2);
    const std::size_t n_bnd = 2 * static_cast<std::size_t>(ny) + 2 * static_cast<std::size_t>(nx - 2);
    const std::size_t n_der = static_cast<std::size_t>(ny) + static_cast<std::size_t>(nx);

    LinearSystem sys;
    sys.rows = n_pde + n_bnd + n_der;
    sys.cols = cols;
    sys.a.assign(sys.rows * cols, 0.0);
    sys.b.assign(sys.rows, 0.0);
    sys.kind.assign(sys.rows, RowKind::Pde);
    sys.row_scale.assign(sys.rows, 1.0);

    auto idx = [ny](int ix, int iy) {
        return static_cast<std::size_t>(ix) * ny + iy;
    };

    std::size_t row = 0;

    // (a) PDE collocation at interior nodes.
    for (int ix = 1; ix < nx - 1; ++ix) {
        for (int iy = 1; iy < ny - 1; ++iy, ++row) {
            double* out = sys.a.data() + row * cols;
            for (const Term& t : terms) {
                const double c = t.coef[idx(ix, iy)];
                if (c == 0.0) continue;
                const AxisTaps tx = taps(sx, t.i, ix);
                const AxisTaps ty = taps(sy, t.j, iy);
                for (int p = 0; p < tx.count; ++p)
                    for (int q = 0; q < ty.count; ++q)
                        out[idx(tx.first + p, ty.first + q)] += c * tx.w[p] * ty.w[q];
            }
            sys.b[row] = rhs.at(ix, iy);
        }
    }

    // (b) Dirichlet rows; the x-side lines own the corner nodes.
    auto value_row = [&](int ix, int iy, double v) {
        sys.at(row, idx(ix, iy)) = 1.0;
        sys.b[row] = v;
        sys.kind[row] = RowKind::BoundaryValue;
        ++row;
    };
    for (int iy = 0; iy < ny; ++iy) value_row(0, iy, data.phi1[iy]);
    for (int iy = 0; iy < ny; ++iy) value_row(nx - 1, iy, data.phi2[iy]);
    for (int ix = 1; ix < nx - 1; ++ix) value_row(ix, 0, data.psi1[ix]);
    for (int ix = 1; ix < nx - 1; ++ix) value_row(ix, ny - 1, data.psi2[ix]);

    // (c) Normal-derivative rows: u_x(0, y_j) = phi3, u_y(x_i, 0) = psi3.
    for (int iy = 0; iy < ny; ++iy, ++row) {
        const AxisTaps tx = taps(sx, 1, 0);
        for (int p = 0; p < tx.count; ++p)
            sys.at(row, idx(tx.first + p, iy)) = tx.w[p];
        sys.b[row] = data.phi3[iy];
        sys.kind[row] = RowKind::NormalDerivative;
    }
    for (int ix = 0; ix < nx; ++ix, ++row) {
        const AxisTaps ty = taps(sy, 1, 0);
        for (int q = 0; q < ty.count; ++q)
            sys.at(row, idx(ix, ty.first + q)) = ty.w[q];
        sys.b[row] = data.psi3[ix];
        sys.kind[row] = RowKind::NormalDerivative;
    }

    // Equilibrate rows so the h^-6 principal-stencil rows do not dominate the
    // least-squares weighting.
    for (std::size_t r = 0; r < sys.rows; ++r) {
        double m = 0.0;
        const double* a = sys.a.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) m = std::max(m, std::abs(a[c]));
        if (m == 0.0) m = 1.0;
        sys.row_scale[r] = m;
        double* w = sys.a.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) w[c] /= m;
        sys.b[r] /= m;
    }
    return sys;
}

SolveResult solve(const ProblemSpec& spec) {
    LinearSystem sys = assemble(spec);

    for (double v : sys.a)
        if (!std::isfinite(v)) throw std::runtime_error("solve: non-finite system entry");
    for (double v : sys.b)
        if (!std::isfinite(v)) throw std::runtime_error("solve: non-finite right-hand side");

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> amap(sys.a.data(), static_cast<Eigen::Index>(sys.rows),
                                    static_cast<Eigen::Index>(sys.cols));
    Eigen::MatrixXd A = amap;
    Eigen::Map<const Eigen::VectorXd> b(sys.b.data(), static_cast<Eigen::Index>(sys.rows));

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    Eigen::VectorXd x = cod.solve(b);

    const int rank = static_cast<int>(cod.rank());
    double cond = std::numeric_limits<double>::infinity();
    if (rank > 0) {
        const auto& t = cod.matrixT();
        const double dmax = std::abs(t(0, 0));
        const double dmin = std::abs(t(rank - 1, rank - 1));
        cond = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
    }

    const Eigen::VectorXd r = A * x - b;

    std::vector<double> samples(x.data(), x.data() + x.size());
    SolveResult result{GridFunction2D(spec.grid, std::move(samples)),
                       r.norm(),
                       cond,
                       rank,
                       static_cast<int>(sys.cols),
                       cond > 1e10,
                       0.0,
                       0.0,
                       0.0};

    for (std::size_t i = 0; i < sys.rows; ++i) {
        const double v = std::abs(r(static_cast<Eigen::Index>(i))) * sys.row_scale[i];
        switch (sys.kind[i]) {
            case RowKind::Pde:
                result.max_violation_pde = std::max(result.max_violation_pde, v);
                break;
            case RowKind::BoundaryValue:
                result.max_violation_boundary = std::max(result.max_violation_boundary, v);
                break;
            case RowKind::NormalDerivative:
                result.max_violation_derivative = std::max(result.max_violation_derivative, v);
                break;
        }
    }
    return result;
}

EquivalenceReport equivalence_check(const ProblemSpec& spec) {
    require(std::holds_alternative<NonClassicalBoundaryData>(spec.data),
            "equivalence_check: non-classical data required");
    const NonClassicalBoundaryData& z = std::get<NonClassicalBoundaryData>(spec.data);

    ProblemSpec classical{spec.grid, spec.coefficients, spec.rhs,
                          nonclassical_to_classical(z)};
    SolveResult solved = solve(classical);
    const NonClassicalBoundaryData back = traces_from_solution(solved.u).second;

    std::vector<Deviation> scalars;
    std::vector<Deviation> traces;
    auto scalar = [&](const char* name, double in, double out) {
        scalars.push_back(Deviation{name, std::abs(in - out)});
    };
    scalar("z00", z.z00, back.z00);
    scalar("z01", z.z01, back.z01);
    scalar("z02", z.z02, back.z02);
    scalar("z10", z.z10, back.z10);
    scalar("z11", z.z11, back.z11);
    scalar("z12", z.z12, back.z12);
    scalar("z20", z.z20, back.z20);
    scalar("z21", z.z21, back.z21);
    scalar("zh1_00", z.zh1_00, back.zh1_00);
    scalar("zh1_01", z.zh1_01, back.zh1_01);
    scalar("zh1_02", z.zh1_02, back.zh1_02);
    scalar("zh2_00", z.zh2_00, back.zh2_00);
    scalar("zh2_10", z.zh2_10, back.zh2_10);
    scalar("zh2_20", z.zh2_20, back.zh2_20);

    auto trace = [&](const char* name, const GridFunction1D& in, const GridFunction1D& out) {
        double m = 0.0;
        for (int i = 0; i < in.size(); ++i) m = std::max(m, std::abs(in[i] - out[i]));
        traces.push_back(Deviation{name, m});
    };
    trace("z03", z.z03, back.z03);
    trace("z13", z.z13, back.z13);
    trace("zh1_03", z.zh1_03, back.zh1_03);
    trace("z30", z.z30, back.z30);
    trace("z31", z.z31, back.z31);
    trace("zh2_30", z.zh2_30, back.zh2_30);

    double max_scalar = 0.0;
    for (const auto& d : scalars) max_scalar = std::max(max_scalar, d.value);
    double max_trace = 0.0;
    for (const auto& d : traces) max_trace = std::max(max_trace, d.value);

    return EquivalenceReport{std::move(scalars), std::move(traces),
                             max_scalar, max_trace, std::max(max_scalar, max_trace),
                             std::move(solved)};
}

ProblemSpec make_problem(const ManufacturedCase& mc, const Grid& grid,
                         bool pose_nonclassical) {
    GridFunction2D exact(grid, mc.u_exact);
    GridFunction2D rhs = mc.rhs ? GridFunction2D(grid, *mc.rhs)
                                : apply_V33(mc.coefficients, exact);
    auto [classical, nonclassical] = traces_from_solution(exact);
    if (pose_nonclassical)
        return ProblemSpec{grid, mc.coefficients, std::move(rhs), std::move(nonclassical)};
    return ProblemSpec{grid, mc.coefficients, std::move(rhs), std::move(classical)};
}

std::vector<ConvergenceRow> convergence_study(const ManufacturedCase& mc, Rect rect,
                                              std::span<const int> sizes) {
    require(sizes.size() >= 3, "convergence_study: need at least 3 grid sizes");
    for (int n : sizes) require(n >= 9, "convergence_study: sizes must be >= 9");

    constexpr double exact_floor = 1e-8;
    std::vector<ConvergenceRow> rows;
    for (int n : sizes) {
        Grid grid(rect, n, n);
        ProblemSpec spec = make_problem(mc, grid);
        SolveResult res = solve(spec);
        GridFunction2D exact(grid, mc.u_exact);

        double err = 0.0;
        for (std::size_t k = 0; k < exact.samples().size(); ++k)
            err = std::max(err, std::abs(res.u.samples()[k] - exact.samples()[k]));

        ConvergenceRow row{n, grid.dx(), err, res.residual_norm, std::nullopt, "-"};
        if (!rows.empty()) {
            const double prev = rows.back().max_error;
            if (prev == 0.0 || err == 0.0) {
                row.order_label = "-";
            } else if (prev <= exact_floor && err <= exact_floor) {
                row.order_label = "exact";
            } else {
                row.order = std::log2(prev / err);
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.2f", *row.order);
                row.order_label = buf;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ppbvp
