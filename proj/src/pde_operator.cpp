#include "ppbvp/pde_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ppbvp {

void CoefficientField::check_index(int i, int j) {
    if (i < 0 || i > 3 || j < 0 || j > 3)
        throw std::invalid_argument("CoefficientField: indices must be in 0..3");
    if (i == 3 && j == 3)
        throw std::invalid_argument("CoefficientField: a_{3,3} is fixed to 1 and cannot be set");
}

void CoefficientField::set(int i, int j, Expr e) {
    check_index(i, j);
    defs_[i][j] = Definition(std::move(e));
}

void CoefficientField::set(int i, int j, GridFunction2D samples) {
    check_index(i, j);
    defs_[i][j] = Definition(std::move(samples));
}

bool CoefficientField::has(int i, int j) const {
    if (i == 3 && j == 3) return true;
    return defs_[i][j].has_value();
}

const CoefficientField::Definition* CoefficientField::definition(int i, int j) const {
    return defs_[i][j] ? &*defs_[i][j] : nullptr;
}

std::vector<double> CoefficientField::sample(int i, int j, const Grid& grid) const {
    const std::size_t count = static_cast<std::size_t>(grid.nx()) * grid.ny();
    if (i == 3 && j == 3) return std::vector<double>(count, 1.0);
    if (!defs_[i][j]) return std::vector<double>(count, 0.0);

    if (const auto* gf = std::get_if<GridFunction2D>(&*defs_[i][j])) {
        if (!gf->grid().same_layout(grid))
            throw std::invalid_argument("CoefficientField: sampled coefficient on a different grid");
        return std::vector<double>(gf->samples().begin(), gf->samples().end());
    }
    const Expr& e = std::get<Expr>(*defs_[i][j]);
    std::vector<double> v(count);
    for (int ix = 0; ix < grid.nx(); ++ix)
        for (int iy = 0; iy < grid.ny(); ++iy)
            v[static_cast<std::size_t>(ix) * grid.ny() + iy] = e.eval(grid.x(ix), grid.y(iy));
    return v;
}

CoefficientClassReport validate_coefficients(const CoefficientField& a,
                                             const Grid& grid, Exponent p) {
    CoefficientClassReport report;
    report.all_finite = true;

    for (int i = 0; i <= 3; ++i) {
        for (int j = 0; j <= 3; ++j) {
            if (i == 3 && j == 3) continue;
            CoefficientClassEntry entry;
            entry.i = i;
            entry.j = j;
            if (i == 3)
                entry.required_class = "L_{inf," + p.to_string() + "} (sup in x)";
            else if (j == 3)
                entry.required_class = "L_{" + p.to_string() + ",inf} (sup in y)";
            else
                entry.required_class = "L_" + p.to_string();
            entry.norm = std::numeric_limits<double>::quiet_NaN();
            entry.finite = false;

            try {
                auto samples = a.sample(i, j, grid);
                const bool samples_finite =
                    std::all_of(samples.begin(), samples.end(),
                                [](double v) { return std::isfinite(v); });
                if (samples_finite) {
                    GridFunction2D f(grid, std::move(samples));
                    if (i == 3)
                        entry.norm = mixed_norm(f, Axis::X, p);
                    else if (j == 3)
                        entry.norm = mixed_norm(f, Axis::Y, p);
                    else
                        entry.norm = lp_norm_2d(f, p);
                    entry.finite = std::isfinite(entry.norm);
                } else {
                    entry.error = "non-finite samples";
                }
            } catch (const EvalError& e) {
                entry.error = e.what();
            } catch (const std::invalid_argument& e) {
                entry.error = e.what();
            }
            if (!entry.finite) report.all_finite = false;
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

GridFunction2D apply_V33(const CoefficientField& a, const GridFunction2D& u) {
    StencilTable table(u.grid());
    return apply_V33(a, u, table);
}

GridFunction2D apply_V33(const CoefficientField& a, const GridFunction2D& u,
                         const StencilTable& table) {
    const Grid& grid = u.grid();
    GridFunction2D out = diff2d(u, 3, 3, table);  // a_{3,3} == 1

    for (int i = 0; i <= 3; ++i) {
        for (int j = 0; j <= 3; ++j) {
            if (i == 3 && j == 3) continue;
            if (!a.has(i, j)) continue;
            std::vector<double> coef;
            try {
                coef = a.sample(i, j, grid);
            } catch (const EvalError& e) {
                throw CoefficientError(i, j, e.what());
            }
            bool all_zero = true;
            for (double v : coef) {
                if (!std::isfinite(v))
                    throw CoefficientError(i, j, "non-finite samples");
                if (v != 0.0) all_zero = false;
            }
            if (all_zero) continue;
            const GridFunction2D d = diff2d(u, i, j, table);
            auto& acc = out.raw();
            for (std::size_t k = 0; k < coef.size(); ++k)
                acc[k] += coef[k] * d.samples()[k];
        }
    }
    return out;
}

}  // namespace ppbvp
