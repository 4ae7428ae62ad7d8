#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ppbvp/norms.hpp"

namespace ppbvp {

/// Failure while sampling a coefficient on the grid; `i`/`j` name the term.
class CoefficientError : public std::runtime_error {
public:
    CoefficientError(int i, int j, const std::string& msg)
        : std::runtime_error("coefficient a_{" + std::to_string(i) + "," +
                             std::to_string(j) + "}: " + msg),
          i_(i), j_(j) {}
    int i() const { return i_; }
    int j() const { return j_; }

private:
    int i_, j_;
};

/// The 16 coefficients a_{i,j}(x,y) of the operator
///   (V33 u)(x,y) = sum_{i,j=0..3} a_{i,j} D_x^i D_y^j u,
/// each given as an expression or as grid samples.  The principal coefficient
/// a_{3,3} is fixed to the constant 1 and cannot be set; absent coefficients
/// are zero.
class CoefficientField {
public:
    using Definition = std::variant<Expr, GridFunction2D>;

    CoefficientField() = default;

    void set(int i, int j, Expr e);
    void set(int i, int j, GridFunction2D samples);
    bool has(int i, int j) const;
    const Definition* definition(int i, int j) const;

    /// Samples of a_{i,j} at the grid nodes.  May contain non-finite values
    /// (the caller decides whether that is an error); throws EvalError on
    /// evaluation domain failures, and std::invalid_argument when sampled
    /// definitions live on a different grid.
    std::vector<double> sample(int i, int j, const Grid& grid) const;

private:
    std::optional<Definition> defs_[4][4];
    static void check_index(int i, int j);
};

/// Diagnostic for one coefficient against its required integrability class:
/// L_p for i,j <= 2, L_{inf,p} (sup in x) for a_{3,j}, L_{p,inf} (sup in y)
/// for a_{i,3}.
struct CoefficientClassEntry {
    int i, j;
    std::string required_class;
    double norm;        // NaN when evaluation failed
    bool finite;        // all samples and the norm finite
    std::string error;  // empty when evaluation succeeded
};

/// Report over the 15 free coefficients.  The report is purely diagnostic: a
/// grid cannot certify membership in L_p, so nothing here rejects a problem.
struct CoefficientClassReport {
    std::vector<CoefficientClassEntry> entries;
    bool all_finite;
};

CoefficientClassReport validate_coefficients(const CoefficientField& a,
                                             const Grid& grid, Exponent p);

/// Nodewise sum a_{i,j} * D_x^i D_y^j u over all 16 terms.  With every free
/// coefficient absent (or identically zero on the grid) the result is exactly
/// diff2d(u, 3, 3).  Throws CoefficientError when a coefficient fails to
/// evaluate or produces non-finite samples.
GridFunction2D apply_V33(const CoefficientField& a, const GridFunction2D& u);
GridFunction2D apply_V33(const CoefficientField& a, const GridFunction2D& u,
                         const StencilTable& table);

}  // namespace ppbvp
