#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ppbvp/grid.hpp"

namespace ppbvp {

/// The six boundary functions of the classical conditions: values of u on all
/// four edges plus the normal derivatives u_x at x = 0 and u_y at y = 0.
///
///   phi1(y) = u(0, y)    phi2(y) = u(h1, y)    phi3(y) = u_x(0, y)
///   psi1(x) = u(x, 0)    psi2(x) = u(x, h2)    psi3(x) = u_y(x, 0)
struct ClassicalBoundaryData {
    GridFunction1D phi1, phi2, phi3;  // y-axis
    GridFunction1D psi1, psi2, psi3;  // x-axis

    ClassicalBoundaryData(GridFunction1D phi1_, GridFunction1D phi2_, GridFunction1D phi3_,
                          GridFunction1D psi1_, GridFunction1D psi2_, GridFunction1D psi3_);
};

/// The non-classical data: 14 corner derivative values and 6 edge derivative
/// traces.  Scalar names encode the derivative orders; the h1/h2 blocks carry
/// the data attached to the corners (h1, 0) and (0, h2).
///
///   z_ij      = D_x^i D_y^j u(0, 0)      (z00 z01 z02 z10 z11 z12 z20 z21)
///   zh1_0j    = D_y^j u(h1, 0)           (zh1_00 zh1_01 zh1_02)
///   zh2_i0    = D_x^i u(0, h2)           (zh2_00 zh2_10 zh2_20)
///   z03(y)    = D_y^3 u(0, y)            z13(y)    = D_x D_y^3 u(0, y)
///   zh1_03(y) = D_y^3 u(h1, y)           z30(x)    = D_x^3 u(x, 0)
///   z31(x)    = D_x^3 D_y u(x, 0)        zh2_30(x) = D_x^3 u(x, h2)
struct NonClassicalBoundaryData {
    double z00, z01, z02;
    double z10, z11, z12;
    double z20, z21;
    double zh1_00, zh1_01, zh1_02;
    double zh2_00, zh2_10, zh2_20;

    GridFunction1D z03, z13, zh1_03;   // y-axis traces
    GridFunction1D z30, z31, zh2_30;   // x-axis traces

    NonClassicalBoundaryData(double z00_, double z01_, double z02_,
                             double z10_, double z11_, double z12_,
                             double z20_, double z21_,
                             double zh1_00_, double zh1_01_, double zh1_02_,
                             double zh2_00_, double zh2_10_, double zh2_20_,
                             GridFunction1D z03_, GridFunction1D z13_, GridFunction1D zh1_03_,
                             GridFunction1D z30_, GridFunction1D z31_, GridFunction1D zh2_30_);

    /// All-zero data on the axes of a grid.
    static NonClassicalBoundaryData zeros(const Grid& grid);
};

/// One corner equality of the agreement conditions, with both sides and the
/// absolute mismatch.
struct AgreementResidual {
    std::string name;
    double lhs;
    double rhs;
    double difference;  // |lhs - rhs|
};

/// The nine agreement residuals; pass iff every difference is within tol.
struct AgreementReport {
    std::array<AgreementResidual, 9> conditions;
    double tol;
    bool pass;

    double max_difference() const;
};

/// Evaluate the nine corner agreement conditions.  Derivative-bearing sides
/// are computed with the one-sided endpoint stencils, so the residuals of
/// smooth compatible data are O(h^2) rather than exactly zero.
AgreementReport agreement_check(const ClassicalBoundaryData& c, double tol);

/// Discrepancy between the two sources the extraction equalities give for a
/// scalar (e.g. z00 = phi1(0) = psi1(0)); the first source is the one used.
struct DualSourceEntry {
    std::string name;
    double used;
    double alternate;
    double difference;
};

/// Extract the non-classical data from classical data: corner values and
/// endpoint derivatives for the 14 scalars, third-derivative traces of the
/// six functions for the trace data.  When the extraction offers two sources
/// the first is used; `dual` (if non-null) receives all eight discrepancies.
NonClassicalBoundaryData classical_to_nonclassical(const ClassicalBoundaryData& c,
                                                   std::vector<DualSourceEntry>* dual = nullptr);

/// Rebuild the classical data from non-classical data by the Taylor-remainder
/// formulas: value + t*(first) + t^2/2*(second) + (1/2) Int (t-tau)^2 trace.
ClassicalBoundaryData nonclassical_to_classical(const NonClassicalBoundaryData& z);

/// Read both data sets off a 2-D solution: classical traces from boundary
/// lines, non-classical data from stencil derivatives on lines and corners.
std::pair<ClassicalBoundaryData, NonClassicalBoundaryData>
traces_from_solution(const GridFunction2D& u);

}  // namespace ppbvp
