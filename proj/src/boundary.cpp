#include "ppbvp/boundary.hpp"

#include <cmath>
#include <stdexcept>

namespace ppbvp {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ClassicalBoundaryData::ClassicalBoundaryData(GridFunction1D phi1_, GridFunction1D phi2_,
                                             GridFunction1D phi3_, GridFunction1D psi1_,
                                             GridFunction1D psi2_, GridFunction1D psi3_)
    : phi1(std::move(phi1_)), phi2(std::move(phi2_)), phi3(std::move(phi3_)),
      psi1(std::move(psi1_)), psi2(std::move(psi2_)), psi3(std::move(psi3_)) {
    require(phi1.axis() == Axis::Y && phi1.same_layout(phi2) && phi1.same_layout(phi3),
            "ClassicalBoundaryData: phi functions must share the y-axis layout");
    require(psi1.axis() == Axis::X && psi1.same_layout(psi2) && psi1.same_layout(psi3),
            "ClassicalBoundaryData: psi functions must share the x-axis layout");
}

NonClassicalBoundaryData::NonClassicalBoundaryData(
    double z00_, double z01_, double z02_, double z10_, double z11_, double z12_,
    double z20_, double z21_, double zh1_00_, double zh1_01_, double zh1_02_,
    double zh2_00_, double zh2_10_, double zh2_20_, GridFunction1D z03_,
    GridFunction1D z13_, GridFunction1D zh1_03_, GridFunction1D z30_,
    GridFunction1D z31_, GridFunction1D zh2_30_)
    : z00(z00_), z01(z01_), z02(z02_), z10(z10_), z11(z11_), z12(z12_),
      z20(z20_), z21(z21_), zh1_00(zh1_00_), zh1_01(zh1_01_), zh1_02(zh1_02_),
      zh2_00(zh2_00_), zh2_10(zh2_10_), zh2_20(zh2_20_),
      z03(std::move(z03_)), z13(std::move(z13_)), zh1_03(std::move(zh1_03_)),
      z30(std::move(z30_)), z31(std::move(z31_)), zh2_30(std::move(zh2_30_)) {
    for (double s : {z00, z01, z02, z10, z11, z12, z20, z21,
                     zh1_00, zh1_01, zh1_02, zh2_00, zh2_10, zh2_20})
        require(std::isfinite(s), "NonClassicalBoundaryData: non-finite scalar");
    require(z03.axis() == Axis::Y && z03.same_layout(z13) && z03.same_layout(zh1_03),
            "NonClassicalBoundaryData: y-traces must share the y-axis layout");
    require(z30.axis() == Axis::X && z30.same_layout(z31) && z30.same_layout(zh2_30),
            "NonClassicalBoundaryData: x-traces must share the x-axis layout");
}

NonClassicalBoundaryData NonClassicalBoundaryData::zeros(const Grid& grid) {
    GridFunction1D fy(grid, Axis::Y);
    GridFunction1D fx(grid, Axis::X);
    return NonClassicalBoundaryData(0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                                    fy, fy, fy, fx, fx, fx);
}

double AgreementReport::max_difference() const {
    double m = 0.0;
    for (const auto& c : conditions) m = std::max(m, c.difference);
    return m;
}

AgreementReport agreement_check(const ClassicalBoundaryData& c, double tol) {
    require(tol > 0.0, "agreement_check: tol must be positive");

    AxisStencils sy(c.phi1.size(), c.phi1.spacing());
    AxisStencils sx(c.psi1.size(), c.psi1.spacing());
    const int lastx = c.psi1.size() - 1;
    const int lasty = c.phi1.size() - 1;

    auto d_at = [](const AxisStencils& s, const GridFunction1D& g, int node) {
        return s.derivative_at(1, g.samples(), node);
    };

    AgreementReport r;
    r.tol = tol;
    auto set = [&](int idx, const char* name, double lhs, double rhs) {
        r.conditions[static_cast<std::size_t>(idx)] =
            AgreementResidual{name, lhs, rhs, std::abs(lhs - rhs)};
    };
    set(0, "phi1(h2)=psi2(0)", c.phi1.back(), c.psi2.front());
    set(1, "phi3(0)=psi1'(0)", c.phi3.front(), d_at(sx, c.psi1, 0));
    set(2, "phi1(0)=psi1(0)", c.phi1.front(), c.psi1.front());
    set(3, "phi3(h2)=psi2'(0)", c.phi3.back(), d_at(sx, c.psi2, 0));
    set(4, "psi1(h1)=phi2(0)", c.psi1.back(), c.phi2.front());
    set(5, "phi3'(0)=psi3'(0)", d_at(sy, c.phi3, 0), d_at(sx, c.psi3, 0));
    set(6, "phi2(h2)=psi2(h1)", c.phi2.back(), c.psi2[lastx]);
    set(7, "psi3(0)=phi1'(0)", c.psi3.front(), d_at(sy, c.phi1, 0));
    set(8, "psi3(h1)=phi2'(0)", c.psi3[lastx], d_at(sy, c.phi2, 0));
    (void)lasty;

    r.pass = true;
    for (const auto& cond : r.conditions)
        if (cond.difference > tol) r.pass = false;
    return r;
}

NonClassicalBoundaryData classical_to_nonclassical(const ClassicalBoundaryData& c,
                                                   std::vector<DualSourceEntry>* dual) {
    AxisStencils sy(c.phi1.size(), c.phi1.spacing());
    AxisStencils sx(c.psi1.size(), c.psi1.spacing());
    const int lastx = c.psi1.size() - 1;

    auto dy = [&](const GridFunction1D& g, int order, int node) {
        return sy.derivative_at(order, g.samples(), node);
    };
    auto dx = [&](const GridFunction1D& g, int order, int node) {
        return sx.derivative_at(order, g.samples(), node);
    };
    auto trace = [](const AxisStencils& s, const GridFunction1D& g) {
        GridFunction1D out = g;
        auto d = s.apply(3, g.samples());
        for (int i = 0; i < g.size(); ++i) out[i] = d[static_cast<std::size_t>(i)];
        return out;
    };

    const double z00 = c.phi1.front();
    const double z01 = dy(c.phi1, 1, 0);
    const double z02 = dy(c.phi1, 2, 0);
    const double z10 = c.phi3.front();
    const double z11 = dy(c.phi3, 1, 0);
    const double z12 = dy(c.phi3, 2, 0);
    const double z20 = dx(c.psi1, 2, 0);
    const double z21 = dx(c.psi3, 2, 0);
    const double zh1_00 = c.phi2.front();
    const double zh1_01 = dy(c.phi2, 1, 0);
    const double zh1_02 = dy(c.phi2, 2, 0);
    const double zh2_00 = c.psi2.front();
    const double zh2_10 = dx(c.psi2, 1, 0);
    const double zh2_20 = dx(c.psi2, 2, 0);

    if (dual) {
        dual->clear();
        auto entry = [&](const char* name, double used, double alternate) {
            dual->push_back(DualSourceEntry{name, used, alternate, std::abs(used - alternate)});
        };
        entry("z00: phi1(0) | psi1(0)", z00, c.psi1.front());
        entry("z01: phi1'(0) | psi3(0)", z01, c.psi3.front());
        entry("z10: phi3(0) | psi1'(0)", z10, dx(c.psi1, 1, 0));
        entry("z11: phi3'(0) | psi3'(0)", z11, dx(c.psi3, 1, 0));
        entry("zh1_00: phi2(0) | psi1(h1)", zh1_00, c.psi1[lastx]);
        entry("zh1_01: phi2'(0) | psi3(h1)", zh1_01, c.psi3[lastx]);
        entry("zh2_00: psi2(0) | phi1(h2)", zh2_00, c.phi1.back());
        entry("zh2_10: psi2'(0) | phi3(h2)", zh2_10, c.phi3.back());
    }

    return NonClassicalBoundaryData(z00, z01, z02, z10, z11, z12, z20, z21,
                                    zh1_00, zh1_01, zh1_02, zh2_00, zh2_10, zh2_20,
                                    trace(sy, c.phi1), trace(sy, c.phi3), trace(sy, c.phi2),
                                    trace(sx, c.psi1), trace(sx, c.psi3), trace(sx, c.psi2));
}

namespace {

// value + t*d1 + t^2/2*d2 + (1/2) Int_0^t (t-tau)^2 trace(tau) dtau, per node.
GridFunction1D taylor_reconstruct(double value, double d1, double d2,
                                  const GridFunction1D& trace) {
    GridFunction1D out = trace;
    for (int m = 0; m < trace.size(); ++m) {
        const double t = trace.coord(m);
        out[m] = value + t * d1 + 0.5 * t * t * d2 + kernel_integral(trace, 2, m);
    }
    return out;
}

}  // namespace

ClassicalBoundaryData nonclassical_to_classical(const NonClassicalBoundaryData& z) {
    return ClassicalBoundaryData(
        taylor_reconstruct(z.z00, z.z01, z.z02, z.z03),
        taylor_reconstruct(z.zh1_00, z.zh1_01, z.zh1_02, z.zh1_03),
        taylor_reconstruct(z.z10, z.z11, z.z12, z.z13),
        taylor_reconstruct(z.z00, z.z10, z.z20, z.z30),
        taylor_reconstruct(z.zh2_00, z.zh2_10, z.zh2_20, z.zh2_30),
        taylor_reconstruct(z.z01, z.z11, z.z21, z.z31));
}

std::pair<ClassicalBoundaryData, NonClassicalBoundaryData>
traces_from_solution(const GridFunction2D& u) {
    const Grid& g = u.grid();
    StencilTable table(g);
    const int lx = g.nx() - 1;
    const int ly = g.ny() - 1;

    const GridFunction2D d01 = diff2d(u, 0, 1, table);
    const GridFunction2D d02 = diff2d(u, 0, 2, table);
    const GridFunction2D d03 = diff2d(u, 0, 3, table);
    const GridFunction2D d10 = diff2d(u, 1, 0, table);
    const GridFunction2D d11 = diff2d(u, 1, 1, table);
    const GridFunction2D d12 = diff2d(u, 1, 2, table);
    const GridFunction2D d13 = diff2d(u, 1, 3, table);
    const GridFunction2D d20 = diff2d(u, 2, 0, table);
    const GridFunction2D d21 = diff2d(u, 2, 1, table);
    const GridFunction2D d30 = diff2d(u, 3, 0, table);
    const GridFunction2D d31 = diff2d(u, 3, 1, table);

    ClassicalBoundaryData classical(
        u.line(Axis::Y, 0), u.line(Axis::Y, lx), d10.line(Axis::Y, 0),
        u.line(Axis::X, 0), u.line(Axis::X, ly), d01.line(Axis::X, 0));

    NonClassicalBoundaryData nonclassical(
        u.at(0, 0), d01.at(0, 0), d02.at(0, 0),
        d10.at(0, 0), d11.at(0, 0), d12.at(0, 0),
        d20.at(0, 0), d21.at(0, 0),
        u.at(lx, 0), d01.at(lx, 0), d02.at(lx, 0),
        u.at(0, ly), d10.at(0, ly), d20.at(0, ly),
        d03.line(Axis::Y, 0), d13.line(Axis::Y, 0), d03.line(Axis::Y, lx),
        d30.line(Axis::X, 0), d31.line(Axis::X, 0), d30.line(Axis::X, ly));

    return {std::move(classical), std::move(nonclassical)};
}

}  // namespace ppbvp
