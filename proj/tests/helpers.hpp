#pragma once

// Shared test utilities: polynomial oracles independent of the library's
// stencil path, and random boundary-data generators.

#include <algorithm>
#include <random>
#include <vector>

#include "ppbvp/boundary.hpp"
#include "ppbvp/grid.hpp"

namespace testutil {

/// Dense bivariate polynomial sum c[a][b] x^a y^b with exact evaluation and
/// differentiation; the independent oracle for stencil and operator tests.
struct Poly2 {
    std::vector<std::vector<double>> c;  // c[a][b]

    static Poly2 monomial(int a, int b, double coef = 1.0) {
        Poly2 p;
        p.c.assign(a + 1, std::vector<double>(b + 1, 0.0));
        p.c[a][b] = coef;
        return p;
    }

    static Poly2 random(std::mt19937& rng, int deg_x, int deg_y) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Poly2 p;
        p.c.assign(deg_x + 1, std::vector<double>(deg_y + 1, 0.0));
        for (auto& row : p.c)
            for (auto& v : row) v = u(rng);
        return p;
    }

    double eval(double x, double y) const {
        // Horner in x of Horner-in-y rows.
        double acc = 0.0;
        for (std::size_t a = c.size(); a-- > 0;) {
            double row = 0.0;
            for (std::size_t b = c[a].size(); b-- > 0;) row = row * y + c[a][b];
            acc = acc * x + row;
        }
        return acc;
    }

    Poly2 derivative(int i, int j) const {
        Poly2 d = *this;
        for (int k = 0; k < i; ++k) d = d.ddx();
        for (int k = 0; k < j; ++k) d = d.ddy();
        return d;
    }

    Poly2 ddx() const {
        Poly2 d;
        if (c.size() <= 1) {
            d.c.assign(1, std::vector<double>(1, 0.0));
            return d;
        }
        d.c.assign(c.size() - 1, {});
        for (std::size_t a = 1; a < c.size(); ++a) {
            d.c[a - 1] = c[a];
            for (auto& v : d.c[a - 1]) v *= static_cast<double>(a);
        }
        return d;
    }

    Poly2 ddy() const {
        Poly2 d = *this;
        for (auto& row : d.c) {
            if (row.size() <= 1) {
                row.assign(1, 0.0);
                continue;
            }
            std::vector<double> out(row.size() - 1);
            for (std::size_t b = 1; b < row.size(); ++b)
                out[b - 1] = row[b] * static_cast<double>(b);
            row = std::move(out);
        }
        return d;
    }
};

inline ppbvp::GridFunction2D sample(const Poly2& p, const ppbvp::Grid& g) {
    std::vector<double> v(static_cast<std::size_t>(g.nx()) * g.ny());
    for (int ix = 0; ix < g.nx(); ++ix)
        for (int iy = 0; iy < g.ny(); ++iy)
            v[static_cast<std::size_t>(ix) * g.ny() + iy] = p.eval(g.x(ix), g.y(iy));
    return ppbvp::GridFunction2D(g, std::move(v));
}

enum class TraceStyle {
    GridNoise,  // independent uniform value at every grid node
    Segments    // piecewise linear through ~6 random breakpoints
};

inline ppbvp::GridFunction1D random_trace(std::mt19937& rng, const ppbvp::Grid& g,
                                          ppbvp::Axis axis, TraceStyle style) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = g.count(axis);
    std::vector<double> v(static_cast<std::size_t>(n));
    if (style == TraceStyle::GridNoise) {
        for (auto& x : v) x = u(rng);
        return ppbvp::GridFunction1D(g, axis, std::move(v));
    }
    // Interior breakpoints only: the trace stays linear near the endpoints,
    // where the agreement check differentiates with endpoint stencils, and
    // kinks land in the middle where only the kernel quadrature sees them.
    const double len = g.extent(axis);
    std::uniform_real_distribution<double> pos(0.15 * len, 0.85 * len);
    std::vector<double> knots{0.0, len};
    for (int k = 0; k < 5; ++k) knots.push_back(pos(rng));
    std::sort(knots.begin(), knots.end());
    std::vector<double> vals(knots.size());
    for (auto& x : vals) x = u(rng);
    for (int i = 0; i < n; ++i) {
        const double t = g.coord(axis, i);
        auto hi = std::upper_bound(knots.begin(), knots.end(), t);
        if (hi == knots.begin()) ++hi;
        if (hi == knots.end()) --hi;
        const std::size_t k = static_cast<std::size_t>(hi - knots.begin());
        const double t0 = knots[k - 1], t1 = knots[k];
        const double w = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
        v[static_cast<std::size_t>(i)] = vals[k - 1] + w * (vals[k] - vals[k - 1]);
    }
    return ppbvp::GridFunction1D(g, axis, std::move(v));
}

/// Random non-classical data of an actual solution class: the origin scalars
/// and the six traces are free, and the five far-corner scalars are derived
/// through the same discrete Taylor-remainder relations the reconstruction
/// uses, so the data set is consistent in the sense the equivalence needs.
inline ppbvp::NonClassicalBoundaryData
random_consistent_nonclassical(std::mt19937& rng, const ppbvp::Grid& g, TraceStyle style) {
    using ppbvp::Axis;
    using ppbvp::kernel_integral;
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    auto z03 = random_trace(rng, g, Axis::Y, style);
    auto z13 = random_trace(rng, g, Axis::Y, style);
    auto zh1_03 = random_trace(rng, g, Axis::Y, style);
    auto z30 = random_trace(rng, g, Axis::X, style);
    auto z31 = random_trace(rng, g, Axis::X, style);
    auto zh2_30 = random_trace(rng, g, Axis::X, style);

    const double z00 = u(rng), z01 = u(rng), z02 = u(rng);
    const double z10 = u(rng), z11 = u(rng), z12 = u(rng);
    const double z20 = u(rng), z21 = u(rng);
    const double zh1_02 = u(rng);

    const double h1 = g.rect().h1, h2 = g.rect().h2;
    const int lx = g.nx() - 1, ly = g.ny() - 1;

    const double zh1_00 = z00 + h1 * z10 + 0.5 * h1 * h1 * z20 + kernel_integral(z30, 2, lx);
    const double zh1_01 = z01 + h1 * z11 + 0.5 * h1 * h1 * z21 + kernel_integral(z31, 2, lx);
    const double zh2_00 = z00 + h2 * z01 + 0.5 * h2 * h2 * z02 + kernel_integral(z03, 2, ly);
    const double zh2_10 = z10 + h2 * z11 + 0.5 * h2 * h2 * z12 + kernel_integral(z13, 2, ly);
    const double phi2_h2 =
        zh1_00 + h2 * zh1_01 + 0.5 * h2 * h2 * zh1_02 + kernel_integral(zh1_03, 2, ly);
    const double zh2_20 = 2.0 / (h1 * h1) *
        (phi2_h2 - zh2_00 - h1 * zh2_10 - kernel_integral(zh2_30, 2, lx));

    return ppbvp::NonClassicalBoundaryData(
        z00, z01, z02, z10, z11, z12, z20, z21,
        zh1_00, zh1_01, zh1_02, zh2_00, zh2_10, zh2_20,
        std::move(z03), std::move(z13), std::move(zh1_03),
        std::move(z30), std::move(z31), std::move(zh2_30));
}

inline double data_magnitude(const ppbvp::NonClassicalBoundaryData& z) {
    double m = 0.0;
    for (double s : {z.z00, z.z01, z.z02, z.z10, z.z11, z.z12, z.z20, z.z21,
                     z.zh1_00, z.zh1_01, z.zh1_02, z.zh2_00, z.zh2_10, z.zh2_20})
        m = std::max(m, std::abs(s));
    for (const auto* t : {&z.z03, &z.z13, &z.zh1_03, &z.z30, &z.z31, &z.zh2_30})
        for (int i = 0; i < t->size(); ++i) m = std::max(m, std::abs((*t)[i]));
    return m;
}

inline double sup_diff(const ppbvp::GridFunction1D& a, const ppbvp::GridFunction1D& b) {
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double sup_diff(const ppbvp::GridFunction2D& a, const ppbvp::GridFunction2D& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.samples().size(); ++k)
        m = std::max(m, std::abs(a.samples()[k] - b.samples()[k]));
    return m;
}

}  // namespace testutil
