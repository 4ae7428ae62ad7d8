#include "ppbvp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ppbvp {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void check_finite(std::span<const double> v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x))
            throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

}  // namespace

Rect::Rect(double h1_, double h2_) : h1(h1_), h2(h2_) {
    require(h1 > 0.0 && h2 > 0.0, "Rect: extents must be positive");
}

Grid::Grid(Rect rect, int nx, int ny) : rect_(rect), nx_(nx), ny_(ny) {
    require(nx >= 9 && ny >= 9, "Grid: node counts must be at least 9");
}

GridFunction1D::GridFunction1D(const Grid& grid, Axis axis)
    : axis_(axis), spacing_(grid.spacing(axis)),
      v_(static_cast<std::size_t>(grid.count(axis)), 0.0) {}

GridFunction1D::GridFunction1D(const Grid& grid, Axis axis, std::vector<double> v)
    : axis_(axis), spacing_(grid.spacing(axis)), v_(std::move(v)) {
    require(static_cast<int>(v_.size()) == grid.count(axis),
            "GridFunction1D: sample count does not match the axis node count");
    validate();
}

GridFunction1D::GridFunction1D(const Grid& grid, Axis axis, const Expr& e)
    : axis_(axis), spacing_(grid.spacing(axis)) {
    const char other = axis == Axis::X ? 'y' : 'x';
    if (e.uses(other))
        throw std::invalid_argument(
            std::string("GridFunction1D: expression for the ") +
            (axis == Axis::X ? "x" : "y") + " axis references '" + other + "'");
    const int n = grid.count(axis);
    v_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = grid.coord(axis, i);
        v_[static_cast<std::size_t>(i)] =
            axis == Axis::X ? e.eval(t, 0.0) : e.eval(0.0, t);
    }
    validate();
}

GridFunction1D::GridFunction1D(Axis axis, double spacing, std::vector<double> v)
    : axis_(axis), spacing_(spacing), v_(std::move(v)) {
    require(spacing_ > 0.0, "GridFunction1D: spacing must be positive");
    require(v_.size() >= 9, "GridFunction1D: need at least 9 nodes");
    validate();
}

void GridFunction1D::validate() const { check_finite(v_, "GridFunction1D"); }

GridFunction2D::GridFunction2D(const Grid& grid)
    : grid_(grid),
      v_(static_cast<std::size_t>(grid.nx()) * grid.ny(), 0.0) {}

GridFunction2D::GridFunction2D(const Grid& grid, std::vector<double> v)
    : grid_(grid), v_(std::move(v)) {
    require(v_.size() == static_cast<std::size_t>(grid.nx()) * grid.ny(),
            "GridFunction2D: sample count does not match nx*ny");
    validate();
}

GridFunction2D::GridFunction2D(const Grid& grid, const Expr& e) : grid_(grid) {
    v_.resize(static_cast<std::size_t>(grid.nx()) * grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix)
        for (int iy = 0; iy < grid.ny(); ++iy)
            v_[index(ix, iy)] = e.eval(grid.x(ix), grid.y(iy));
    validate();
}

void GridFunction2D::validate() const { check_finite(v_, "GridFunction2D"); }

GridFunction1D GridFunction2D::line(Axis along, int fixed_index) const {
    const int n = grid_.count(along);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            along == Axis::X ? at(i, fixed_index) : at(fixed_index, i);
    return GridFunction1D(grid_, along, std::move(out));
}

double GridFunction2D::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> fd_weights(int order, std::span<const int> offsets) {
    const int n = static_cast<int>(offsets.size());
    require(order >= 1 && order <= 3, "fd_weights: order must be 1, 2 or 3");
    require(n >= order + 2, "fd_weights: need at least order+2 offsets");
    std::set<int> distinct(offsets.begin(), offsets.end());
    require(static_cast<int>(distinct.size()) == n, "fd_weights: repeated offsets");

    // Fornberg recurrence for the weights of d^order/dt^order at t = 0 on the
    // given nodes, run in extended precision.  These weights sit under an
    // h^-order scaling, so they need to be accurate to the last ulp.
    const int m = order;
    std::vector<long double> c(static_cast<std::size_t>(n) * (m + 1), 0.0L);
    auto C = [&](int i, int k) -> long double& {
        return c[static_cast<std::size_t>(i) * (m + 1) + k];
    };
    long double c1 = 1.0L;
    long double c4 = offsets[0];
    C(0, 0) = 1.0L;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        long double c2 = 1.0L;
        const long double c5 = c4;
        c4 = offsets[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) {
            const long double c3 =
                static_cast<long double>(offsets[static_cast<std::size_t>(i)]) -
                offsets[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }

    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = static_cast<double>(C(i, m));
    return w;
}

AxisStencils::AxisStencils(int node_count, double spacing)
    : n_(node_count), spacing_(spacing) {
    require(n_ >= 9, "AxisStencils: need at least 9 nodes");
    require(spacing_ > 0.0, "AxisStencils: spacing must be positive");
    constexpr int width = 5;
    for (int k = 1; k <= 3; ++k) {
        auto& wk = weights_[k - 1];
        auto& fk = first_[k - 1];
        wk.resize(static_cast<std::size_t>(n_) * width);
        fk.resize(static_cast<std::size_t>(n_));
        double scale = 1.0;
        for (int q = 0; q < k; ++q) scale /= spacing_;
        for (int i = 0; i < n_; ++i) {
            const int first = std::clamp(i - 2, 0, n_ - width);
            fk[static_cast<std::size_t>(i)] = first;
            int offs[width];
            for (int p = 0; p < width; ++p) offs[p] = first + p - i;
            auto w = fd_weights(k, std::span<const int>(offs, width));
            for (int p = 0; p < width; ++p)
                wk[static_cast<std::size_t>(i) * width + p] = w[static_cast<std::size_t>(p)] * scale;
        }
    }
}

AxisStencils::Stencil AxisStencils::at(int order, int i) const {
    require(order >= 1 && order <= 3, "AxisStencils: order must be 1, 2 or 3");
    require(i >= 0 && i < n_, "AxisStencils: node index out of range");
    constexpr int width = 5;
    const auto& wk = weights_[order - 1];
    return Stencil{first_[order - 1][static_cast<std::size_t>(i)],
                   std::span<const double>(wk.data() + static_cast<std::size_t>(i) * width, width)};
}

std::vector<double> AxisStencils::apply(int order, std::span<const double> samples) const {
    require(static_cast<int>(samples.size()) == n_, "AxisStencils: sample count mismatch");
    if (order == 0) return std::vector<double>(samples.begin(), samples.end());
    std::vector<double> out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        out[static_cast<std::size_t>(i)] = derivative_at(order, samples, i);
    return out;
}

double AxisStencils::derivative_at(int order, std::span<const double> samples, int i) const {
    require(static_cast<int>(samples.size()) == n_, "AxisStencils: sample count mismatch");
    if (order == 0) return samples[static_cast<std::size_t>(i)];
    const Stencil s = at(order, i);
    // Extended-precision accumulation: the h^-k weights make these sums badly
    // conditioned relative to the result.
    long double acc = 0.0L;
    for (std::size_t p = 0; p < s.w.size(); ++p)
        acc += static_cast<long double>(s.w[p]) * samples[static_cast<std::size_t>(s.first) + p];
    return static_cast<double>(acc);
}

GridFunction2D diff2d(const GridFunction2D& f, int i, int j) {
    StencilTable table(f.grid());
    return diff2d(f, i, j, table);
}

GridFunction2D diff2d(const GridFunction2D& f, int i, int j, const StencilTable& table) {
    require(i >= 0 && i <= 3 && j >= 0 && j <= 3, "diff2d: orders must be in 0..3");
    if (i == 0 && j == 0) return f;

    // Each pass accumulates in extended precision (the h^-k weights make the
    // sums badly conditioned), but the intermediate field stays in doubles so
    // that composing diff2d(.,i,0) and diff2d(.,0,j) is bitwise identical to
    // the single call.
    const Grid& g = f.grid();
    GridFunction2D out = f;

    if (i > 0) {
        const AxisStencils& sx = table.axis(Axis::X);
        GridFunction2D tmp(g);
        for (int iy = 0; iy < g.ny(); ++iy) {
            for (int ix = 0; ix < g.nx(); ++ix) {
                const auto s = sx.at(i, ix);
                long double acc = 0.0L;
                for (std::size_t p = 0; p < s.w.size(); ++p)
                    acc += static_cast<long double>(s.w[p]) *
                           out.at(s.first + static_cast<int>(p), iy);
                tmp.at(ix, iy) = static_cast<double>(acc);
            }
        }
        out = std::move(tmp);
    }
    if (j > 0) {
        const AxisStencils& sy = table.axis(Axis::Y);
        GridFunction2D tmp(g);
        for (int ix = 0; ix < g.nx(); ++ix) {
            for (int iy = 0; iy < g.ny(); ++iy) {
                const auto s = sy.at(j, iy);
                long double acc = 0.0L;
                for (std::size_t p = 0; p < s.w.size(); ++p)
                    acc += static_cast<long double>(s.w[p]) *
                           out.at(ix, s.first + static_cast<int>(p));
                tmp.at(ix, iy) = static_cast<double>(acc);
            }
        }
        out = std::move(tmp);
    }
    return out;
}

double kernel_integral(const GridFunction1D& z, int power, int upper) {
    require(power >= 0, "kernel_integral: power must be non-negative");
    require(upper >= 0 && upper < z.size(), "kernel_integral: upper node out of range");
    const double h = z.spacing();
    const double t = upper * h;
    double acc = 0.0;
    for (int k = 0; k < upper; ++k) {
        const double a = k * h;
        const double za = z[k];
        const double zb = z[k + 1];
        const double slope = (zb - za) / h;
        const double c0 = za + slope * (t - a);
        const double wa = t - a;
        const double wb = t - (a + h);
        double pa = wa, pb = wb;  // w^(power+1)
        for (int q = 0; q < power; ++q) {
            pa *= wa;
            pb *= wb;
        }
        acc += c0 * (pa - pb) / (power + 1);
        acc -= slope * (pa * wa - pb * wb) / (power + 2);
    }
    return 0.5 * acc;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& os, const GridFunction2D& f) {
    const Grid& g = f.grid();
    os << "x,y,value\n";
    for (int ix = 0; ix < g.nx(); ++ix)
        for (int iy = 0; iy < g.ny(); ++iy)
            os << fmt17(g.x(ix)) << ',' << fmt17(g.y(iy)) << ','
               << fmt17(f.at(ix, iy)) << '\n';
}

void write_csv(const std::string& path, const GridFunction2D& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(os, f);
}

GridFunction2D read_csv(std::istream& is, const Grid& grid) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("CSV: missing header");
    if (line.rfind("x,y,value", 0) != 0)
        throw std::runtime_error("CSV: expected header 'x,y,value'");
    std::vector<double> v(static_cast<std::size_t>(grid.nx()) * grid.ny());
    const double xtol = 1e-9 * std::max(1.0, grid.rect().h1);
    const double ytol = 1e-9 * std::max(1.0, grid.rect().h2);
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (row >= v.size()) throw std::runtime_error("CSV: more rows than grid nodes");
        double x = 0, y = 0, val = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &val) != 3)
            throw std::runtime_error("CSV: malformed row '" + line + "'");
        const int ix = static_cast<int>(row) / grid.ny();
        const int iy = static_cast<int>(row) % grid.ny();
        if (std::abs(x - grid.x(ix)) > xtol || std::abs(y - grid.y(iy)) > ytol)
            throw std::runtime_error("CSV: node coordinates do not match the grid");
        v[row] = val;
        ++row;
    }
    if (row != v.size()) throw std::runtime_error("CSV: fewer rows than grid nodes");
    return GridFunction2D(grid, std::move(v));
}

GridFunction2D read_csv(const std::string& path, const Grid& grid) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_csv(is, grid);
}

}  // namespace ppbvp
