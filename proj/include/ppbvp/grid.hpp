#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ppbvp/expr.hpp"

namespace ppbvp {

/// The rectangle G = (0,h1) x (0,h2).
struct Rect {
    double h1;
    double h2;

    Rect(double h1_, double h2_);
};

enum class Axis { X, Y };

/// Uniform tensor grid on a Rect, endpoints included on both axes.
///
/// Node counts must be at least 9: the 5-point third-derivative closures plus
/// an interior collocation band need that many nodes per axis.
class Grid {
public:
    Grid(Rect rect, int nx, int ny);

    const Rect& rect() const { return rect_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double dx() const { return rect_.h1 / (nx_ - 1); }
    double dy() const { return rect_.h2 / (ny_ - 1); }
    double x(int i) const { return i * dx(); }
    double y(int j) const { return j * dy(); }

    int count(Axis a) const { return a == Axis::X ? nx_ : ny_; }
    double spacing(Axis a) const { return a == Axis::X ? dx() : dy(); }
    double extent(Axis a) const { return a == Axis::X ? rect_.h1 : rect_.h2; }
    double coord(Axis a, int i) const { return i * spacing(a); }

    bool same_layout(const Grid& o) const {
        return nx_ == o.nx_ && ny_ == o.ny_ &&
               rect_.h1 == o.rect_.h1 && rect_.h2 == o.rect_.h2;
    }

private:
    Rect rect_;
    int nx_;
    int ny_;
};

inline Grid make_grid(Rect rect, int nx, int ny) { return Grid(rect, nx, ny); }

/// Samples along one grid axis (a boundary trace or one-variable datum).
class GridFunction1D {
public:
    GridFunction1D(const Grid& grid, Axis axis);                        // zeros
    GridFunction1D(const Grid& grid, Axis axis, std::vector<double> v); // finite samples
    /// Sample an expression in the axis variable (x for Axis::X, y for
    /// Axis::Y); rejects expressions referencing the other variable.
    GridFunction1D(const Grid& grid, Axis axis, const Expr& e);
    /// Layout given directly (axis, node spacing, samples).
    GridFunction1D(Axis axis, double spacing, std::vector<double> v);

    Axis axis() const { return axis_; }
    int size() const { return static_cast<int>(v_.size()); }
    double spacing() const { return spacing_; }
    double extent() const { return spacing_ * (size() - 1); }
    double coord(int i) const { return i * spacing_; }

    double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }
    double front() const { return v_.front(); }
    double back() const { return v_.back(); }
    std::span<const double> samples() const { return v_; }

    bool same_layout(const GridFunction1D& o) const {
        return axis_ == o.axis_ && v_.size() == o.v_.size() && spacing_ == o.spacing_;
    }

private:
    Axis axis_;
    double spacing_;
    std::vector<double> v_;
    void validate() const;
};

/// Samples on the full grid, stored row-major by x-index:
/// sample(ix, iy) lives at index ix*ny + iy.
class GridFunction2D {
public:
    explicit GridFunction2D(const Grid& grid);                      // zeros
    GridFunction2D(const Grid& grid, std::vector<double> v);        // finite samples
    GridFunction2D(const Grid& grid, const Expr& e);                // sampled expression

    const Grid& grid() const { return grid_; }
    double at(int ix, int iy) const { return v_[index(ix, iy)]; }
    double& at(int ix, int iy) { return v_[index(ix, iy)]; }
    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(ix) * grid_.ny() + iy;
    }
    std::span<const double> samples() const { return v_; }
    std::vector<double>& raw() { return v_; }

    /// Extract the samples along one grid line (fixed index on the other axis).
    GridFunction1D line(Axis along, int fixed_index) const;

    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> v_;
    void validate() const;
};

/// Finite-difference weights for the k-th derivative at offset 0, on the
/// integer offsets given (unit spacing; scale by spacing^-k for a real grid).
/// Weights are generated by polynomial exactness: they reproduce d^k/dt^k of
/// t^0 .. t^(n-1) exactly, n = offsets.size() >= k+2.
std::vector<double> fd_weights(int order, std::span<const int> offsets);

/// Per-node derivative stencils for one axis: 5-point windows, centered where
/// possible and shifted one-sided near the ends, exact on degree <= 4.
class AxisStencils {
public:
    AxisStencils(int node_count, double spacing);

    int node_count() const { return n_; }

    struct Stencil {
        int first;                   // first node index touched
        std::span<const double> w;   // weights, already scaled by spacing^-k
    };
    /// Stencil for the k-th derivative (k in 1..3) at node i.
    Stencil at(int order, int i) const;

    /// Apply the k-th derivative to samples (order 0 copies).
    std::vector<double> apply(int order, std::span<const double> samples) const;
    /// Derivative of order k at a single node.
    double derivative_at(int order, std::span<const double> samples, int i) const;

private:
    int n_;
    double spacing_;
    // weights_[k-1] holds n_ stencils of width 5, contiguous.
    std::vector<double> weights_[3];
    std::vector<int> first_[3];
};

/// Stencil tables for both axes of a grid.
class StencilTable {
public:
    explicit StencilTable(const Grid& grid)
        : x_(grid.nx(), grid.dx()), y_(grid.ny(), grid.dy()) {}

    const AxisStencils& axis(Axis a) const { return a == Axis::X ? x_ : y_; }

private:
    AxisStencils x_;
    AxisStencils y_;
};

/// Mixed derivative D_x^i D_y^j f as a tensor-product stencil application;
/// i = j = 0 is the identity.  Exact on polynomials of degree <= 4 per axis.
GridFunction2D diff2d(const GridFunction2D& f, int i, int j);
GridFunction2D diff2d(const GridFunction2D& f, int i, int j, const StencilTable& table);

/// (1/2) * Integral_0^{t_m} (t_m - tau)^power Z(tau) dtau.
///
/// Product rule: the polynomial kernel is integrated exactly against the
/// piecewise-linear interpolant of the samples, so the result is exact when
/// Z is linear and O(h^2) accurate for smooth Z.
double kernel_integral(const GridFunction1D& z, int power, int upper);

/// CSV serialization: header "x,y,value", row-major by x-index, 17 significant
/// digits.
void write_csv(std::ostream& os, const GridFunction2D& f);
void write_csv(const std::string& path, const GridFunction2D& f);
GridFunction2D read_csv(std::istream& is, const Grid& grid);
GridFunction2D read_csv(const std::string& path, const Grid& grid);

}  // namespace ppbvp
