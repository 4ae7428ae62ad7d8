#pragma once

#include "ppbvp/grid.hpp"

namespace ppbvp {

/// Integrability exponent: a real p >= 1 or infinity.
class Exponent {
public:
    explicit Exponent(double p);
    static Exponent inf();

    bool is_inf() const { return inf_; }
    double value() const { return p_; }  // only meaningful when finite

    std::string to_string() const;

private:
    Exponent() : p_(0.0), inf_(true) {}
    double p_;
    bool inf_;
};

/// (Integral_G |f|^p)^(1/p) by tensor-product trapezoid; max |sample| for p = inf.
double lp_norm_2d(const GridFunction2D& f, Exponent p);

/// 1-D counterpart on a grid line.
double lp_norm_1d(const GridFunction1D& g, Exponent p);

/// Mixed norm with the supremum taken along `sup_axis` and the p-quadrature
/// along the other axis.  sup_axis = X gives sup_x ||f(x,.)||_Lp(y) (the class
/// written L_{inf,p} with the first slot governing x); sup_axis = Y gives
/// || sup_y |f(.,y)| ||_Lp(x) (the class L_{p,inf}).
double mixed_norm(const GridFunction2D& f, Axis sup_axis, Exponent p);

/// Sum over j = 0..3 of ||D^j g||_Lp using the grid stencils.
double sobolev_norm_1d(const GridFunction1D& g, Exponent p);

/// Sum over i,j = 0..3 of ||D_x^i D_y^j u||_Lp(G): the 16-term isotropic norm.
double sobolev_norm_2d(const GridFunction2D& u, Exponent p);

}  // namespace ppbvp
