#pragma once

#include "pvem/dof.hpp"
#include "pvem/poly.hpp"

#include <Eigen/Dense>

namespace pvem {

/// A functional on the element's dof space: apply to a dof vector with dot().
struct LinearFunctional {
    Eigen::VectorXd coeffs;

    double apply(const Eigen::VectorXd& dofs) const { return coeffs.dot(dofs); }
    LinearFunctional& operator+=(const LinearFunctional& o)
    {
        coeffs += o.coeffs;
        return *this;
    }
};

/// Coefficient tensor of an edge pairing (tau, grad^i v)_e: a symmetric
/// order-i tensor of 1D polynomials on the edge, Cartesian components.
struct EdgePairing {
    int edge_loc = 0;
    TensorPoly1D tau;
};

/// Functional c with c . chi(v) = (tau, grad^i v)_e, assembled by recursive
/// integration by parts along the edge: edge-moment dofs of the normal
/// derivatives plus endpoint vertex-derivative dofs.
LinearFunctional reduce_edge_pairing(const EdgePairing& ep, const ElementGeometry& geo,
                                     const DofLayout& layout);

/// Functional c with c . chi(v) = (grad^m p, grad^m v)_K for all v in the
/// virtual space: interior moments of (-Lap)^m p plus edge reductions of
/// the flux tensors (div^{m-1-i} grad^m p) . nu_{K,e}.
LinearFunctional pairing_functional(const Polynomial& p, const ElementGeometry& geo,
                                    const DofLayout& layout);

/// The n_{m-1} pinning constraints of the projector as rows over the dofs:
/// block 1: components of sum_delta grad^j v(delta), j = 0..m-2;
/// block 2: components of sum_e Q_0^e(grad^{m-1} v).
Eigen::MatrixXd constraint_functionals(const ElementGeometry& geo, int m,
                                       const DofLayout& layout);

/// The same constraints evaluated directly on a polynomial (bypassing the
/// dofs); used for the top rows of G.
Eigen::VectorXd constraint_values_on_poly(const ElementGeometry& geo, int m,
                                          const Polynomial& p);

/// Coefficients w_c with (v1 . grad)^{n1} (v2 . grad)^{n2} =
/// sum_c w_c d_x^{n1+n2-c} d_y^c; c indexes the d_y count.
Eigen::VectorXd direction_symbol(const std::array<double, 2>& v1, int n1,
                                 const std::array<double, 2>& v2, int n2);

} // namespace pvem
