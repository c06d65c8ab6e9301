#pragma once

#include "pvem/multiindex.hpp"
#include "pvem/quadrature.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace pvem {

/// Scaling data of the owning entity: monomials are powers of (x - center)/h.
struct ScaledFrame2D {
    std::array<double, 2> center{0.0, 0.0};
    double h = 1.0;
};

/// Bivariate polynomial in the scaled monomial basis M_deg of its frame,
/// coefficients in graded-lex multi-index order.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(ScaledFrame2D frame, int degree)
        : frame_(frame), degree_(degree),
          coeffs_(Eigen::VectorXd::Zero(poly_space_dim(degree)))
    {
    }
    Polynomial(ScaledFrame2D frame, int degree, Eigen::VectorXd coeffs);

    /// The j-th scaled monomial of the frame (unit coefficient).
    static Polynomial monomial(ScaledFrame2D frame, const MultiIndex& alpha);

    const ScaledFrame2D& frame() const { return frame_; }
    int degree() const { return degree_; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    Eigen::VectorXd& coeffs() { return coeffs_; }

    double evaluate(double x, double y) const;

    /// Exact partial derivative; each differentiation divides by h.
    Polynomial derive(const MultiIndex& alpha) const;

    /// (-Laplacian)^m applied exactly; the degree drops by 2m.
    Polynomial laplacian_power(int m) const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator*(double s) const;

    /// Coefficients reinterpreted in M_newdeg; requires that entries above
    /// the new dimension vanish (relative tolerance on the max coefficient).
    Eigen::VectorXd coeffs_truncated(int newdeg) const;

private:
    ScaledFrame2D frame_;
    int degree_ = -1;
    Eigen::VectorXd coeffs_;
};

/// Polynomial on an edge in the variable u = (s - s_mid)/|e|, u in [-1/2, 1/2];
/// coefficient i multiplies u^i, matching the edge's scaled monomials.
class Poly1D {
public:
    Poly1D() = default;
    explicit Poly1D(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)) {}
    static Poly1D zero() { return Poly1D(Eigen::VectorXd::Zero(1)); }

    int degree() const { return int(coeffs_.size()) - 1; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }

    double evaluate(double u) const;

    /// d/ds along an edge of the given length (chain rule through u).
    Poly1D derive_arclength(double edge_length) const;

    Poly1D operator+(const Poly1D& other) const;
    Poly1D operator*(double s) const;
    Poly1D operator*(const Poly1D& other) const;

    /// Truncation with vanishing-tail check, as for Polynomial.
    Eigen::VectorXd coeffs_truncated(int newdeg) const;

private:
    Eigen::VectorXd coeffs_ = Eigen::VectorXd::Zero(1);
};

/// Symmetric order-s tensor of polynomials, stored by the count of
/// 1-indices: comps[a] is the component with a indices equal to 1.
/// For grad_tensor(p, s), comps[a] = d^s p / dx^a dy^(s-a).
struct TensorPoly {
    int order = 0;
    std::vector<Polynomial> comps; // size order + 1

    /// Contraction with a constant vector; order drops by one.
    TensorPoly contract(const std::array<double, 2>& v) const;
};

struct TensorPoly1D {
    int order = 0;
    std::vector<Poly1D> comps;

    TensorPoly1D contract(const std::array<double, 2>& v) const;
    Poly1D contract_full(const std::array<double, 2>& v1, int n1,
                         const std::array<double, 2>& v2, int n2) const;
};

/// All s-th partials of p as a symmetric tensor.
TensorPoly grad_tensor(const Polynomial& p, int s);

/// Full contraction sum_{indices} tau : sigma with binomial multiplicities.
Polynomial tensor_contraction(const TensorPoly& a, const TensorPoly& b);

/// Exact integral of p over a simple ccw polygon (fan rule from centroid).
double integrate_polygon(const Polynomial& p,
                         const std::vector<std::array<double, 2>>& verts);

/// Exact integral of p*q over the polygon without forming the product.
double integrate_polygon_product(const Polynomial& p, const Polynomial& q,
                                 const std::vector<std::array<double, 2>>& verts);

/// Substitute the affine edge parameterization into p and re-expand in the
/// edge monomial u = (s - s_mid)/|e|. Endpoints a -> u=-1/2, b -> u=+1/2.
Poly1D restrict_to_edge(const Polynomial& p,
                        const std::array<double, 2>& a,
                        const std::array<double, 2>& b);

/// Integral of a Poly1D over an edge of the given length: |e| * int_{-1/2}^{1/2}.
double integrate_edge(const Poly1D& p, double edge_length);

/// Gram matrices of scaled monomials over the polygon (paper's RHS machinery):
/// Mbar (n_{m-1} square), Mtilde (n_{k-2m} square, empty when k < 2m),
/// M (n_{m-1} x n_k).
struct MassMatrices {
    Eigen::MatrixXd Mbar, Mtilde, M;
};
MassMatrices mass_matrices(const std::vector<std::array<double, 2>>& verts,
                           const ScaledFrame2D& frame, int m, int k);

} // namespace pvem
