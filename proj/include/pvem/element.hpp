#pragma once

#include "pvem/dof.hpp"
#include "pvem/green.hpp"
#include "pvem/poly.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>

namespace pvem {

/// Scalar field with partial-derivative callbacks deriv(ax, ay, x, y) up to
/// max_order. Polynomial fields carry the exact degree so quadrature stays
/// exact; analytic fields use high-order rules.
struct ScalarField {
    std::function<double(int, int, double, double)> deriv;
    int max_order = 0;
    int poly_degree = -1; // -1: not a polynomial
    std::string name;

    double value(double x, double y) const { return deriv(0, 0, x, y); }

    static ScalarField from_polynomial(const Polynomial& p, const std::string& name = "");
    static ScalarField zero();
};

/// The element matrix bundle of one cell in the canonical dof and monomial
/// orderings. Pi solves G Pi = B; A = Pi^T [0,0;0,G22] Pi + (I-D Pi)^T S (I-D Pi).
struct ElementMatrices {
    Eigen::MatrixXd D;   // N_K x n_k
    Eigen::MatrixXd B;   // n_k x N_K
    Eigen::MatrixXd G;   // n_k x n_k
    Eigen::MatrixXd G22; // (n_k - n_{m-1}) square block, direct quadrature
    Eigen::MatrixXd Pi;  // n_k x N_K
    Eigen::VectorXd S;   // diagonal of the stabilization scaling
    Eigen::MatrixXd A;   // N_K x N_K
    Eigen::VectorXd b;   // N_K
};

DofLayout dof_layout(const ElementGeometry& geo, int m, int k);

/// Local dof vector of a field: vertex derivative values scaled by h_K^j,
/// edge normal-derivative moments in the global frame, interior moments.
Eigen::VectorXd dof_evaluate(const ElementGeometry& geo, const DofLayout& layout,
                             const ScalarField& field);
Eigen::VectorXd dof_evaluate(const ElementGeometry& geo, const DofLayout& layout,
                             const Polynomial& p);

ElementMatrices element_matrices(const ElementGeometry& geo, int m, int k,
                                 const std::optional<ScalarField>& f = std::nullopt);

/// Pi^K applied to a dof vector, as a degree-k polynomial in the cell frame.
Polynomial project(const ElementGeometry& geo, const DofLayout& layout,
                   const Eigen::MatrixXd& Pi, const Eigen::VectorXd& dofs);

struct SerendipityResult {
    int rank = 0;
    bool satisfied = false;
};

/// Rank of [chi_{sigma(i)}(m_j)] over P_{k_s}: the assumption (S) check for
/// the reduced dof set.
SerendipityResult serendipity_check(const ElementGeometry& geo, int m, int k, int k_s,
                                    const std::vector<int>& selected_dofs);

/// Row-major JSON dump of {D, B, G, Pi, A, b} for differential testing.
std::string dump_element_json(const ElementMatrices& em);

} // namespace pvem
