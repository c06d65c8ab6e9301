#include "pvem/element.hpp"
#include "pvem/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pvem {

ScalarField ScalarField::from_polynomial(const Polynomial& p, const std::string& name)
{
    ScalarField f;
    f.deriv = [p](int ax, int ay, double x, double y) {
        return p.derive({ax, ay}).evaluate(x, y);
    };
    f.max_order = 1000;
    f.poly_degree = p.degree();
    f.name = name;
    return f;
}

ScalarField ScalarField::zero()
{
    ScalarField f;
    f.deriv = [](int, int, double, double) { return 0.0; };
    f.max_order = 1000;
    f.poly_degree = 0;
    f.name = "zero";
    return f;
}

DofLayout dof_layout(const ElementGeometry& geo, int m, int k)
{
    return DofLayout(geo, m, k);
}

namespace {

constexpr int kAnalyticEdgePoints = 16; // Gauss, exactness 31 > 20
constexpr int kAnalyticVolumeDegree = 20;

/// Normal derivative d^a f / dnu^a at a point, from Cartesian partials.
double normal_derivative(const ScalarField& f, const std::array<double, 2>& nu,
                         int a, double x, double y)
{
    double s = 0.0;
    for (int c = 0; c <= a; ++c)
        s += binomial(a, c) * std::pow(nu[0], a - c) * std::pow(nu[1], c) *
             f.deriv(a - c, c, x, y);
    return s;
}

/// Solve G X = B by partial-pivot LU with power-of-two row/column equilibration
/// (exact rescaling, no rounding) and iterative refinement with long double
/// residuals.  High-degree monomial bases on anisotropic cells make G badly
/// conditioned; the plain solve loses too many digits for the projector
/// identities Pi*D = I and rank(A) = N - dim P_{m-1} to hold at tolerance.
Eigen::MatrixXd solve_equilibrated(const Eigen::MatrixXd& G, const Eigen::MatrixXd& B)
{
    const int n = int(G.rows());
    auto pow2_inv = [](double v) {
        if (v <= 0.0)
            return 1.0;
        int e;
        std::frexp(v, &e);
        return std::ldexp(1.0, -e);
    };
    Eigen::VectorXd rs(n), cs(n);
    for (int i = 0; i < n; ++i)
        rs[i] = pow2_inv(G.row(i).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd Gr = rs.asDiagonal() * G;
    for (int j = 0; j < n; ++j)
        cs[j] = pow2_inv(Gr.col(j).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd Gs = Gr * cs.asDiagonal();

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Gs);
    if (std::abs(lu.determinant()) == 0.0)
        throw std::runtime_error("singular projector system (degenerate cell geometry?)");

    Eigen::MatrixXd X = cs.asDiagonal() * lu.solve(rs.asDiagonal() * B).eval();
    Eigen::MatrixXd R(n, int(B.cols()));
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 6; ++it) {
        for (int j = 0; j < R.cols(); ++j)
            for (int i = 0; i < n; ++i) {
                long double acc = B(i, j);
                for (int l = 0; l < n; ++l)
                    acc -= static_cast<long double>(G(i, l)) * X(l, j);
                R(i, j) = double(acc);
            }
        const double rn = R.cwiseAbs().maxCoeff();
        if (rn == 0.0 || rn >= 0.5 * prev)
            break;
        prev = rn;
        X += cs.asDiagonal() * lu.solve(rs.asDiagonal() * R).eval();
    }
    return X;
}

} // namespace

Eigen::VectorXd dof_evaluate(const ElementGeometry& geo, const DofLayout& layout,
                             const ScalarField& field)
{
    const int m = layout.m();
    const int k = layout.k();
    const double hK = geo.diameter;
    const int nv = geo.num_vertices();
    Eigen::VectorXd dofs = Eigen::VectorXd::Zero(layout.size());

    for (int v = 0; v < nv; ++v)
        for (int j = 0; j <= m - 2; ++j)
            for (int c = 0; c <= j; ++c)
                dofs[layout.vertex_dof(v, j, c)] =
                    std::pow(hK, j) * field.deriv(j - c, c, geo.verts[v][0], geo.verts[v][1]);

    for (int eloc = 0; eloc < nv; ++eloc) {
        const EdgeFrame& fr = geo.edge_frames[eloc];
        const int sv = geo.edge_start_loc[eloc];
        const int ev = geo.edge_signs[eloc] > 0 ? (sv + 1) % nv : (sv + nv - 1) % nv;
        const auto& pa = geo.verts[sv];
        const auto& pb = geo.verts[ev];
        for (int a = 0; a <= m - 1; ++a) {
            const int momdeg = layout.edge_moment_degree(a);
            if (momdeg < 0)
                continue;
            int npts = kAnalyticEdgePoints;
            if (field.poly_degree >= 0)
                npts = std::max(npts, (field.poly_degree + momdeg) / 2 + 1);
            const auto rule = gauss_legendre(npts);
            for (int q = 0; q <= momdeg; ++q) {
                double integral = 0.0; // in du over [-1/2, 1/2]
                for (const auto& gp : rule) {
                    const double u = 0.5 * gp.t; // map [-1,1] -> [-1/2,1/2]
                    const double x = pa[0] + (u + 0.5) * (pb[0] - pa[0]);
                    const double y = pa[1] + (u + 0.5) * (pb[1] - pa[1]);
                    integral += 0.5 * gp.w *
                                normal_derivative(field, fr.normal, a, x, y) *
                                std::pow(u, q);
                }
                // |e|^{a-1} * integral over arclength (ds = |e| du).
                dofs[layout.edge_dof(eloc, a, q)] = std::pow(fr.length, a) * integral;
            }
        }
    }

    if (k - 2 * m >= 0) {
        const int deg = field.poly_degree >= 0 ? field.poly_degree + (k - 2 * m)
                                               : kAnalyticVolumeDegree + (k - 2 * m);
        const auto rule = polygon_rule(geo.verts, deg);
        const auto idxs = enumerate_multiindices(k - 2 * m);
        const ScaledFrame2D frame = geo.frame();
        for (std::size_t q = 0; q < idxs.size(); ++q) {
            const Polynomial mono = Polynomial::monomial(frame, idxs[q]);
            double integral = 0.0;
            for (const auto& gp : rule)
                integral += gp.w * field.value(gp.x, gp.y) * mono.evaluate(gp.x, gp.y);
            dofs[layout.interior_dof(int(q))] = integral / geo.area;
        }
    }
    return dofs;
}

Eigen::VectorXd dof_evaluate(const ElementGeometry& geo, const DofLayout& layout,
                             const Polynomial& p)
{
    return dof_evaluate(geo, layout, ScalarField::from_polynomial(p));
}

ElementMatrices element_matrices(const ElementGeometry& geo, int m, int k,
                                 const std::optional<ScalarField>& f)
{
    const DofLayout layout(geo, m, k);
    const int N = layout.size();
    const int nk = poly_space_dim(k);
    const int nm1 = poly_space_dim(m - 1);
    const int nk2m = poly_space_dim(k - 2 * m);
    const ScaledFrame2D frame = geo.frame();
    const auto idxs = enumerate_multiindices(k);

    std::vector<Polynomial> mono;
    mono.reserve(nk);
    for (const auto& al : idxs)
        mono.push_back(Polynomial::monomial(frame, al));

    ElementMatrices em;

    em.D.resize(N, nk);
    for (int j = 0; j < nk; ++j)
        em.D.col(j) = dof_evaluate(geo, layout, mono[j]);

    em.B.resize(nk, N);
    em.B.topRows(nm1) = constraint_functionals(geo, m, layout);
    for (int r = nm1; r < nk; ++r)
        em.B.row(r) = pairing_functional(mono[r], geo, layout).coeffs.transpose();

    // G: constraint values on monomials on top, (grad^m, grad^m)_K Gram below.
    em.G = Eigen::MatrixXd::Zero(nk, nk);
    for (int s = 0; s < nk; ++s)
        em.G.block(0, s, nm1, 1) = constraint_values_on_poly(geo, m, mono[s]);
    em.G22.resize(nk - nm1, nk - nm1);
    {
        std::vector<TensorPoly> grads;
        grads.reserve(nk - nm1);
        for (int r = nm1; r < nk; ++r)
            grads.push_back(grad_tensor(mono[r], m));
        for (int r = 0; r < nk - nm1; ++r)
            for (int s = r; s < nk - nm1; ++s) {
                double val = 0.0;
                for (int a = 0; a <= m; ++a)
                    val += binomial(m, a) *
                           integrate_polygon_product(grads[r].comps[a], grads[s].comps[a],
                                                     geo.verts);
                em.G22(r, s) = val;
                em.G22(s, r) = val;
            }
    }
    em.G.bottomRightCorner(nk - nm1, nk - nm1) = em.G22;

    em.Pi = solve_equilibrated(em.G, em.B);

    em.S = Eigen::VectorXd::Zero(N);
    em.S.head(layout.num_boundary()).setConstant(std::pow(geo.diameter, 2 - 2 * m));

    Eigen::MatrixXd zg = Eigen::MatrixXd::Zero(nk, nk);
    zg.bottomRightCorner(nk - nm1, nk - nm1) = em.G22;
    const Eigen::MatrixXd IDP = Eigen::MatrixXd::Identity(N, N) - em.D * em.Pi;
    em.A = em.Pi.transpose() * zg * em.Pi + IDP.transpose() * em.S.asDiagonal() * IDP;
    em.A = 0.5 * (em.A + em.A.transpose()).eval();

    em.b = Eigen::VectorXd::Zero(N);
    if (f) {
        const int fdeg = f->poly_degree >= 0 ? f->poly_degree : kAnalyticVolumeDegree;
        const auto rule = polygon_rule(geo.verts, fdeg + k);
        Eigen::VectorXd F(nk);
        for (int j = 0; j < nk; ++j) {
            double s = 0.0;
            for (const auto& gp : rule)
                s += gp.w * f->value(gp.x, gp.y) * mono[j].evaluate(gp.x, gp.y);
            F[j] = s;
        }
        if (k <= 2 * m - 1) {
            em.b = em.Pi.transpose() * F;
        } else {
            const MassMatrices mm = mass_matrices(geo.verts, frame, m, k);
            Eigen::VectorXd tail = Eigen::VectorXd::Zero(N);
            tail.tail(nk2m) = mm.Mtilde.ldlt().solve(F.head(nk2m));
            if (k <= 3 * m - 2) {
                em.b = em.Pi.transpose() * mm.M.transpose() *
                           mm.Mbar.ldlt().solve(F.head(nm1)) +
                       geo.area * IDP.transpose() * tail;
            } else {
                em.b = geo.area * tail;
            }
        }
    }
    return em;
}

Polynomial project(const ElementGeometry& geo, const DofLayout& layout,
                   const Eigen::MatrixXd& Pi, const Eigen::VectorXd& dofs)
{
    if (dofs.size() != layout.size())
        throw std::invalid_argument("project: dof vector length mismatch");
    return Polynomial(geo.frame(), layout.k(), Pi * dofs);
}

SerendipityResult serendipity_check(const ElementGeometry& geo, int m, int k, int k_s,
                                    const std::vector<int>& selected_dofs)
{
    const DofLayout layout(geo, m, k);
    const int nks = poly_space_dim(k_s);
    const auto idxs = enumerate_multiindices(k_s);
    const ScaledFrame2D frame = geo.frame();

    Eigen::MatrixXd Dsub(long(selected_dofs.size()), nks);
    for (int j = 0; j < nks; ++j) {
        const Eigen::VectorXd col =
            dof_evaluate(geo, layout, Polynomial::monomial(frame, idxs[j]));
        for (std::size_t i = 0; i < selected_dofs.size(); ++i)
            Dsub(long(i), j) = col[selected_dofs[i]];
    }

    SerendipityResult res;
    if (Dsub.rows() == 0 || Dsub.cols() == 0) {
        res.rank = 0;
        res.satisfied = nks == 0;
        return res;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Dsub);
    const double tol = 1e-10 * svd.singularValues()[0];
    res.rank = int((svd.singularValues().array() > tol).count());
    res.satisfied = res.rank == nks;
    return res;
}

std::string dump_element_json(const ElementMatrices& em)
{
    auto mat = [](const Eigen::MatrixXd& M) {
        nlohmann::json rows = nlohmann::json::array();
        for (long i = 0; i < M.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (long j = 0; j < M.cols(); ++j)
                row.push_back(M(i, j));
            rows.push_back(row);
        }
        return rows;
    };
    nlohmann::json j;
    j["D"] = mat(em.D);
    j["B"] = mat(em.B);
    j["G"] = mat(em.G);
    j["Pi"] = mat(em.Pi);
    j["A"] = mat(em.A);
    j["b"] = std::vector<double>(em.b.data(), em.b.data() + em.b.size());
    return j.dump(2);
}

} // namespace pvem
