#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pvem/element.hpp"
#include "pvem/zoo.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace pvem;

namespace {

const NamedPolygon& zoo_cell(const std::string& name)
{
    static const auto zoo = polygon_zoo();
    for (const auto& np : zoo)
        if (np.name == name)
            return np;
    throw std::runtime_error("no such zoo cell: " + name);
}

// |u|_m energy pairing of two polynomials by direct quadrature.
double energy_product(const Polynomial& p, const Polynomial& q, int m,
                      const std::vector<std::array<double, 2>>& verts)
{
    const TensorPoly gp = grad_tensor(p, m);
    const TensorPoly gq = grad_tensor(q, m);
    return integrate_polygon(tensor_contraction(gp, gq), verts);
}

} // namespace

TEST_CASE("dof layout counts")
{
    SUBCASE("triangle m=3 k=3: vertex data plus one edge moment")
    {
        const auto geo = element_geometry(zoo_cell("triangle").verts);
        const DofLayout layout(geo, 3, 3);
        CHECK(DofLayout::per_vertex_count(3) == 3);
        CHECK(layout.size() == 12);
        CHECK(layout.num_boundary() == 12);
        CHECK(layout.num_interior() == 0);
        CHECK(layout.edge_dof(0, 2, 0) >= 0); // second normal derivative average
        CHECK(layout.edge_dof(0, 1, 0) == -1);
        CHECK(layout.edge_dof(0, 0, 0) == -1);
    }
    SUBCASE("unit square m=3 k=6")
    {
        const auto geo = element_geometry(zoo_cell("unit-square").verts);
        const DofLayout layout(geo, 3, 6);
        // 4*3 vertex + 4*(2+3+4) edge + 1 interior
        CHECK(layout.size() == 49);
        CHECK(layout.num_boundary() == 48);
        CHECK(layout.num_interior() == 1);
        CHECK(layout.per_edge_count() == 9);
        CHECK(layout.interior_dof(0) == 48);
    }
    SUBCASE("unit square m=4 k=4: only the top normal derivative has moments")
    {
        const auto geo = element_geometry(zoo_cell("unit-square").verts);
        const DofLayout layout(geo, 4, 4);
        CHECK(DofLayout::per_vertex_count(4) == 6);
        CHECK(layout.size() == 28);
        CHECK(layout.edge_dof(0, 3, 0) >= 0);
        CHECK(layout.edge_dof(0, 2, 0) == -1);
        CHECK(layout.num_interior() == 0);
    }
    SUBCASE("parameter validation")
    {
        const auto geo = element_geometry(zoo_cell("triangle").verts);
        CHECK_THROWS(DofLayout(geo, 2, 3));
        CHECK_THROWS(DofLayout(geo, 3, 2));
    }
}

TEST_CASE("projector reproduces polynomials: Pi D = I and G = B D")
{
    for (const auto& np : polygon_zoo()) {
        const auto geo = element_geometry(np.verts);
        for (int m : {3, 4})
            for (int k = m; k <= m + 2; ++k) {
                const ElementMatrices em = element_matrices(geo, m, k);
                const int nk = poly_space_dim(k);
                const Eigen::MatrixXd PiD = em.Pi * em.D;
                const double errI =
                    (PiD - Eigen::MatrixXd::Identity(nk, nk)).cwiseAbs().maxCoeff();
                CHECK(errI <= 1e-9);
                const double errG = (em.G - em.B * em.D).cwiseAbs().maxCoeff() /
                                    em.G.cwiseAbs().maxCoeff();
                CHECK(errG <= 1e-11);
            }
    }
}

TEST_CASE("element energy matrix: symmetry, positivity, kernel dimension")
{
    for (const auto& np : polygon_zoo()) {
        const auto geo = element_geometry(np.verts);
        for (int m : {3, 4}) {
            const int k = m + 1;
            const ElementMatrices em = element_matrices(geo, m, k);
            const int N = int(em.A.rows());
            CHECK((em.A - em.A.transpose()).cwiseAbs().maxCoeff() == 0.0);

            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(em.A);
            const Eigen::VectorXd ev = es.eigenvalues();
            const double lmax = ev[N - 1];
            CHECK(ev[0] >= -1e-10 * lmax);
            // kernel = polynomials of degree <= m-1
            const int nker = poly_space_dim(m - 1);
            int below = 0;
            for (int i = 0; i < N; ++i)
                if (ev[i] <= 1e-8 * lmax)
                    ++below;
            CHECK(below == nker);
        }
    }
}

TEST_CASE("energy consistency: chi(p)^T A chi(q) equals the exact m-th seminorm pairing")
{
    const int m = 3, k = 4;
    for (const auto& np : polygon_zoo()) {
        const auto geo = element_geometry(np.verts);
        const DofLayout layout(geo, m, k);
        const ElementMatrices em = element_matrices(geo, m, k);
        const auto idx = enumerate_multiindices(k);
        const double scale = em.A.cwiseAbs().maxCoeff();
        for (std::size_t r = 0; r < idx.size(); ++r) {
            const Polynomial p = Polynomial::monomial(geo.frame(), idx[r]);
            const Eigen::VectorXd cp = dof_evaluate(geo, layout, p);
            for (std::size_t s = r; s < idx.size(); ++s) {
                const Polynomial q = Polynomial::monomial(geo.frame(), idx[s]);
                const Eigen::VectorXd cq = dof_evaluate(geo, layout, q);
                const double exact = energy_product(p, q, m, geo.verts);
                CHECK(cp.dot(em.A * cq) ==
                      doctest::Approx(exact).epsilon(1e-9).scale(scale));
            }
        }
    }
}

TEST_CASE("load vector regimes: discrete pairing with polynomial dofs is the exact integral")
{
    const auto geo = element_geometry(zoo_cell("unit-square").verts);
    const Polynomial fp = [&] {
        Polynomial p(geo.frame(), 3);
        p.coeffs() << 0.7, -1.2, 0.4, 2.0, -0.3, 1.1, 0.5, -0.9, 0.2, 1.4;
        return p;
    }();
    const ScalarField f = ScalarField::from_polynomial(fp, "f3");

    auto check_identity = [&](int m, int k, int max_deg, double tol) {
        const DofLayout layout(geo, m, k);
        const ElementMatrices em = element_matrices(geo, m, k, f);
        for (const auto& al : enumerate_multiindices(max_deg)) {
            const Polynomial p = Polynomial::monomial(geo.frame(), al);
            const Eigen::VectorXd chi = dof_evaluate(geo, layout, p);
            const double exact = integrate_polygon_product(fp, p, geo.verts);
            CHECK(em.b.dot(chi) == doctest::Approx(exact).epsilon(tol).scale(1.0));
        }
    };

    // k <= 2m-1: b = Pi^T F is exact against every degree-k polynomial.
    check_identity(3, 5, 5, 1e-12);
    // 2m <= k <= 3m-2: the moment-corrected form stays exact up to degree m-1.
    check_identity(3, 6, 2, 1e-9);
    check_identity(4, 8, 3, 1e-9);
    // k >= 3m-1: interior moments alone are exact up to degree k-2m.
    check_identity(3, 8, 2, 1e-9);
}

TEST_CASE("translation invariance and scaling covariance of the element matrices")
{
    const auto& base = zoo_cell("pentagon");
    const int m = 3, k = 4;
    const ElementMatrices em0 = element_matrices(element_geometry(base.verts), m, k);

    SUBCASE("translation leaves everything unchanged")
    {
        std::vector<std::array<double, 2>> moved;
        for (const auto& v : base.verts)
            moved.push_back({v[0] + 10.0, v[1] - 7.0});
        const ElementMatrices em1 = element_matrices(element_geometry(moved), m, k);
        CHECK((em1.A - em0.A).cwiseAbs().maxCoeff() <=
              1e-10 * em0.A.cwiseAbs().maxCoeff());
        CHECK((em1.Pi - em0.Pi).cwiseAbs().maxCoeff() <=
              1e-10 * em0.Pi.cwiseAbs().maxCoeff());
        CHECK((em1.D - em0.D).cwiseAbs().maxCoeff() <=
              1e-12 * em0.D.cwiseAbs().maxCoeff());
    }
    SUBCASE("uniform scaling: D and Pi are scale-free, A scales like h^(2-2m)")
    {
        const double s = 0.5;
        std::vector<std::array<double, 2>> scaled;
        for (const auto& v : base.verts)
            scaled.push_back({s * v[0], s * v[1]});
        const ElementMatrices em1 = element_matrices(element_geometry(scaled), m, k);
        CHECK((em1.D - em0.D).cwiseAbs().maxCoeff() <=
              1e-12 * em0.D.cwiseAbs().maxCoeff());
        CHECK((em1.Pi - em0.Pi).cwiseAbs().maxCoeff() <=
              1e-10 * em0.Pi.cwiseAbs().maxCoeff());
        const double factor = std::pow(s, 2.0 - 2.0 * m);
        CHECK((em1.A - factor * em0.A).cwiseAbs().maxCoeff() <=
              1e-10 * factor * em0.A.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("polynomial and callback dof evaluation agree")
{
    const auto geo = element_geometry(zoo_cell("perturbed-hexagon").verts);
    const int m = 3, k = 5;
    const DofLayout layout(geo, m, k);
    Polynomial p(geo.frame(), 5);
    p.coeffs().setLinSpaced(poly_space_dim(5), -1.0, 2.0);
    const Eigen::VectorXd a = dof_evaluate(geo, layout, p);
    const Eigen::VectorXd b = dof_evaluate(geo, layout, ScalarField::from_polynomial(p));
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-11 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("reduced dof set spans P_4 for m=3, k=5 on a triangle")
{
    const auto geo = element_geometry(zoo_cell("triangle").verts);
    const DofLayout layout(geo, 3, 5);
    std::vector<int> selected;
    for (int v = 0; v < 3; ++v)
        for (int j = 0; j <= 1; ++j)
            for (int c = 0; c <= j; ++c)
                selected.push_back(layout.vertex_dof(v, j, c));
    for (int e = 0; e < 3; ++e) {
        selected.push_back(layout.edge_dof(e, 0, 0)); // trace average
        selected.push_back(layout.edge_dof(e, 2, 0)); // 2nd normal derivative average
    }
    CHECK(int(selected.size()) == 15);
    CHECK(poly_space_dim(4) == 15);
    const SerendipityResult res = serendipity_check(geo, 3, 5, 4, selected);
    CHECK(res.rank == 15);
    CHECK(res.satisfied);
}
