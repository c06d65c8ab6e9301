#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pvem/poly.hpp"
#include "pvem/quadrature.hpp"

#include <cmath>

using namespace pvem;

namespace {
const std::vector<std::array<double, 2>> kUnitSquare = {
    {0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};

double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}
} // namespace

TEST_CASE("multiindex enumeration is graded-lex and position-consistent")
{
    CHECK(poly_space_dim(-1) == 0);
    CHECK(poly_space_dim(0) == 1);
    CHECK(poly_space_dim(3) == 10);
    CHECK(poly_space_dim(8) == 45);

    const auto idx = enumerate_multiindices(5);
    REQUIRE(int(idx.size()) == poly_space_dim(5));
    for (int i = 0; i < int(idx.size()); ++i)
        CHECK(multiindex_position(idx[i]) == i);
    // within a degree block the x-exponent descends
    CHECK(idx[1] == MultiIndex{1, 0});
    CHECK(idx[2] == MultiIndex{0, 1});
    CHECK(idx[3] == MultiIndex{2, 0});
    CHECK(idx[4] == MultiIndex{1, 1});
    CHECK(idx[5] == MultiIndex{0, 2});
}

TEST_CASE("binomial matches Pascal recurrence")
{
    for (int n = 0; n <= 20; ++n)
        for (int k = 1; k < n; ++k)
            CHECK(binomial(n, k) == doctest::Approx(binomial(n - 1, k - 1) + binomial(n - 1, k)));
    CHECK(binomial(10, 3) == doctest::Approx(120.0));
}

TEST_CASE("Gauss-Legendre rules integrate x^j exactly up to degree 2n-1")
{
    for (int n = 1; n <= 12; ++n) {
        const auto rule = gauss_legendre(n);
        for (int j = 0; j <= 2 * n - 1; ++j) {
            double s = 0.0;
            for (const auto& p : rule)
                s += p.w * std::pow(p.t, j);
            const double exact = (j % 2 == 0) ? 2.0 / (j + 1) : 0.0;
            CHECK(s == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

TEST_CASE("triangle rule reproduces monomial integrals on the reference triangle")
{
    // Oracle: int_T x^a y^b = a! b! / (a+b+2)! on the triangle (0,0),(1,0),(0,1).
    const std::array<double, 2> A{0, 0}, B{1, 0}, C{0, 1};
    for (int deg = 0; deg <= 10; ++deg) {
        const auto rule = triangle_rule(A, B, C, deg);
        for (int a = 0; a + 0 <= deg; ++a)
            for (int b = 0; a + b <= deg; ++b) {
                double s = 0.0;
                for (const auto& p : rule)
                    s += p.w * std::pow(p.x, a) * std::pow(p.y, b);
                const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                CHECK(s == doctest::Approx(exact).epsilon(1e-13));
            }
    }
}

TEST_CASE("polygon rule integrates monomials over the unit square")
{
    const auto rule = polygon_rule(kUnitSquare, 9);
    for (int a = 0; a <= 9; ++a)
        for (int b = 0; a + b <= 9; ++b) {
            double s = 0.0;
            for (const auto& p : rule)
                s += p.w * std::pow(p.x, a) * std::pow(p.y, b);
            CHECK(s == doctest::Approx(1.0 / ((a + 1.0) * (b + 1.0))).epsilon(1e-13));
        }
}

TEST_CASE("polygon geometry of the unit square")
{
    CHECK(polygon_area(kUnitSquare) == doctest::Approx(1.0));
    const auto c = polygon_centroid(kUnitSquare);
    CHECK(c[0] == doctest::Approx(0.5));
    CHECK(c[1] == doctest::Approx(0.5));
    CHECK(polygon_diameter(kUnitSquare) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("scaled monomial mass matrix entry on the unit square")
{
    // int ((x-1/2)/sqrt(2))^2 = (1/2) * 1/12 = 1/24.
    const ScaledFrame2D fr{{0.5, 0.5}, std::sqrt(2.0)};
    const Polynomial m10 = Polynomial::monomial(fr, {1, 0});
    CHECK(integrate_polygon_product(m10, m10, kUnitSquare) ==
          doctest::Approx(1.0 / 24.0).epsilon(1e-13));

    const auto mm = mass_matrices(kUnitSquare, fr, 3, 7);
    CHECK(mm.Mbar(0, 0) == doctest::Approx(1.0)); // (m_0, m_0) = |K|
    CHECK(mm.Mbar(1, 1) == doctest::Approx(1.0 / 24.0));
    CHECK(mm.Mbar(1, 2) == doctest::Approx(0.0).epsilon(1e-14)); // odd symmetry
}

TEST_CASE("polynomial differentiation is exact in the scaled frame")
{
    const ScaledFrame2D fr{{0.3, -0.2}, 2.0};
    // p = m_{(2,1)}: d/dx p = (2/h) m_{(1,1)}, d2/dxdy p = (2/h^2) m_{(1,0)}
    const Polynomial p = Polynomial::monomial(fr, {2, 1});
    const Polynomial dx = p.derive({1, 0});
    const Polynomial dxy = p.derive({1, 1});
    const double x = 0.9, y = 0.4;
    const double X = (x - 0.3) / 2.0, Y = (y + 0.2) / 2.0;
    CHECK(p.evaluate(x, y) == doctest::Approx(X * X * Y));
    CHECK(dx.evaluate(x, y) == doctest::Approx(2.0 * X * Y / 2.0));
    CHECK(dxy.evaluate(x, y) == doctest::Approx(2.0 * X / 4.0));
}

TEST_CASE("iterated-Laplacian power with sign")
{
    // p = x^6 in the unscaled frame: (-Delta)^3 p = -720.
    const ScaledFrame2D fr{{0.0, 0.0}, 1.0};
    const Polynomial p = Polynomial::monomial(fr, {6, 0});
    const Polynomial lap3 = p.laplacian_power(3);
    CHECK(lap3.evaluate(0.7, -0.3) == doctest::Approx(-720.0));
    // (-Delta)^2 (x^2+y^2)^2 = Delta^2 (...) = 64
    Polynomial q(fr, 4);
    q.coeffs()[multiindex_position({4, 0})] = 1.0;
    q.coeffs()[multiindex_position({2, 2})] = 2.0;
    q.coeffs()[multiindex_position({0, 4})] = 1.0;
    CHECK(q.laplacian_power(2).evaluate(0.1, 0.2) == doctest::Approx(64.0));
}

TEST_CASE("edge restriction matches 2D evaluation")
{
    const ScaledFrame2D fr{{0.2, 0.1}, 1.5};
    Polynomial p(fr, 3);
    for (int i = 0; i < p.coeffs().size(); ++i)
        p.coeffs()[i] = 0.3 * (i + 1);
    const std::array<double, 2> a{0.0, 0.4}, b{1.0, 0.7};
    const Poly1D r = restrict_to_edge(p, a, b);
    for (double u : {-0.5, -0.17, 0.0, 0.33, 0.5}) {
        const double x = 0.5 * (a[0] + b[0]) + u * (b[0] - a[0]);
        const double y = 0.5 * (a[1] + b[1]) + u * (b[1] - a[1]);
        CHECK(r.evaluate(u) == doctest::Approx(p.evaluate(x, y)).epsilon(1e-13));
    }

    // closed-form edge integral vs Gauss quadrature
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    double quad = 0.0;
    for (const auto& gp : gauss_legendre(8))
        quad += 0.5 * gp.w * r.evaluate(0.5 * gp.t) * len;
    CHECK(integrate_edge(r, len) == doctest::Approx(quad).epsilon(1e-13));
}

TEST_CASE("Poly1D arc-length derivative and products")
{
    // q(u) = u^2 on an edge of length 2: dq/ds = 2u * (1/2) = u.
    Poly1D q{(Eigen::VectorXd(3) << 0, 0, 1).finished()};
    const Poly1D d = q.derive_arclength(2.0);
    CHECK(d.evaluate(0.3) == doctest::Approx(0.3));
    const Poly1D prod = q * d;
    CHECK(prod.evaluate(0.4) == doctest::Approx(0.4 * 0.4 * 0.4));
}

TEST_CASE("gradient tensors are symmetric-storage consistent")
{
    const ScaledFrame2D fr{{0.0, 0.0}, 1.0};
    Polynomial p(fr, 3);
    p.coeffs()[multiindex_position({2, 1})] = 1.0; // x^2 y
    const TensorPoly g2 = grad_tensor(p, 2);
    // comps[a] has a x-derivatives: comps[2] = p_xx = 2y, comps[1] = p_xy = 2x, comps[0] = 0
    CHECK(g2.comps[2].evaluate(0.5, 0.7) == doctest::Approx(1.4));
    CHECK(g2.comps[1].evaluate(0.5, 0.7) == doctest::Approx(1.0));
    CHECK(g2.comps[0].evaluate(0.5, 0.7) == doctest::Approx(0.0));

    // full contraction of grad^2 p with itself integrates |D^2 p|^2
    const Polynomial sq = tensor_contraction(g2, g2);
    // |D^2 x^2 y|^2 = (2y)^2 + 2 (2x)^2
    CHECK(sq.evaluate(0.5, 0.7) == doctest::Approx(4 * 0.49 + 2 * 4 * 0.25));
}

TEST_CASE("coefficient truncation rejects non-vanishing tails")
{
    const ScaledFrame2D fr{{0.0, 0.0}, 1.0};
    Polynomial p(fr, 2);
    p.coeffs()[multiindex_position({2, 0})] = 1.0;
    CHECK_THROWS(p.coeffs_truncated(1));
    p.coeffs()[multiindex_position({2, 0})] = 0.0;
    p.coeffs()[0] = 3.0;
    CHECK(p.coeffs_truncated(0).size() == 1);
}
