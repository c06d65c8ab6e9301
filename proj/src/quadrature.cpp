#include "pvem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace pvem {

std::vector<QuadPoint1D> gauss_legendre(int npoints)
{
    if (npoints < 1)
        throw std::invalid_argument("gauss_legendre: npoints must be >= 1");
    std::vector<QuadPoint1D> pts(npoints);
    const int n = npoints;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev initial guess, Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            if (n == 1) {
                p1 = x;
            }
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double pn = (n == 1) ? x : p1;
            double pn1 = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pn1) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        pts[i] = {-x, w};
        pts[n - 1 - i] = {x, w};
    }
    return pts;
}

std::vector<QuadPoint1D> gauss_rule_for_degree(int degree)
{
    if (degree < 0)
        degree = 0;
    return gauss_legendre(degree / 2 + 1);
}

std::vector<QuadPoint2D> triangle_rule(const std::array<double, 2>& a,
                                       const std::array<double, 2>& b,
                                       const std::array<double, 2>& c,
                                       int degree)
{
    if (degree < 0)
        degree = 0;
    // Duffy map from the unit square: (u, v) -> a + u*(b-a) + u*v*(c-b),
    // Jacobian u * 2|T|. The integrand picks up one extra degree in u.
    const auto gu = gauss_rule_for_degree(degree + 1);
    const auto gv = gauss_rule_for_degree(degree);
    const double jac2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);

    std::vector<QuadPoint2D> pts;
    pts.reserve(gu.size() * gv.size());
    for (const auto& pu : gu) {
        const double u = 0.5 * (pu.t + 1.0);
        for (const auto& pv : gv) {
            const double v = 0.5 * (pv.t + 1.0);
            const double x = a[0] + u * (b[0] - a[0]) + u * v * (c[0] - b[0]);
            const double y = a[1] + u * (b[1] - a[1]) + u * v * (c[1] - b[1]);
            const double w = 0.25 * pu.w * pv.w * u * jac2;
            pts.push_back({x, y, w});
        }
    }
    return pts;
}

double polygon_area(const std::vector<std::array<double, 2>>& verts)
{
    double s = 0.0;
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = verts[i];
        const auto& q = verts[(i + 1) % n];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * s;
}

std::array<double, 2> polygon_centroid(const std::vector<std::array<double, 2>>& verts)
{
    double cx = 0.0, cy = 0.0;
    const std::size_t n = verts.size();
    const double area = polygon_area(verts);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = verts[i];
        const auto& q = verts[(i + 1) % n];
        const double cross = p[0] * q[1] - q[0] * p[1];
        cx += (p[0] + q[0]) * cross;
        cy += (p[1] + q[1]) * cross;
    }
    return {cx / (6.0 * area), cy / (6.0 * area)};
}

double polygon_diameter(const std::vector<std::array<double, 2>>& verts)
{
    double d2 = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
            const double dx = verts[i][0] - verts[j][0];
            const double dy = verts[i][1] - verts[j][1];
            d2 = std::max(d2, dx * dx + dy * dy);
        }
    return std::sqrt(d2);
}

std::vector<QuadPoint2D> polygon_rule(const std::vector<std::array<double, 2>>& verts,
                                      int degree)
{
    if (verts.size() < 3)
        throw std::invalid_argument("polygon_rule: need at least 3 vertices");
    const double area = polygon_area(verts);
    const double h = polygon_diameter(verts);
    if (area <= 1e-14 * h * h)
        throw std::invalid_argument("polygon_rule: degenerate polygon");

    const auto g = polygon_centroid(verts);
    std::vector<QuadPoint2D> pts;
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto tri = triangle_rule(g, verts[i], verts[(i + 1) % n], degree);
        pts.insert(pts.end(), tri.begin(), tri.end());
    }
    return pts;
}

} // namespace pvem
