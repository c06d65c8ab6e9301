#pragma once

#include <array>
#include <functional>
#include <vector>

namespace pvem {

struct QuadPoint2D {
    double x, y, w;
};

struct QuadPoint1D {
    double t, w; // t in [-1, 1]
};

/// Gauss-Legendre rule on [-1, 1], exact for degree 2n-1.
std::vector<QuadPoint1D> gauss_legendre(int npoints);

/// Smallest Gauss-Legendre rule exact for the given polynomial degree.
std::vector<QuadPoint1D> gauss_rule_for_degree(int degree);

/// Quadrature on the triangle (a, b, c), exact for bivariate polynomials
/// up to `degree`. Built from a Duffy-type collapsed tensor rule.
std::vector<QuadPoint2D> triangle_rule(const std::array<double, 2>& a,
                                       const std::array<double, 2>& b,
                                       const std::array<double, 2>& c,
                                       int degree);

/// Quadrature on a simple counterclockwise polygon, exact up to `degree`.
/// Fan sub-triangulation from the centroid; requires star-shapedness
/// w.r.t. the centroid. Throws on degenerate polygons (area ~ 0).
std::vector<QuadPoint2D> polygon_rule(const std::vector<std::array<double, 2>>& verts,
                                      int degree);

/// Signed area of a polygon (positive when counterclockwise).
double polygon_area(const std::vector<std::array<double, 2>>& verts);

/// Area centroid of a simple polygon.
std::array<double, 2> polygon_centroid(const std::vector<std::array<double, 2>>& verts);

/// Diameter (max pairwise vertex distance).
double polygon_diameter(const std::vector<std::array<double, 2>>& verts);

} // namespace pvem
