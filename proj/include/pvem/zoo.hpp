#pragma once

#include <array>
#include <string>
#include <vector>

namespace pvem {

struct NamedPolygon {
    std::string name;
    std::vector<std::array<double, 2>> verts;
};

/// Built-in element test polygons: triangle, unit square, regular pentagon,
/// perturbed hexagon, thin 10:1 quad.
std::vector<NamedPolygon> polygon_zoo();

} // namespace pvem
