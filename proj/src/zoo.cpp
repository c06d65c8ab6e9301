#include "pvem/zoo.hpp"

#include <cmath>

namespace pvem {

std::vector<NamedPolygon> polygon_zoo()
{
    std::vector<NamedPolygon> zoo;
    zoo.push_back({"triangle", {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}});
    zoo.push_back({"unit-square", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}});

    NamedPolygon pent{"pentagon", {}};
    for (int i = 0; i < 5; ++i) {
        const double th = 2.0 * M_PI * i / 5.0 + 0.5 * M_PI;
        pent.verts.push_back({0.5 + 0.5 * std::cos(th), 0.5 + 0.5 * std::sin(th)});
    }
    zoo.push_back(pent);

    NamedPolygon hex{"perturbed-hexagon", {}};
    const double wiggle[6] = {0.04, -0.06, 0.02, 0.05, -0.03, 0.06};
    for (int i = 0; i < 6; ++i) {
        const double th = 2.0 * M_PI * i / 6.0;
        const double r = 0.5 + wiggle[i];
        hex.verts.push_back({0.5 + r * std::cos(th), 0.5 + r * std::sin(th)});
    }
    zoo.push_back(hex);

    zoo.push_back({"thin-quad", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.1}, {0.0, 0.1}}});
    return zoo;
}

} // namespace pvem
