#include "pvem/mesh.hpp"
#include "pvem/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pvem {

namespace {

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b)
{
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool segments_intersect(const std::array<double, 2>& p1, const std::array<double, 2>& p2,
                        const std::array<double, 2>& q1, const std::array<double, 2>& q2)
{
    const double d1 = cross(q1, q2, p1);
    const double d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1);
    const double d4 = cross(p1, p2, q2);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool cell_is_simple(const std::vector<std::array<double, 2>>& poly)
{
    const int n = int(poly.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            // Skip adjacent segments (they share a vertex).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j)
                continue;
            if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
                return false;
        }
    return true;
}

} // namespace

PolyMesh::PolyMesh(std::vector<std::array<double, 2>> vertices,
                   std::vector<std::vector<int>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells))
{
    build_topology();
    validate();
}

void PolyMesh::build_topology()
{
    std::map<std::pair<int, int>, int> edge_index;
    cell_edges_.resize(cells_.size());
    cell_edge_signs_.resize(cells_.size());

    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& loop = cells_[c];
        const int nv = int(loop.size());
        for (int i = 0; i < nv; ++i) {
            int a = loop[i], b = loop[(i + 1) % nv];
            if (a == b)
                throw std::runtime_error("mesh: degenerate edge in cell " + std::to_string(c));
            const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
            auto it = edge_index.find(key);
            int e;
            if (it == edge_index.end()) {
                e = int(edges_.size());
                edge_index.emplace(key, e);
                Edge edge;
                edge.v_start = key.first;
                edge.v_end = key.second;
                edges_.push_back(edge);
            } else {
                e = it->second;
            }
            edges_[e].cells.push_back(int(c));
            cell_edges_[c].push_back(e);
            cell_edge_signs_[c].push_back(a == edges_[e].v_start ? +1 : -1);
        }
    }

    frames_.resize(edges_.size());
    vertex_boundary_.assign(vertices_.size(), false);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto& edge = edges_[e];
        if (edge.cells.size() > 2)
            throw std::runtime_error("mesh: edge shared by more than two cells");
        edge.boundary = edge.cells.size() == 1;
        const auto& a = vertices_[edge.v_start];
        const auto& b = vertices_[edge.v_end];
        EdgeFrame& fr = frames_[e];
        fr.length = std::hypot(b[0] - a[0], b[1] - a[1]);
        if (fr.length <= 0.0)
            throw std::runtime_error("mesh: zero-length edge");
        fr.tangent = {(b[0] - a[0]) / fr.length, (b[1] - a[1]) / fr.length};
        fr.normal = {fr.tangent[1], -fr.tangent[0]};
        fr.midpoint = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
        if (edge.boundary) {
            vertex_boundary_[edge.v_start] = true;
            vertex_boundary_[edge.v_end] = true;
        }
    }

    geom_.resize(cells_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto poly = cell_polygon(int(c));
        geom_[c].area = polygon_area(poly);
        geom_[c].diameter = polygon_diameter(poly);
        if (geom_[c].area > 0.0)
            geom_[c].centroid = polygon_centroid(poly);
    }
}

void PolyMesh::validate() const
{
    // Duplicate vertices within 1e-12 of the bounding-box size.
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& v : vertices_) {
        xmin = std::min(xmin, v[0]);
        xmax = std::max(xmax, v[0]);
        ymin = std::min(ymin, v[1]);
        ymax = std::max(ymax, v[1]);
    }
    const double bbox = std::max(xmax - xmin, ymax - ymin);
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
            const double d = std::hypot(vertices_[i][0] - vertices_[j][0],
                                        vertices_[i][1] - vertices_[j][1]);
            if (d <= 1e-12 * bbox)
                throw std::runtime_error("mesh: duplicate vertices " + std::to_string(i) +
                                         " and " + std::to_string(j));
        }

    for (std::size_t c = 0; c < cells_.size(); ++c) {
        if (cells_[c].size() < 3)
            throw std::runtime_error("mesh: cell " + std::to_string(c) + " has fewer than 3 vertices");
        const auto poly = cell_polygon(int(c));
        if (geom_[c].area <= 0.0)
            throw std::runtime_error("mesh: cell " + std::to_string(c) +
                                     " has nonpositive signed area (must be counterclockwise)");
        if (!cell_is_simple(poly))
            throw std::runtime_error("mesh: cell " + std::to_string(c) + " is not a simple polygon");
    }
}

std::vector<std::array<double, 2>> PolyMesh::cell_polygon(int c) const
{
    std::vector<std::array<double, 2>> poly;
    poly.reserve(cells_[c].size());
    for (int v : cells_[c])
        poly.push_back(vertices_[v]);
    return poly;
}

PolyMesh load_mesh(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_mesh: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("load_mesh: parse error in " + path + ": " + e.what());
    }
    std::vector<std::array<double, 2>> vertices;
    for (const auto& v : j.at("vertices"))
        vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    std::vector<std::vector<int>> cells;
    for (const auto& c : j.at("cells"))
        cells.push_back(c.get<std::vector<int>>());
    return PolyMesh(std::move(vertices), std::move(cells));
}

void save_mesh(const PolyMesh& mesh, const std::string& path)
{
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (int v = 0; v < mesh.num_vertices(); ++v)
        j["vertices"].push_back({mesh.vertex(v)[0], mesh.vertex(v)[1]});
    j["cells"] = nlohmann::json::array();
    for (int c = 0; c < mesh.num_cells(); ++c)
        j["cells"].push_back(mesh.cell(c));
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_mesh: cannot open " + path);
    out << j.dump(2) << "\n";
}

GridKind grid_kind_from_string(const std::string& s)
{
    if (s == "squares")
        return GridKind::Squares;
    if (s == "triangles")
        return GridKind::Triangles;
    if (s == "polygons-perturbed" || s == "perturbed")
        return GridKind::PolygonsPerturbed;
    throw std::invalid_argument("unknown mesh kind: " + s);
}

namespace {

PolyMesh build_perturbed(int N, double amplitude, unsigned seed,
                         const std::vector<std::array<double, 2>>& base_vertices,
                         const std::vector<std::vector<int>>& cells,
                         const std::vector<bool>& interior)
{
    double amp = amplitude;
    for (int attempt = 0; attempt < 5; ++attempt) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        auto verts = base_vertices;
        for (std::size_t v = 0; v < verts.size(); ++v) {
            const double dx = dist(rng), dy = dist(rng);
            if (!interior[v])
                continue;
            verts[v][0] += amp / N * dx;
            verts[v][1] += amp / N * dy;
        }
        try {
            PolyMesh mesh(verts, cells);
            if (validate_star_shaped(mesh).all_ok)
                return mesh;
        } catch (const std::exception&) {
            // fall through to retry
        }
        amp *= 0.5;
    }
    throw std::runtime_error("make_grid: perturbation kept producing tangled cells");
}

} // namespace

PolyMesh make_grid(GridKind kind, int N, double perturb, unsigned seed)
{
    if (N < 1)
        throw std::invalid_argument("make_grid: N must be >= 1");
    if (perturb < 0.0 || perturb > 0.3)
        throw std::invalid_argument("make_grid: perturb must be in [0, 0.3]");

    std::vector<std::array<double, 2>> verts((N + 1) * (N + 1));
    std::vector<bool> interior((N + 1) * (N + 1), false);
    for (int j = 0; j <= N; ++j)
        for (int i = 0; i <= N; ++i) {
            verts[j * (N + 1) + i] = {double(i) / N, double(j) / N};
            interior[j * (N + 1) + i] = i > 0 && i < N && j > 0 && j < N;
        }

    std::vector<std::vector<int>> cells;
    auto vid = [N](int i, int j) { return j * (N + 1) + i; };
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
            if (kind == GridKind::Triangles) {
                cells.push_back({v00, v10, v11});
                cells.push_back({v00, v11, v01});
            } else {
                cells.push_back({v00, v10, v11, v01});
            }
        }

    // The polygons-perturbed kind always displaces vertices so its cells are
    // genuine (non-parallelogram) polygons even at perturb = 0.
    double amp = perturb;
    if (kind == GridKind::PolygonsPerturbed && amp == 0.0)
        amp = 0.2;
    if (amp == 0.0)
        return PolyMesh(std::move(verts), std::move(cells));
    return build_perturbed(N, amp, seed, verts, cells, interior);
}

StarShapeReport validate_star_shaped(const PolyMesh& mesh)
{
    StarShapeReport rep;
    rep.cell_ok.resize(mesh.num_cells());
    rep.min_chunkiness = 1e300;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto poly = mesh.cell_polygon(c);
        const auto& g = mesh.cell_geometry(c).centroid;
        const double hK = mesh.cell_geometry(c).diameter;
        double inradius = 1e300;
        bool ok = true;
        const int n = int(poly.size());
        for (int i = 0; i < n; ++i) {
            const auto& a = poly[i];
            const auto& b = poly[(i + 1) % n];
            const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
            const double dist = cross(a, b, g) / len; // >0 when centroid is left (inside for ccw)
            inradius = std::min(inradius, dist);
            if (dist < 1e-10 * hK)
                ok = false;
        }
        rep.cell_ok[c] = ok;
        rep.all_ok = rep.all_ok && ok;
        rep.min_chunkiness = std::min(rep.min_chunkiness, inradius / hK);
    }
    if (mesh.num_cells() == 0)
        rep.min_chunkiness = 0.0;
    return rep;
}

} // namespace pvem
