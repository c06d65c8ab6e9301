#include "pvem/dof.hpp"
#include "pvem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace pvem {

namespace {

ElementGeometry geometry_from_loop(const std::vector<std::array<double, 2>>& verts,
                                   const std::vector<bool>& forward)
{
    ElementGeometry geo;
    geo.verts = verts;
    geo.area = polygon_area(verts);
    if (geo.area <= 0.0)
        throw std::invalid_argument("element_geometry: polygon must be counterclockwise");
    geo.centroid = polygon_centroid(verts);
    geo.diameter = polygon_diameter(verts);
    const int n = int(verts.size());
    for (int i = 0; i < n; ++i) {
        const int jnext = (i + 1) % n;
        const auto& a = forward[i] ? verts[i] : verts[jnext];
        const auto& b = forward[i] ? verts[jnext] : verts[i];
        EdgeFrame fr;
        fr.length = std::hypot(b[0] - a[0], b[1] - a[1]);
        if (fr.length <= 0.0)
            throw std::invalid_argument("element_geometry: zero-length edge");
        fr.tangent = {(b[0] - a[0]) / fr.length, (b[1] - a[1]) / fr.length};
        fr.normal = {fr.tangent[1], -fr.tangent[0]};
        fr.midpoint = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
        geo.edge_frames.push_back(fr);
        geo.edge_signs.push_back(forward[i] ? +1 : -1);
        geo.edge_start_loc.push_back(forward[i] ? i : jnext);
    }
    return geo;
}

} // namespace

ElementGeometry element_geometry(const std::vector<std::array<double, 2>>& polygon)
{
    const int n = int(polygon.size());
    std::vector<bool> forward(n);
    for (int i = 0; i < n; ++i)
        forward[i] = i < (i + 1) % n; // closing edge runs high->low index
    return geometry_from_loop(polygon, forward);
}

ElementGeometry element_geometry(const PolyMesh& mesh, int cell)
{
    const auto& loop = mesh.cell(cell);
    std::vector<bool> forward(loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i)
        forward[i] = mesh.cell_edge_signs(cell)[i] > 0;
    auto geo = geometry_from_loop(mesh.cell_polygon(cell), forward);
    // Use the mesh's stored frames so shared edges agree bit-exactly.
    for (std::size_t i = 0; i < loop.size(); ++i)
        geo.edge_frames[i] = mesh.edge_frame(mesh.cell_edges(cell)[i]);
    return geo;
}

DofLayout::DofLayout(const ElementGeometry& geo, int m, int k)
    : m_(m), k_(k), nverts_(geo.num_vertices()), nedges_(geo.num_vertices()),
      hK_(geo.diameter)
{
    if (m < 3)
        throw std::invalid_argument("DofLayout: m must be >= 3 (m > n = 2)");
    if (k < m)
        throw std::invalid_argument("DofLayout: k must be >= m");

    for (int v = 0; v < nverts_; ++v)
        for (int j = 0; j <= m - 2; ++j)
            for (int c = 0; c <= j; ++c)
                dofs_.push_back({DofKind::Vertex, v, j, c, std::pow(hK_, j)});

    edge_a_offset_.assign(m, 0);
    int off = 0;
    for (int a = 0; a < m; ++a) {
        edge_a_offset_[a] = off;
        off += std::max(0, edge_moment_degree(a) + 1);
    }
    per_edge_count_ = off;
    for (int e = 0; e < nedges_; ++e)
        for (int a = 0; a < m; ++a)
            for (int q = 0; q <= edge_moment_degree(a); ++q)
                dofs_.push_back({DofKind::EdgeMoment, e, a, q, 1.0});

    num_boundary_ = int(dofs_.size());

    for (int q = 0; q < poly_space_dim(k - 2 * m); ++q)
        dofs_.push_back({DofKind::Interior, 0, 0, q, 1.0});
}

int DofLayout::vertex_dof(int vloc, int j, int comp) const
{
    return vloc * per_vertex_count(m_) + j * (j + 1) / 2 + comp;
}

int DofLayout::edge_dof(int eloc, int a, int q) const
{
    if (edge_moment_degree(a) < 0)
        return -1;
    return nverts_ * per_vertex_count(m_) + eloc * per_edge_count_ + edge_a_offset_[a] + q;
}

int DofLayout::interior_dof(int q) const
{
    return num_boundary_ + q;
}

} // namespace pvem
