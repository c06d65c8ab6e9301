#pragma once

#include <array>
#include <string>
#include <vector>

namespace pvem {

/// Fixed global frame of an edge: tangent from the lower-index vertex to the
/// higher-index one, normal nu = (t_y, -t_x). Shared by both incident cells.
struct EdgeFrame {
    std::array<double, 2> tangent{1.0, 0.0};
    std::array<double, 2> normal{0.0, -1.0};
    std::array<double, 2> midpoint{0.0, 0.0};
    double length = 0.0;
};

struct Edge {
    int v_start = -1; // v_start < v_end
    int v_end = -1;
    bool boundary = false;
    std::vector<int> cells; // 1 or 2 incident cells
};

struct CellGeometry {
    std::array<double, 2> centroid{0.0, 0.0};
    double diameter = 0.0;
    double area = 0.0;
};

struct StarShapeReport {
    std::vector<bool> cell_ok;
    double min_chunkiness = 0.0; // min over cells of (inradius from centroid)/h_K
    bool all_ok = true;
};

/// Polygonal mesh with oriented edges and per-entity geometry. Cells are
/// counterclockwise vertex loops; edges are derived from the cells.
class PolyMesh {
public:
    PolyMesh(std::vector<std::array<double, 2>> vertices,
             std::vector<std::vector<int>> cells);

    int num_vertices() const { return int(vertices_.size()); }
    int num_edges() const { return int(edges_.size()); }
    int num_cells() const { return int(cells_.size()); }

    const std::array<double, 2>& vertex(int v) const { return vertices_[v]; }
    const Edge& edge(int e) const { return edges_[e]; }
    const EdgeFrame& edge_frame(int e) const { return frames_[e]; }
    const std::vector<int>& cell(int c) const { return cells_[c]; }
    const CellGeometry& cell_geometry(int c) const { return geom_[c]; }

    /// Edges of cell c in loop order; cell_edge_sign is +1 when the cell
    /// traverses the edge from v_start to v_end (then the global normal is
    /// outward for the cell).
    const std::vector<int>& cell_edges(int c) const { return cell_edges_[c]; }
    const std::vector<int>& cell_edge_signs(int c) const { return cell_edge_signs_[c]; }

    bool vertex_on_boundary(int v) const { return vertex_boundary_[v]; }
    bool edge_on_boundary(int e) const { return edges_[e].boundary; }

    std::vector<std::array<double, 2>> cell_polygon(int c) const;

private:
    void build_topology();
    void validate() const;

    std::vector<std::array<double, 2>> vertices_;
    std::vector<std::vector<int>> cells_;
    std::vector<Edge> edges_;
    std::vector<EdgeFrame> frames_;
    std::vector<CellGeometry> geom_;
    std::vector<std::vector<int>> cell_edges_;
    std::vector<std::vector<int>> cell_edge_signs_;
    std::vector<bool> vertex_boundary_;
};

PolyMesh load_mesh(const std::string& path);
void save_mesh(const PolyMesh& mesh, const std::string& path);

enum class GridKind { Squares, Triangles, PolygonsPerturbed };
GridKind grid_kind_from_string(const std::string& s);

/// Deterministic mesh of the unit square. perturb in [0, 0.3] moves interior
/// vertices by at most perturb/N with a seeded generator; cells are
/// re-validated for star-shapedness, retrying with halved magnitude.
PolyMesh make_grid(GridKind kind, int N, double perturb = 0.0, unsigned seed = 1u);

/// Per-cell star-shapedness w.r.t. the centroid plus chunkiness diagnostic.
StarShapeReport validate_star_shaped(const PolyMesh& mesh);

} // namespace pvem
