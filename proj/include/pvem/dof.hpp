#pragma once

#include "pvem/mesh.hpp"
#include "pvem/multiindex.hpp"
#include "pvem/poly.hpp"

#include <vector>

namespace pvem {

/// Geometry of one element in global coordinates, with per-edge global
/// frames and orientation signs s_{K,e} (+1 when the global edge normal is
/// outward for this cell).
struct ElementGeometry {
    std::vector<std::array<double, 2>> verts; // ccw loop
    std::array<double, 2> centroid{0.0, 0.0};
    double diameter = 0.0;
    double area = 0.0;
    std::vector<EdgeFrame> edge_frames; // edge i runs between loop verts i, i+1
    std::vector<int> edge_signs;        // s_{K,e}
    std::vector<int> edge_start_loc;    // loop-local index of the frame's start vertex

    int num_vertices() const { return int(verts.size()); }
    ScaledFrame2D frame() const { return {centroid, diameter}; }
};

/// Standalone polygon: global edge orientation fixed by loop-index order
/// (start = smaller loop index), matching the mesh convention.
ElementGeometry element_geometry(const std::vector<std::array<double, 2>>& polygon);
ElementGeometry element_geometry(const PolyMesh& mesh, int cell);

enum class DofKind { Vertex, EdgeMoment, Interior };

struct DofDescriptor {
    DofKind kind;
    int entity; // loop-local vertex / edge index; 0 for interior
    int order;  // derivative order j (vertex) or a (edge); 0 for interior
    int comp;   // vertex: d_y-count in 0..j; edge/interior: monomial index
    double scale; // local dof = scale * globally shared value
};

/// Canonical local dof ordering at parameters (m, k): vertex blocks, then
/// edge-moment blocks, then interior moments. Boundary dofs (vertex + edge)
/// come first, as the stabilization's block structure requires.
class DofLayout {
public:
    DofLayout(const ElementGeometry& geo, int m, int k);

    int m() const { return m_; }
    int k() const { return k_; }
    int size() const { return int(dofs_.size()); }
    int num_boundary() const { return num_boundary_; }
    int num_interior() const { return size() - num_boundary_; }
    const std::vector<DofDescriptor>& dofs() const { return dofs_; }

    int vertex_dof(int vloc, int j, int comp) const;
    /// Edge moment dof against the degree-q edge monomial for the a-th
    /// normal derivative; -1 when the moment space at (a) is empty.
    int edge_dof(int eloc, int a, int q) const;
    int interior_dof(int q) const;

    /// Degree of the edge moment space for normal-derivative order a.
    int edge_moment_degree(int a) const { return k_ - 2 * m_ + 1 + a; }
    static int per_vertex_count(int m) { return m * (m - 1) / 2; }
    int per_edge_count() const { return per_edge_count_; }

private:
    int m_, k_;
    int nverts_, nedges_;
    int per_edge_count_ = 0;
    int num_boundary_ = 0;
    std::vector<DofDescriptor> dofs_;
    std::vector<int> edge_a_offset_; // offset of block a within one edge block
    double hK_ = 1.0;
};

} // namespace pvem
