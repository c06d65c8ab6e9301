#pragma once

#include "pvem/element.hpp"
#include "pvem/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <optional>
#include <vector>

namespace pvem {

/// Global dof numbering: vertices, then edges, then cells, each in index
/// order. Vertex derivative values are stored unscaled globally; the
/// element-local h_K^j factor lives in the per-cell map.
class GlobalDofMap {
public:
    GlobalDofMap(const PolyMesh& mesh, int m, int k);

    int m() const { return m_; }
    int k() const { return k_; }
    int size() const { return size_; }
    int num_free() const { return int(free_of_global_.size()); }
    bool is_boundary(int g) const { return boundary_[g]; }
    /// -1 for eliminated (boundary) dofs.
    int free_index(int g) const { return free_index_[g]; }
    const std::vector<int>& free_dofs() const { return free_of_global_; }

    struct LocalRef {
        int global;
        double scale; // local dof = scale * global value
    };
    const std::vector<LocalRef>& cell_map(int c) const { return cell_maps_[c]; }

private:
    int m_, k_, size_ = 0;
    std::vector<bool> boundary_;
    std::vector<int> free_index_;
    std::vector<int> free_of_global_;
    std::vector<std::vector<LocalRef>> cell_maps_;
};

struct LinearSystem {
    Eigen::SparseMatrix<double> A; // free x free, symmetric
    Eigen::VectorXd rhs;
    GlobalDofMap map;
    Eigen::VectorXd full_rhs;            // over all global dofs, pre-elimination
    Eigen::SparseMatrix<double> A_full;  // over all global dofs
};

LinearSystem assemble(const PolyMesh& mesh, int m, int k, const ScalarField& f);

/// Direct symmetric factorization; throws on a non-SPD pivot. The relative
/// residual is checked against 1e-8.
Eigen::VectorXd solve(const LinearSystem& system);

/// Interpolated-trace Dirichlet data: boundary dofs are set to g's dofs and
/// the coupling moves to the right-hand side. Returns the full global vector.
Eigen::VectorXd inhomogeneous_bc_solve(const PolyMesh& mesh, int m, int k,
                                       const ScalarField& f, const ScalarField& g);

/// Global dof vector of the canonical interpolant of a field.
Eigen::VectorXd global_interpolate(const PolyMesh& mesh, const GlobalDofMap& map,
                                   const ScalarField& field);

/// Broken seminorm errors e_s = |u - Pi_h u_h|_{s,h} for s = 0..m.
std::vector<double> error_norms(const PolyMesh& mesh, const GlobalDofMap& map,
                                const Eigen::VectorXd& solution,
                                const ScalarField& u_exact);

/// Per-cell local dof vector gathered from a global vector.
Eigen::VectorXd gather_local(const GlobalDofMap& map, int cell,
                             const Eigen::VectorXd& global);

} // namespace pvem
