#include "pvem/assembly.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <stdexcept>

namespace pvem {

GlobalDofMap::GlobalDofMap(const PolyMesh& mesh, int m, int k) : m_(m), k_(k)
{
    const int per_vertex = DofLayout::per_vertex_count(m);
    // Per-edge block layout is the same for every edge at fixed (m, k).
    std::vector<int> a_offset(m, 0);
    int per_edge = 0;
    for (int a = 0; a < m; ++a) {
        a_offset[a] = per_edge;
        per_edge += std::max(0, k - 2 * m + 2 + a);
    }
    const int per_cell = poly_space_dim(k - 2 * m);

    const int vert_base = 0;
    const int edge_base = mesh.num_vertices() * per_vertex;
    const int cell_base = edge_base + mesh.num_edges() * per_edge;
    size_ = cell_base + mesh.num_cells() * per_cell;

    boundary_.assign(size_, false);
    for (int v = 0; v < mesh.num_vertices(); ++v)
        if (mesh.vertex_on_boundary(v))
            for (int i = 0; i < per_vertex; ++i)
                boundary_[vert_base + v * per_vertex + i] = true;
    for (int e = 0; e < mesh.num_edges(); ++e)
        if (mesh.edge_on_boundary(e))
            for (int i = 0; i < per_edge; ++i)
                boundary_[edge_base + e * per_edge + i] = true;

    free_index_.assign(size_, -1);
    for (int g = 0; g < size_; ++g)
        if (!boundary_[g]) {
            free_index_[g] = int(free_of_global_.size());
            free_of_global_.push_back(g);
        }

    cell_maps_.resize(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const ElementGeometry geo = element_geometry(mesh, c);
        const DofLayout layout(geo, m, k);
        auto& cm = cell_maps_[c];
        cm.reserve(layout.size());
        for (const auto& d : layout.dofs()) {
            switch (d.kind) {
            case DofKind::Vertex: {
                const int v = mesh.cell(c)[d.entity];
                cm.push_back({vert_base + v * per_vertex + d.order * (d.order + 1) / 2 + d.comp,
                              d.scale});
                break;
            }
            case DofKind::EdgeMoment: {
                const int e = mesh.cell_edges(c)[d.entity];
                cm.push_back({edge_base + e * per_edge + a_offset[d.order] + d.comp, 1.0});
                break;
            }
            case DofKind::Interior:
                cm.push_back({cell_base + c * per_cell + d.comp, 1.0});
                break;
            }
        }
    }
}

Eigen::VectorXd gather_local(const GlobalDofMap& map, int cell,
                             const Eigen::VectorXd& global)
{
    const auto& cm = map.cell_map(cell);
    Eigen::VectorXd out(long(cm.size()));
    for (std::size_t i = 0; i < cm.size(); ++i)
        out[long(i)] = cm[i].scale * global[cm[i].global];
    return out;
}

LinearSystem assemble(const PolyMesh& mesh, int m, int k, const ScalarField& f)
{
    GlobalDofMap map(mesh, m, k);
    const int n = map.size();

    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs_full = Eigen::VectorXd::Zero(n);

    for (int c = 0; c < mesh.num_cells(); ++c) {
        ElementMatrices em;
        try {
            const ElementGeometry geo = element_geometry(mesh, c);
            em = element_matrices(geo, m, k, f);
        } catch (const std::exception& e) {
            throw std::runtime_error("assemble: cell " + std::to_string(c) + ": " + e.what());
        }
        const auto& cm = map.cell_map(c);
        for (std::size_t i = 0; i < cm.size(); ++i) {
            rhs_full[cm[i].global] += cm[i].scale * em.b[long(i)];
            for (std::size_t j = 0; j < cm.size(); ++j)
                trips.emplace_back(cm[i].global, cm[j].global,
                                   cm[i].scale * cm[j].scale * em.A(long(i), long(j)));
        }
    }

    LinearSystem sys{Eigen::SparseMatrix<double>(), Eigen::VectorXd(), std::move(map),
                     Eigen::VectorXd(), Eigen::SparseMatrix<double>()};
    sys.A_full.resize(n, n);
    sys.A_full.setFromTriplets(trips.begin(), trips.end());
    sys.full_rhs = rhs_full;

    // Eliminate boundary dofs (homogeneous Dirichlet).
    const int nf = sys.map.num_free();
    std::vector<Eigen::Triplet<double>> free_trips;
    for (int col = 0; col < sys.A_full.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A_full, col); it; ++it) {
            const int fi = sys.map.free_index(int(it.row()));
            const int fj = sys.map.free_index(int(it.col()));
            if (fi >= 0 && fj >= 0)
                free_trips.emplace_back(fi, fj, it.value());
        }
    sys.A.resize(nf, nf);
    sys.A.setFromTriplets(free_trips.begin(), free_trips.end());
    sys.rhs.resize(nf);
    for (int i = 0; i < nf; ++i)
        sys.rhs[i] = rhs_full[sys.map.free_dofs()[i]];
    return sys;
}

Eigen::VectorXd solve(const LinearSystem& system)
{
    if (system.A.rows() == 0)
        return Eigen::VectorXd();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(system.A);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("solve: factorization failed");
    const auto& dvec = ldlt.vectorD();
    for (long i = 0; i < dvec.size(); ++i)
        if (!(dvec[i] > 0.0))
            throw std::runtime_error("solve: non-positive pivot at index " + std::to_string(i) +
                                     " (assembly bug or degenerate mesh)");
    Eigen::VectorXd x = ldlt.solve(system.rhs);
    const double rhsn = system.rhs.norm();
    if (rhsn > 0.0) {
        const double res = (system.A * x - system.rhs).norm() / rhsn;
        if (res > 1e-8)
            throw std::runtime_error("solve: relative residual " + std::to_string(res) +
                                     " exceeds 1e-8");
    }
    return x;
}

Eigen::VectorXd global_interpolate(const PolyMesh& mesh, const GlobalDofMap& map,
                                   const ScalarField& field)
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(map.size());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const ElementGeometry geo = element_geometry(mesh, c);
        const DofLayout layout(geo, map.m(), map.k());
        const Eigen::VectorXd local = dof_evaluate(geo, layout, field);
        const auto& cm = map.cell_map(c);
        for (std::size_t i = 0; i < cm.size(); ++i)
            out[cm[i].global] = local[long(i)] / cm[i].scale;
    }
    return out;
}

Eigen::VectorXd inhomogeneous_bc_solve(const PolyMesh& mesh, int m, int k,
                                       const ScalarField& f, const ScalarField& g)
{
    LinearSystem sys = assemble(mesh, m, k, f);
    const int n = sys.map.size();

    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd gdofs = global_interpolate(mesh, sys.map, g);
    for (int i = 0; i < n; ++i)
        if (sys.map.is_boundary(i))
            full[i] = gdofs[i];

    const Eigen::VectorXd coupling = sys.A_full * full;
    for (int i = 0; i < sys.map.num_free(); ++i)
        sys.rhs[i] -= coupling[sys.map.free_dofs()[i]];

    const Eigen::VectorXd x = solve(sys);
    for (int i = 0; i < sys.map.num_free(); ++i)
        full[sys.map.free_dofs()[i]] = x[i];
    return full;
}

std::vector<double> error_norms(const PolyMesh& mesh, const GlobalDofMap& map,
                                const Eigen::VectorXd& solution,
                                const ScalarField& u_exact)
{
    const int m = map.m();
    const int k = map.k();
    std::vector<double> acc(m + 1, 0.0);

    for (int c = 0; c < mesh.num_cells(); ++c) {
        const ElementGeometry geo = element_geometry(mesh, c);
        const DofLayout layout(geo, m, k);
        const ElementMatrices em = element_matrices(geo, m, k);
        const Eigen::VectorXd local = gather_local(map, c, solution);
        const Polynomial pih = project(geo, layout, em.Pi, local);

        const auto rule = polygon_rule(geo.verts, std::max(20, 2 * k));
        for (int s = 0; s <= m; ++s) {
            for (int cdy = 0; cdy <= s; ++cdy) {
                const Polynomial dpoly = pih.derive({s - cdy, cdy});
                const double mult = binomial(s, cdy);
                double cell_acc = 0.0;
                for (const auto& gp : rule) {
                    const double diff = u_exact.deriv(s - cdy, cdy, gp.x, gp.y) -
                                        dpoly.evaluate(gp.x, gp.y);
                    cell_acc += gp.w * diff * diff;
                }
                acc[s] += mult * cell_acc;
            }
        }
    }
    for (double& v : acc)
        v = std::sqrt(v);
    return acc;
}

} // namespace pvem
