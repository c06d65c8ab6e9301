// Python bindings for the polyharmonic VEM core: mesh generation and I/O,
// element matrices, patch tests, and convergence runs.

#include "pvem/assembly.hpp"
#include "pvem/solutions.hpp"
#include "pvem/zoo.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

namespace py = pybind11;
using namespace pvem;

namespace {

ScalarField seeded_polynomial(int degree, unsigned seed)
{
    Polynomial p({{0.35, 0.45}, 1.0}, degree);
    unsigned s = seed;
    for (int i = 0; i < p.coeffs().size(); ++i) {
        s = 1664525u * s + 1013904223u;
        p.coeffs()[i] = double(s % 20001) / 10000.0 - 1.0;
    }
    return ScalarField::from_polynomial(p, "p");
}

ScalarField polyharmonic_forcing(const ScalarField& p, int m)
{
    return ScalarField{[p, m](int ax, int ay, double x, double y) {
                           double val = 0.0;
                           for (int j = 0; j <= m; ++j) {
                               double binom = 1.0;
                               for (int i = 0; i < j; ++i)
                                   binom = binom * double(m - i) / double(i + 1);
                               val += binom * p.deriv(ax + 2 * (m - j), ay + 2 * j, x, y);
                           }
                           return ((m % 2) ? -1.0 : 1.0) * val;
                       },
                       std::max(0, p.max_order - 2 * m),
                       std::max(-1, p.poly_degree - 2 * m), "f"};
}

py::dict matrices_dict(const ElementMatrices& em)
{
    py::dict d;
    d["D"] = em.D;
    d["B"] = em.B;
    d["G"] = em.G;
    d["Pi"] = em.Pi;
    d["A"] = em.A;
    d["S"] = em.S;
    d["b"] = em.b;
    return d;
}

} // namespace

PYBIND11_MODULE(_pvem, mod)
{
    mod.doc() = "H^m-nonconforming virtual element core for (-Lap)^m u = f";

    py::class_<PolyMesh>(mod, "Mesh")
        .def_property_readonly("num_vertices", &PolyMesh::num_vertices)
        .def_property_readonly("num_edges", &PolyMesh::num_edges)
        .def_property_readonly("num_cells", &PolyMesh::num_cells)
        .def("vertex", [](const PolyMesh& m, int v) { return m.vertex(v); })
        .def("cell", [](const PolyMesh& m, int c) { return m.cell(c); });

    mod.def(
        "make_grid",
        [](const std::string& kind, int N, double perturb, unsigned seed) {
            return make_grid(grid_kind_from_string(kind), N, perturb, seed);
        },
        py::arg("kind"), py::arg("n"), py::arg("perturb") = 0.0,
        py::arg("seed") = 1u,
        "Unit-square grid: kind is 'squares', 'triangles' or 'perturbed'.");
    mod.def("load_mesh", &load_mesh, py::arg("path"));
    mod.def("save_mesh", &save_mesh, py::arg("mesh"), py::arg("path"));

    mod.def("polygon_zoo", [] {
        std::vector<std::pair<std::string, std::vector<std::array<double, 2>>>> out;
        for (const auto& np : polygon_zoo())
            out.emplace_back(np.name, np.verts);
        return out;
    });

    mod.def(
        "element_matrices",
        [](const std::vector<std::array<double, 2>>& polygon, int m, int k) {
            return matrices_dict(element_matrices(element_geometry(polygon), m, k));
        },
        py::arg("polygon"), py::arg("m"), py::arg("k"),
        "Projector and stiffness matrices {D, B, G, Pi, A, S, b} of one cell.");

    mod.def(
        "num_dofs",
        [](const PolyMesh& mesh, int m, int k) {
            return GlobalDofMap(mesh, m, k).size();
        },
        py::arg("mesh"), py::arg("m"), py::arg("k"));

    mod.def(
        "patch_test",
        [](const std::string& kind, int N, int m, int k, unsigned seed) {
            const PolyMesh mesh = make_grid(grid_kind_from_string(kind), N);
            const ScalarField p = seeded_polynomial(k, seed);
            const ScalarField f = polyharmonic_forcing(p, m);
            const GlobalDofMap map(mesh, m, k);
            const Eigen::VectorXd uh = inhomogeneous_bc_solve(mesh, m, k, f, p);
            const Eigen::VectorXd chi = global_interpolate(mesh, map, p);
            return (uh - chi).cwiseAbs().maxCoeff() /
                   std::max(1.0, chi.cwiseAbs().maxCoeff());
        },
        py::arg("kind"), py::arg("n"), py::arg("m"), py::arg("k"),
        py::arg("seed") = 1u,
        "Relative dof error of reproducing a random degree-k polynomial.");

    mod.def(
        "convergence",
        [](const std::string& kind, int m, int k, const std::vector<int>& sizes,
           const std::string& solution) {
            const ManufacturedSolution sol = solution_by_name(solution, m);
            py::list rows;
            for (int N : sizes) {
                const PolyMesh mesh = make_grid(grid_kind_from_string(kind), N);
                const LinearSystem sys = assemble(mesh, m, k, sol.f);
                const Eigen::VectorXd x = solve(sys);
                Eigen::VectorXd full = Eigen::VectorXd::Zero(sys.map.size());
                for (int g : sys.map.free_dofs())
                    full[g] = x[sys.map.free_index(g)];
                py::dict row;
                row["h"] = 1.0 / N;
                row["ncells"] = mesh.num_cells();
                row["ndofs"] = sys.map.size();
                row["errors"] = error_norms(mesh, sys.map, full, sol.u);
                rows.append(row);
            }
            return rows;
        },
        py::arg("kind"), py::arg("m"), py::arg("k"), py::arg("sizes"),
        py::arg("solution") = "sinm",
        "Broken seminorm errors e_0..e_m per mesh size for (-Lap)^m u = f.");
}
