#include "pvem/assembly.hpp"
#include "pvem/element.hpp"
#include "pvem/mesh.hpp"
#include "pvem/solutions.hpp"
#include "pvem/zoo.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace pvem;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

void require_params(int m, int k)
{
    if (m < 3)
        throw CLI::ValidationError("--m", "m must be >= 3 (the method requires m > n = 2)");
    if (k < m)
        throw CLI::ValidationError("--k", "k must be >= m");
}

struct IdentityReport {
    double pi_d = 0.0;      // max |Pi D - I|
    double g_bd = 0.0;      // max |G - B D| / max |G|
    double pairing = 0.0;   // bottom-block oracle residual, relative
    double asym = 0.0;      // relative symmetry defect of A
    double neg_eig = 0.0;   // min eigenvalue / max eigenvalue
    int kernel_defect = 0;  // |rank(A) - (N_K - n_{m-1})|
};

IdentityReport check_identities(const ElementGeometry& geo, int m, int k)
{
    const ElementMatrices em = element_matrices(geo, m, k);
    const int nk = poly_space_dim(k);
    const int nm1 = poly_space_dim(m - 1);
    IdentityReport rep;

    rep.pi_d = (em.Pi * em.D - Eigen::MatrixXd::Identity(nk, nk)).cwiseAbs().maxCoeff();
    const Eigen::MatrixXd BD = em.B * em.D;
    const double gscale = em.G.cwiseAbs().maxCoeff();
    rep.g_bd = (em.G - BD).cwiseAbs().maxCoeff() / gscale;
    const double g22scale = std::max(em.G22.cwiseAbs().maxCoeff(), 1e-300);
    rep.pairing = (BD.bottomRightCorner(nk - nm1, nk - nm1) - em.G22).cwiseAbs().maxCoeff() /
                  g22scale;

    rep.asym = (em.A - em.A.transpose()).cwiseAbs().maxCoeff() /
               em.A.cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(em.A);
    const double lmax = es.eigenvalues().maxCoeff();
    rep.neg_eig = es.eigenvalues().minCoeff() / lmax;
    const int rank = int((es.eigenvalues().array() > 1e-8 * lmax).count());
    rep.kernel_defect = std::abs(rank - (int(em.A.rows()) - nm1));
    return rep;
}

int cmd_check_element(int m, int k, const std::string& polygon_file)
{
    require_params(m, k);
    std::vector<NamedPolygon> polys;
    if (!polygon_file.empty()) {
        std::ifstream in(polygon_file);
        if (!in)
            throw std::runtime_error("cannot open " + polygon_file);
        nlohmann::json j;
        in >> j;
        NamedPolygon np{polygon_file, {}};
        for (const auto& v : j)
            np.verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        polys.push_back(np);
    } else {
        polys = polygon_zoo();
    }

    bool ok = true;
    for (const auto& np : polys) {
        const auto geo = element_geometry(np.verts);
        const auto rep = check_identities(geo, m, k);
        const bool pass = rep.pi_d <= 1e-9 && rep.g_bd <= 1e-9 && rep.pairing <= 1e-10 &&
                          rep.asym <= 1e-12 && rep.neg_eig >= -1e-9 && rep.kernel_defect == 0;
        std::printf("%-20s PiD-I %.3e  G-BD %.3e  pairing %.3e  sym %.3e  "
                    "eig %.3e  kernel %s  %s\n",
                    np.name.c_str(), rep.pi_d, rep.g_bd, rep.pairing, rep.asym, rep.neg_eig,
                    rep.kernel_defect == 0 ? "ok" : "BAD", pass ? "pass" : "FAIL");
        if (!pass) {
            ok = false;
            std::printf("  failing identity on cell '%s'\n", np.name.c_str());
        }
    }
    return ok ? 0 : 1;
}

Polynomial random_polynomial(int k, unsigned seed)
{
    // Domain-frame polynomial on (0,1)^2 with coefficients in [-1, 1].
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Polynomial p({{0.5, 0.5}, std::sqrt(2.0)}, k);
    for (int i = 0; i < p.coeffs().size(); ++i)
        p.coeffs()[i] = dist(rng);
    return p;
}

double run_patch_test(int m, int k, GridKind kind, int N, double perturb, unsigned seed)
{
    const PolyMesh mesh = make_grid(kind, N, perturb, seed);
    const Polynomial p = random_polynomial(k, seed + 7u);
    const ScalarField g = ScalarField::from_polynomial(p, "patch");
    const Polynomial lap = p.laplacian_power(m);
    const ScalarField f = ScalarField::from_polynomial(lap, "patch_rhs");

    const Eigen::VectorXd uh = inhomogeneous_bc_solve(mesh, m, k, f, g);
    const GlobalDofMap map(mesh, m, k);
    const Eigen::VectorXd ip = global_interpolate(mesh, map, g);
    return (uh - ip).cwiseAbs().maxCoeff() / ip.cwiseAbs().maxCoeff();
}

int cmd_patch_test(int m, int k, const std::string& kind_s, int N, double perturb,
                   unsigned seed)
{
    require_params(m, k);
    const double err = run_patch_test(m, k, grid_kind_from_string(kind_s), N, perturb, seed);
    std::printf("patch-test m=%d k=%d mesh=%s N=%d: relative dof error %.3e  %s\n", m, k,
                kind_s.c_str(), N, err, err <= 1e-6 ? "pass" : "FAIL");
    return err <= 1e-6 ? 0 : 1;
}

struct ConvergenceRow {
    double h;
    int ncells;
    int ndofs;
    std::vector<double> errors;
    double rate_m;
};

std::vector<ConvergenceRow> run_convergence(int m, int k, GridKind kind,
                                            const std::vector<int>& sizes,
                                            const ManufacturedSolution& sol, double perturb,
                                            unsigned seed)
{
    std::vector<ConvergenceRow> rows;
    for (int N : sizes) {
        const PolyMesh mesh = make_grid(kind, N, perturb, seed);
        LinearSystem sys = assemble(mesh, m, k, sol.f);
        const Eigen::VectorXd x = solve(sys);
        Eigen::VectorXd full = Eigen::VectorXd::Zero(sys.map.size());
        for (int i = 0; i < sys.map.num_free(); ++i)
            full[sys.map.free_dofs()[i]] = x[i];
        const auto errs = error_norms(mesh, sys.map, full, sol.u);

        ConvergenceRow row{1.0 / N, mesh.num_cells(), sys.map.num_free(), errs, 0.0};
        if (!rows.empty() && errs[m] > 0.0 && rows.back().errors[m] > 0.0)
            row.rate_m = std::log(rows.back().errors[m] / errs[m]) /
                         std::log(rows.back().h / row.h);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string convergence_csv(int m, const std::vector<ConvergenceRow>& rows)
{
    std::ostringstream os;
    os << "h,ncells,ndofs";
    for (int s = 0; s <= m; ++s)
        os << ",e" << s;
    os << ",rate_m\n";
    for (const auto& r : rows) {
        os << fmt(r.h) << "," << r.ncells << "," << r.ndofs;
        for (double e : r.errors)
            os << "," << fmt(e);
        os << "," << fmt(r.rate_m) << "\n";
    }
    return os.str();
}

int cmd_convergence(int m, int k, const std::string& kind_s, const std::vector<int>& sizes,
                    const std::string& solution, double perturb, unsigned seed,
                    const std::string& out)
{
    require_params(m, k);
    if (sizes.size() < 2)
        throw CLI::ValidationError("--sizes", "need at least two mesh sizes");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1])
            throw CLI::ValidationError("--sizes", "mesh sizes must be strictly increasing");

    const ManufacturedSolution sol = solution_by_name(solution, m);
    sol.check_consistency(m);
    const auto rows =
        run_convergence(m, k, grid_kind_from_string(kind_s), sizes, sol, perturb, seed);
    const std::string csv = convergence_csv(m, rows);
    if (!out.empty()) {
        std::ofstream os(out);
        os << csv;
    }
    std::cout << csv;

    const auto& last = rows.back();
    if (last.errors[m] <= 1e-12) {
        std::printf("# zero errors, rate test skipped\n");
        return 0;
    }
    const double target = double(k + 1 - m) - 0.25;
    std::printf("# e%d rate (finest pair): %.3f, target >= %.2f: %s\n", m, last.rate_m, target,
                last.rate_m >= target ? "pass" : "FAIL");
    return last.rate_m >= target ? 0 : 1;
}

int cmd_report(const std::string& csv_path, const std::string& data_out)
{
    std::ifstream in(csv_path);
    if (!in)
        throw std::runtime_error("cannot open " + csv_path);
    std::vector<std::vector<std::string>> cells;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ','))
            row.push_back(tok);
        cells.push_back(row);
    }
    if (cells.size() < 2)
        throw std::runtime_error("report: empty or header-only CSV " + csv_path);

    // Recompute the rate column from the last error column before rate_m.
    const std::size_t ncol = cells[0].size();
    const std::size_t ecol = ncol - 2;
    for (std::size_t r = 2; r < cells.size(); ++r) {
        const double h0 = std::stod(cells[r - 1][0]), h1 = std::stod(cells[r][0]);
        const double e0 = std::stod(cells[r - 1][ecol]), e1 = std::stod(cells[r][ecol]);
        if (e0 > 0 && e1 > 0)
            cells[r][ncol - 1] = fmt(std::log(e0 / e1) / std::log(h0 / h1));
    }

    std::vector<std::size_t> width(ncol, 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c)
            std::printf("%-*s ", int(width[c]), row[c].c_str());
        std::printf("\n");
    }

    if (!data_out.empty()) {
        std::ofstream os(data_out);
        os << "# " << csv_path << "\n";
        for (std::size_t r = 1; r < cells.size(); ++r) {
            for (std::size_t c = 0; c < cells[r].size(); ++c)
                os << cells[r][c] << (c + 1 < cells[r].size() ? " " : "\n");
        }
    }
    return 0;
}

/// Fill options that were not given on the command line from a JSON config.
template <typename T>
void merge_config(const nlohmann::json& cfg, const CLI::Option* opt, const char* key, T& value)
{
    if (opt->count() == 0 && cfg.contains(key))
        value = cfg.at(key).get<T>();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"H^m-nonconforming virtual element solver for polyharmonic problems"};
    app.require_subcommand(1);

    int m = 3, k = 3, N = 4;
    double perturb = 0.0;
    unsigned seed = 1;
    std::string mesh_kind = "squares", out, polygon_file, solution = "sinm", config_path;
    std::vector<int> sizes{4, 8, 16};

    auto* ce = app.add_subcommand("check-element", "element identity suite on a polygon zoo");
    auto* ce_m = ce->add_option("--m", m, "Sobolev order m >= 3");
    auto* ce_k = ce->add_option("--k", k, "polynomial degree k >= m");
    ce->add_option("--polygon", polygon_file, "JSON file with a single polygon [[x,y],...]");
    (void)ce_m;
    (void)ce_k;

    auto* pt = app.add_subcommand("patch-test", "exact reproduction of a random degree-k solution");
    auto* pt_m = pt->add_option("--m", m);
    auto* pt_k = pt->add_option("--k", k);
    auto* pt_mesh = pt->add_option("--mesh", mesh_kind, "squares|triangles|polygons-perturbed");
    auto* pt_N = pt->add_option("--N", N);
    auto* pt_pert = pt->add_option("--perturb", perturb);
    auto* pt_seed = pt->add_option("--seed", seed);
    pt->add_option("--config", config_path, "JSON config mirroring the flags");

    auto* cv = app.add_subcommand("convergence", "convergence-rate study with CSV output");
    auto* cv_m = cv->add_option("--m", m);
    auto* cv_k = cv->add_option("--k", k);
    auto* cv_mesh = cv->add_option("--mesh", mesh_kind);
    auto* cv_sizes = cv->add_option("--sizes", sizes, "increasing mesh sizes")->delimiter(',');
    auto* cv_sol = cv->add_option("--solution", solution);
    auto* cv_pert = cv->add_option("--perturb", perturb);
    auto* cv_seed = cv->add_option("--seed", seed);
    auto* cv_out = cv->add_option("--out", out, "CSV output path");
    cv->add_option("--config", config_path);

    auto* mm = app.add_subcommand("make-mesh", "generate a mesh file");
    std::string mm_kind = "squares";
    mm->add_option("kind", mm_kind, "squares|triangles|polygons-perturbed")->required();
    mm->add_option("N", N, "grid size")->required();
    mm->add_option("--perturb", perturb);
    mm->add_option("--seed", seed);
    mm->add_option("--out", out, "output path (default mesh.json)");

    auto* rp = app.add_subcommand("report", "render a convergence CSV as a table");
    std::string csv_path, data_out;
    rp->add_option("csv", csv_path, "CSV file")->required();
    rp->add_option("--out", data_out, "gnuplot-compatible data file");

    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in)
                throw std::runtime_error("cannot open config " + config_path);
            in >> cfg;
        }

        if (ce->parsed())
            return cmd_check_element(m, k, polygon_file);
        if (pt->parsed()) {
            merge_config(cfg, pt_m, "m", m);
            merge_config(cfg, pt_k, "k", k);
            merge_config(cfg, pt_mesh, "mesh", mesh_kind);
            merge_config(cfg, pt_N, "N", N);
            merge_config(cfg, pt_pert, "perturb", perturb);
            merge_config(cfg, pt_seed, "seed", seed);
            return cmd_patch_test(m, k, mesh_kind, N, perturb, seed);
        }
        if (cv->parsed()) {
            merge_config(cfg, cv_m, "m", m);
            merge_config(cfg, cv_k, "k", k);
            merge_config(cfg, cv_mesh, "mesh", mesh_kind);
            merge_config(cfg, cv_sizes, "sizes", sizes);
            merge_config(cfg, cv_sol, "solution", solution);
            merge_config(cfg, cv_pert, "perturb", perturb);
            merge_config(cfg, cv_seed, "seed", seed);
            merge_config(cfg, cv_out, "out", out);
            return cmd_convergence(m, k, mesh_kind, sizes, solution, perturb, seed, out);
        }
        if (mm->parsed()) {
            const PolyMesh mesh = make_grid(grid_kind_from_string(mm_kind), N, perturb, seed);
            const std::string path = out.empty() ? "mesh.json" : out;
            save_mesh(mesh, path);
            std::printf("wrote %s: %d vertices, %d edges, %d cells\n", path.c_str(),
                        mesh.num_vertices(), mesh.num_edges(), mesh.num_cells());
            return 0;
        }
        if (rp->parsed())
            return cmd_report(csv_path, data_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
