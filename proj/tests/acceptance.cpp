// Acceptance harness: one line per criterion, "pass" or "FAIL (worst case)".
// Exit status is the number of failed criteria.

#include "pvem/assembly.hpp"
#include "pvem/solutions.hpp"
#include "pvem/zoo.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace pvem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Worst {
    double value = 0.0;
    std::string where;
    void update(double v, const std::string& w)
    {
        if (v > value) {
            value = v;
            where = w;
        }
    }
};

std::string tag(const std::string& cell, int m, int k)
{
    return cell + " m=" + std::to_string(m) + " k=" + std::to_string(k);
}

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

int g_failures = 0;

void report(int n, bool ok, const std::string& detail, double secs)
{
    std::printf("CRITERION %d: %s (%s; %.1f s)\n", n, ok ? "pass" : "FAIL",
                detail.c_str(), secs);
    if (!ok)
        ++g_failures;
}

// ---- criterion 1: Pi*D = I and G = B*D across the zoo sweep ----
void criterion1()
{
    const auto t0 = Clock::now();
    Worst wI, wG;
    for (const auto& np : polygon_zoo()) {
        const auto geo = element_geometry(np.verts);
        for (int m : {3, 4})
            for (int k = m; k <= m + 5; ++k) {
                const ElementMatrices em = element_matrices(geo, m, k);
                const int nk = poly_space_dim(k);
                wI.update((em.Pi * em.D - Eigen::MatrixXd::Identity(nk, nk))
                              .cwiseAbs()
                              .maxCoeff(),
                          tag(np.name, m, k));
                wG.update((em.G - em.B * em.D).cwiseAbs().maxCoeff() /
                              em.G.cwiseAbs().maxCoeff(),
                          tag(np.name, m, k));
            }
    }
    const double secs = seconds_since(t0);
    const bool ok = wI.value <= 1e-9 && wG.value <= 1e-9 && secs < 10.0;
    char buf[256];
    std::snprintf(buf, sizeof buf, "max|PiD-I|=%.2e at %s, rel|G-BD|=%.2e at %s",
                  wI.value, wI.where.c_str(), wG.value, wG.where.c_str());
    report(1, ok, buf, secs);
}

// ---- criterion 2: pairing rows against the seminorm Gram matrix ----
void criterion2()
{
    const auto t0 = Clock::now();
    Worst w;
    for (const auto& np : polygon_zoo()) {
        const auto geo = element_geometry(np.verts);
        for (int m : {3, 4})
            for (int k = m; k <= m + 5; ++k) {
                const DofLayout layout(geo, m, k);
                const ElementMatrices em = element_matrices(geo, m, k);
                const int nk = poly_space_dim(k);
                const int nm1 = poly_space_dim(m - 1);
                const auto idx = enumerate_multiindices(k);
                // direct quadrature oracle for (grad^m m_r, grad^m m_s)
                Eigen::MatrixXd gram(nk - nm1, nk);
                std::vector<TensorPoly> grads;
                grads.reserve(idx.size());
                for (const auto& al : idx)
                    grads.push_back(
                        grad_tensor(Polynomial::monomial(geo.frame(), al), m));
                for (int r = nm1; r < nk; ++r)
                    for (int s = 0; s < nk; ++s)
                        gram(r - nm1, s) = integrate_polygon(
                            tensor_contraction(grads[r], grads[s]), geo.verts);
                // pairing functionals applied to polynomial dof vectors
                Eigen::MatrixXd paired(nk - nm1, nk);
                std::vector<Eigen::VectorXd> chis;
                for (const auto& al : idx)
                    chis.push_back(dof_evaluate(
                        geo, layout, Polynomial::monomial(geo.frame(), al)));
                for (int r = nm1; r < nk; ++r) {
                    const auto fn = pairing_functional(
                        Polynomial::monomial(geo.frame(), idx[r]), geo, layout);
                    for (int s = 0; s < nk; ++s)
                        paired(r - nm1, s) = fn.apply(chis[s]);
                }
                w.update((paired - gram).cwiseAbs().maxCoeff() /
                             gram.cwiseAbs().maxCoeff(),
                         tag(np.name, m, k));
                (void)em;
            }
    }
    const double secs = seconds_since(t0);
    const bool ok = w.value <= 1e-10 && secs < 30.0;
    char buf[256];
    std::snprintf(buf, sizeof buf, "max rel err=%.2e at %s", w.value,
                  w.where.c_str());
    report(2, ok, buf, secs);
}

// ---- criterion 3: symmetry, positivity, numerical rank of A ----
void criterion3()
{
    const auto t0 = Clock::now();
    Worst wsym, wneg;
    int rank_bad = 0;
    std::string rank_where;
    for (const auto& np : polygon_zoo()) {
        const auto geo = element_geometry(np.verts);
        for (int m : {3, 4})
            for (int k = m; k <= m + 5; ++k) {
                const ElementMatrices em = element_matrices(geo, m, k);
                const int N = int(em.A.rows());
                wsym.update((em.A - em.A.transpose()).cwiseAbs().maxCoeff() /
                                em.A.cwiseAbs().maxCoeff(),
                            tag(np.name, m, k));
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                    em.A, Eigen::EigenvaluesOnly);
                const Eigen::VectorXd ev = es.eigenvalues();
                const double lmax = ev[N - 1];
                wneg.update(-ev[0] / lmax, tag(np.name, m, k));
                int rank = 0;
                for (int i = 0; i < N; ++i)
                    if (ev[i] > 1e-8 * lmax)
                        ++rank;
                if (rank != N - poly_space_dim(m - 1)) {
                    ++rank_bad;
                    if (rank_where.empty())
                        rank_where = tag(np.name, m, k) + " rank=" +
                                     std::to_string(rank) + "/" +
                                     std::to_string(N - poly_space_dim(m - 1));
                }
            }
    }
    const double secs = seconds_since(t0);
    const bool ok = wsym.value <= 1e-12 && wneg.value <= 1e-9 && rank_bad == 0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "sym=%.1e, min eig=%.1e*lmax, rank misses=%d%s%s", wsym.value,
                  -wneg.value, rank_bad, rank_bad ? " first at " : "",
                  rank_where.c_str());
    report(3, ok, buf, secs);
}

// ---- criterion 4: patch test on squares and perturbed meshes ----
void criterion4()
{
    const auto t0 = Clock::now();
    Worst w;
    const int m = 3;
    for (int k = 3; k <= 8; ++k)
        for (GridKind kind : {GridKind::Squares, GridKind::PolygonsPerturbed}) {
            const PolyMesh mesh = make_grid(kind, 4);
            const ScalarField p = seeded_polynomial(k, 40u + unsigned(k));
            const ScalarField f = polyharmonic_forcing(p, m);
            const GlobalDofMap map(mesh, m, k);
            const Eigen::VectorXd uh = inhomogeneous_bc_solve(mesh, m, k, f, p);
            const Eigen::VectorXd chi = global_interpolate(mesh, map, p);
            const double rel = (uh - chi).cwiseAbs().maxCoeff() /
                               std::max(1.0, chi.cwiseAbs().maxCoeff());
            w.update(rel, (kind == GridKind::Squares ? "squares" : "perturbed") +
                              std::string(" k=") + std::to_string(k));
        }
    const double secs = seconds_since(t0);
    const bool ok = w.value <= 1e-6 && secs < 60.0;
    char buf[256];
    std::snprintf(buf, sizeof buf, "max rel dof err=%.2e at %s", w.value,
                  w.where.c_str());
    report(4, ok, buf, secs);
}

// ---- criterion 5: convergence of the m-th broken seminorm error ----
void criterion5()
{
    const int m = 3;
    const ManufacturedSolution sol = trig_solution(m, m);
    char buf[256];
    std::string detail;
    bool ok = true;
    double secs_total = 0.0;
    for (int k : {3, 4}) {
        const auto t0 = Clock::now();
        std::vector<double> em_err;
        for (int N : {4, 8, 16}) {
            const PolyMesh mesh = make_grid(GridKind::Squares, N);
            const LinearSystem sys = assemble(mesh, m, k, sol.f);
            const Eigen::VectorXd x = solve(sys);
            Eigen::VectorXd full = Eigen::VectorXd::Zero(sys.map.size());
            for (int g : sys.map.free_dofs())
                full[g] = x[sys.map.free_index(g)];
            em_err.push_back(error_norms(mesh, sys.map, full, sol.u)[m]);
        }
        const double secs = seconds_since(t0);
        secs_total += secs;
        const double rate = std::log2(em_err[1] / em_err[2]);
        const double need = (k == 3) ? 0.75 : 1.75;
        const bool this_ok = rate >= need && secs <= 120.0;
        ok = ok && this_ok;
        std::snprintf(buf, sizeof buf, "%sk=%d rate=%.3f (need %.2f)",
                      detail.empty() ? "" : "; ", k, rate, need);
        detail += buf;
    }
    report(5, ok, detail, secs_total);
}

// ---- criterion 6: load-vector exactness for constant forcing, m=3 k=6 ----
void criterion6()
{
    const auto t0 = Clock::now();
    const int m = 3, k = 6;
    const auto geo = element_geometry(polygon_zoo()[1].verts); // unit square
    Polynomial one(geo.frame(), 0);
    one.coeffs()[0] = 2.5;
    const ScalarField f = ScalarField::from_polynomial(one, "const");
    const DofLayout layout(geo, m, k);
    const ElementMatrices em = element_matrices(geo, m, k, f);
    Worst w;
    for (const auto& al : enumerate_multiindices(k)) {
        const Polynomial p = Polynomial::monomial(geo.frame(), al);
        const Eigen::VectorXd chi = dof_evaluate(geo, layout, p);
        const double exact = integrate_polygon(p * one.coeffs()[0], geo.verts);
        w.update(std::abs(em.b.dot(chi) - exact),
                 "x^" + std::to_string(al.a1) + "y^" + std::to_string(al.a2));
    }
    const double secs = seconds_since(t0);
    const bool ok = w.value <= 1e-10;
    char buf[256];
    std::snprintf(buf, sizeof buf, "max |b.chi(p)-(f,p)|=%.2e at %s", w.value,
                  w.where.c_str());
    report(6, ok, buf, secs);
}

// ---- criterion 7: reduced dof set rank on a triangle ----
void criterion7()
{
    const auto t0 = Clock::now();
    const auto geo = element_geometry(polygon_zoo()[0].verts); // triangle
    const DofLayout layout(geo, 3, 5);
    std::vector<int> selected;
    for (int v = 0; v < 3; ++v)
        for (int j = 0; j <= 1; ++j)
            for (int c = 0; c <= j; ++c)
                selected.push_back(layout.vertex_dof(v, j, c));
    for (int e = 0; e < 3; ++e) {
        selected.push_back(layout.edge_dof(e, 0, 0));
        selected.push_back(layout.edge_dof(e, 2, 0));
    }
    const SerendipityResult res = serendipity_check(geo, 3, 5, 4, selected);
    const double secs = seconds_since(t0);
    const bool ok = res.rank == 15 && res.satisfied && secs < 1.0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "rank=%d of 15", res.rank);
    report(7, ok, buf, secs);
}

} // namespace

int main()
{
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    std::printf("%d of 7 criteria failed\n", g_failures);
    return g_failures;
}
