#include "pvem/green.hpp"

#include <cmath>
#include <stdexcept>

namespace pvem {

Eigen::VectorXd direction_symbol(const std::array<double, 2>& v1, int n1,
                                 const std::array<double, 2>& v2, int n2)
{
    auto power_coeffs = [](const std::array<double, 2>& v, int n) {
        Eigen::VectorXd c(n + 1);
        for (int i = 0; i <= n; ++i)
            c[i] = binomial(n, i) * std::pow(v[0], n - i) * std::pow(v[1], i);
        return c;
    };
    const Eigen::VectorXd a = power_coeffs(v1, n1);
    const Eigen::VectorXd b = power_coeffs(v2, n2);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n1 + n2 + 1);
    for (int i = 0; i <= n1; ++i)
        for (int j = 0; j <= n2; ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

namespace {

/// Contract a symmetric tensor of 1D polys with nu (ncount times) and
/// t (order - ncount times).
Poly1D frame_contraction(const TensorPoly1D& tau, const EdgeFrame& fr, int ncount)
{
    return tau.contract_full(fr.normal, ncount, fr.tangent, tau.order - ncount);
}

} // namespace

LinearFunctional reduce_edge_pairing(const EdgePairing& ep, const ElementGeometry& geo,
                                     const DofLayout& layout)
{
    const int s = ep.tau.order;
    const int eloc = ep.edge_loc;
    const EdgeFrame& fr = geo.edge_frames[eloc];
    const double hK = geo.diameter;
    const int nv = geo.num_vertices();

    LinearFunctional f{Eigen::VectorXd::Zero(layout.size())};

    // Endpoints in the global frame: start at u = -1/2, end at u = +1/2,
    // with endpoint signs nu_{e,delta} = -1 / +1.
    const int start_loc = geo.edge_start_loc[eloc];
    const int end_loc = geo.edge_signs[eloc] > 0 ? (start_loc + 1) % nv
                                                 : (start_loc + nv - 1) % nv;

    // Edge-moment terms: j-th normal derivative paired with
    // (-1)^{s-j} C(s,j) d_t^{s-j} (tau contracted with nu^j t^{s-j}).
    for (int j = 0; j <= s; ++j) {
        Poly1D g = frame_contraction(ep.tau, fr, j);
        for (int d = 0; d < s - j; ++d)
            g = g.derive_arclength(fr.length);
        g = g * (((s - j) % 2 ? -1.0 : 1.0) * binomial(s, j));

        const int momdeg = layout.edge_moment_degree(j);
        if (momdeg < 0) {
            if (g.coeffs().cwiseAbs().maxCoeff() > 1e-9)
                throw std::runtime_error("reduce_edge_pairing: coefficient degree exceeds "
                                         "the edge moment space (caller bug)");
            continue;
        }
        const Eigen::VectorXd c = g.coeffs_truncated(momdeg);
        const double unscale = std::pow(fr.length, 1 - j);
        for (int q = 0; q <= momdeg; ++q)
            f.coeffs[layout.edge_dof(eloc, j, q)] += c[q] * unscale;
    }

    // Endpoint terms: vertex derivatives of order j <= s-1 <= m-2.
    for (int j = 0; j <= s - 1; ++j) {
        for (int l = 0; l <= j; ++l) {
            Poly1D w = frame_contraction(ep.tau, fr, l);
            for (int d = 0; d < s - 1 - j; ++d)
                w = w.derive_arclength(fr.length);
            const double sgn = ((s - 1 - j) % 2 ? -1.0 : 1.0) * binomial(s, l);
            // d^j v / dt^{j-l} dnu^l as Cartesian vertex-dof components.
            const Eigen::VectorXd wc = direction_symbol(fr.tangent, j - l, fr.normal, l);
            const double hscale = std::pow(hK, -j);
            for (int endpoint = 0; endpoint < 2; ++endpoint) {
                const double u = endpoint ? 0.5 : -0.5;
                const double nu_delta = endpoint ? 1.0 : -1.0;
                const int vloc = endpoint ? end_loc : start_loc;
                const double val = sgn * nu_delta * w.evaluate(u);
                for (int c = 0; c <= j; ++c)
                    f.coeffs[layout.vertex_dof(vloc, j, c)] += val * wc[c] * hscale;
            }
        }
    }
    return f;
}

LinearFunctional pairing_functional(const Polynomial& p, const ElementGeometry& geo,
                                    const DofLayout& layout)
{
    const int m = layout.m();
    const int k = layout.k();
    if (p.degree() > k)
        throw std::invalid_argument("pairing_functional: deg p exceeds k");

    LinearFunctional f{Eigen::VectorXd::Zero(layout.size())};

    // Interior part: ((-Lap)^m p, v)_K through the interior moment dofs.
    if (k - 2 * m >= 0) {
        const Polynomial q = p.laplacian_power(m);
        const Eigen::VectorXd c = q.coeffs_truncated(k - 2 * m);
        for (int r = 0; r < c.size(); ++r)
            f.coeffs[layout.interior_dof(r)] += c[r] * geo.area;
    }

    // Edge parts: the identity
    //   (grad^m p, grad^m v)_K = ((-Lap)^m p, v)_K
    //     + sum_e sum_i (grad^{i+1}((-Lap)^{m-1-i} p) . nu_{K,e}, grad^i v)_e
    // where the alternating sign has been folded into the Laplacian powers.
    for (int eloc = 0; eloc < geo.num_vertices(); ++eloc) {
        const EdgeFrame& fr = geo.edge_frames[eloc];
        const double sKe = double(geo.edge_signs[eloc]);
        const std::array<double, 2> nu_K{sKe * fr.normal[0], sKe * fr.normal[1]};

        // Edge endpoints in global-frame order.
        const int nv = geo.num_vertices();
        const int sv = geo.edge_start_loc[eloc];
        const int ev = geo.edge_signs[eloc] > 0 ? (sv + 1) % nv : (sv + nv - 1) % nv;
        const auto& pa = geo.verts[sv];
        const auto& pb = geo.verts[ev];

        for (int i = 0; i <= m - 1; ++i) {
            const Polynomial base = (m - 1 - i == 0) ? p : p.laplacian_power(m - 1 - i);
            if (base.coeffs().isZero())
                continue;
            const TensorPoly grad = grad_tensor(base, i + 1);

            TensorPoly1D restricted;
            restricted.order = i + 1;
            for (const auto& comp : grad.comps)
                restricted.comps.push_back(restrict_to_edge(comp, pa, pb));

            EdgePairing ep{eloc, restricted.contract(nu_K)};
            f += reduce_edge_pairing(ep, geo, layout);
        }
    }
    return f;
}

Eigen::MatrixXd constraint_functionals(const ElementGeometry& geo, int m,
                                       const DofLayout& layout)
{
    const int nm1 = poly_space_dim(m - 1);
    const int nv = geo.num_vertices();
    const double hK = geo.diameter;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nm1, layout.size());

    // Block 1: sum over vertices of the Cartesian components of grad^j v.
    int row = 0;
    for (int j = 0; j <= m - 2; ++j)
        for (int c = 0; c <= j; ++c, ++row)
            for (int v = 0; v < nv; ++v)
                C(row, layout.vertex_dof(v, j, c)) += std::pow(hK, -j);

    // Block 2: sum over edges of the edge averages of grad^{m-1} v.
    // Cartesian component c is recovered from the edge-frame components;
    // the pure normal one is an edge-moment dof, the rest come from the
    // fundamental theorem of calculus and order-(m-2) vertex data.
    for (int c = 0; c <= m - 1; ++c) {
        const int r = row + c;
        for (int eloc = 0; eloc < nv; ++eloc) {
            const EdgeFrame& fr = geo.edge_frames[eloc];
            const int sv = geo.edge_start_loc[eloc];
            const int ev = geo.edge_signs[eloc] > 0 ? (sv + 1) % nv : (sv + nv - 1) % nv;
            // d_x^{m-1-c} d_y^c in powers of (d_t, d_nu); index a = nu-count.
            const Eigen::VectorXd w = direction_symbol({fr.tangent[0], fr.normal[0]}, m - 1 - c,
                                                       {fr.tangent[1], fr.normal[1]}, c);
            for (int a = 0; a <= m - 1; ++a) {
                if (w[a] == 0.0)
                    continue;
                if (a == m - 1) {
                    C(r, layout.edge_dof(eloc, m - 1, 0)) += w[a] * std::pow(fr.length, 1 - m);
                } else {
                    // g = d^{m-2} v / dt^{m-2-a} dnu^a; Q_0(d_t g) = (g(end)-g(start))/|e|.
                    const Eigen::VectorXd u =
                        direction_symbol(fr.tangent, m - 2 - a, fr.normal, a);
                    const double fac = w[a] * std::pow(hK, 2 - m) / fr.length;
                    for (int cc = 0; cc <= m - 2; ++cc) {
                        C(r, layout.vertex_dof(ev, m - 2, cc)) += fac * u[cc];
                        C(r, layout.vertex_dof(sv, m - 2, cc)) -= fac * u[cc];
                    }
                }
            }
        }
    }
    return C;
}

Eigen::VectorXd constraint_values_on_poly(const ElementGeometry& geo, int m,
                                          const Polynomial& p)
{
    const int nm1 = poly_space_dim(m - 1);
    const int nv = geo.num_vertices();
    Eigen::VectorXd vals = Eigen::VectorXd::Zero(nm1);

    int row = 0;
    for (int j = 0; j <= m - 2; ++j)
        for (int c = 0; c <= j; ++c, ++row) {
            const Polynomial d = p.derive({j - c, c});
            for (int v = 0; v < nv; ++v)
                vals[row] += d.evaluate(geo.verts[v][0], geo.verts[v][1]);
        }

    for (int c = 0; c <= m - 1; ++c, ++row) {
        const Polynomial d = p.derive({m - 1 - c, c});
        for (int eloc = 0; eloc < nv; ++eloc) {
            const int sv = geo.edge_start_loc[eloc];
            const int evn = geo.edge_signs[eloc] > 0 ? (sv + 1) % nv
                                                     : (sv + nv - 1) % nv;
            const Poly1D r = restrict_to_edge(d, geo.verts[sv], geo.verts[evn]);
            vals[row] += integrate_edge(r, geo.edge_frames[eloc].length) /
                         geo.edge_frames[eloc].length;
        }
    }
    return vals;
}

} // namespace pvem
