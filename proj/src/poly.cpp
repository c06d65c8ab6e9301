#include "pvem/poly.hpp"

#include <cmath>
#include <stdexcept>

namespace pvem {

Polynomial::Polynomial(ScaledFrame2D frame, int degree, Eigen::VectorXd coeffs)
    : frame_(frame), degree_(degree), coeffs_(std::move(coeffs))
{
    if (coeffs_.size() != poly_space_dim(degree))
        throw std::invalid_argument("Polynomial: coefficient length does not match degree");
}

Polynomial Polynomial::monomial(ScaledFrame2D frame, const MultiIndex& alpha)
{
    Polynomial p(frame, alpha.order());
    p.coeffs_[multiindex_position(alpha)] = 1.0;
    return p;
}

double Polynomial::evaluate(double x, double y) const
{
    const double xi = (x - frame_.center[0]) / frame_.h;
    const double eta = (y - frame_.center[1]) / frame_.h;
    // Powers by degree block.
    double val = 0.0;
    std::vector<double> xp(degree_ + 1, 1.0), yp(degree_ + 1, 1.0);
    for (int i = 1; i <= degree_; ++i) {
        xp[i] = xp[i - 1] * xi;
        yp[i] = yp[i - 1] * eta;
    }
    int idx = 0;
    for (int d = 0; d <= degree_; ++d)
        for (int a2 = 0; a2 <= d; ++a2, ++idx)
            val += coeffs_[idx] * xp[d - a2] * yp[a2];
    return val;
}

Polynomial Polynomial::derive(const MultiIndex& alpha) const
{
    const int newdeg = degree_ - alpha.order();
    if (newdeg < 0)
        return Polynomial(frame_, 0);
    Polynomial out(frame_, newdeg);
    const double hpow = std::pow(frame_.h, alpha.order());
    for (int d = alpha.order(); d <= degree_; ++d) {
        for (int a2 = 0; a2 <= d; ++a2) {
            const int a1 = d - a2;
            if (a1 < alpha.a1 || a2 < alpha.a2)
                continue;
            const double c = coeffs_[d * (d + 1) / 2 + a2];
            if (c == 0.0)
                continue;
            double fac = 1.0;
            for (int i = 0; i < alpha.a1; ++i)
                fac *= double(a1 - i);
            for (int i = 0; i < alpha.a2; ++i)
                fac *= double(a2 - i);
            const MultiIndex beta{a1 - alpha.a1, a2 - alpha.a2};
            out.coeffs_[multiindex_position(beta)] += c * fac / hpow;
        }
    }
    return out;
}

Polynomial Polynomial::laplacian_power(int m) const
{
    if (m < 1)
        throw std::invalid_argument("laplacian_power: m must be >= 1");
    Polynomial out = *this;
    for (int i = 0; i < m; ++i) {
        Polynomial lap = out.derive({2, 0}) + out.derive({0, 2});
        out = lap * -1.0;
    }
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& other) const
{
    const Polynomial& lo = degree_ <= other.degree_ ? *this : other;
    const Polynomial& hi = degree_ <= other.degree_ ? other : *this;
    Polynomial out = hi;
    out.coeffs_.head(lo.coeffs_.size()) += lo.coeffs_;
    return out;
}

Polynomial Polynomial::operator*(double s) const
{
    Polynomial out = *this;
    out.coeffs_ *= s;
    return out;
}

Eigen::VectorXd Polynomial::coeffs_truncated(int newdeg) const
{
    const int ncoef = poly_space_dim(newdeg);
    if (ncoef >= coeffs_.size()) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(ncoef);
        out.head(coeffs_.size()) = coeffs_;
        return out;
    }
    const double scale = coeffs_.cwiseAbs().maxCoeff();
    const double tail = coeffs_.tail(coeffs_.size() - ncoef).cwiseAbs().maxCoeff();
    if (tail > 1e-9 * std::max(scale, 1e-300))
        throw std::runtime_error("Polynomial::coeffs_truncated: nonvanishing tail");
    return coeffs_.head(ncoef);
}

double Poly1D::evaluate(double u) const
{
    double val = 0.0;
    for (int i = int(coeffs_.size()) - 1; i >= 0; --i)
        val = val * u + coeffs_[i];
    return val;
}

Poly1D Poly1D::derive_arclength(double edge_length) const
{
    if (coeffs_.size() <= 1)
        return zero();
    Eigen::VectorXd out(coeffs_.size() - 1);
    for (int i = 1; i < coeffs_.size(); ++i)
        out[i - 1] = coeffs_[i] * double(i) / edge_length;
    return Poly1D(std::move(out));
}

Poly1D Poly1D::operator+(const Poly1D& other) const
{
    const auto& lo = coeffs_.size() <= other.coeffs_.size() ? coeffs_ : other.coeffs_;
    const auto& hi = coeffs_.size() <= other.coeffs_.size() ? other.coeffs_ : coeffs_;
    Eigen::VectorXd out = hi;
    out.head(lo.size()) += lo;
    return Poly1D(std::move(out));
}

Poly1D Poly1D::operator*(double s) const
{
    return Poly1D(coeffs_ * s);
}

Poly1D Poly1D::operator*(const Poly1D& other) const
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(coeffs_.size() + other.coeffs_.size() - 1);
    for (int i = 0; i < coeffs_.size(); ++i)
        for (int j = 0; j < other.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * other.coeffs_[j];
    return Poly1D(std::move(out));
}

Eigen::VectorXd Poly1D::coeffs_truncated(int newdeg) const
{
    const int ncoef = newdeg + 1;
    if (ncoef >= coeffs_.size()) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(ncoef);
        out.head(coeffs_.size()) = coeffs_;
        return out;
    }
    const double scale = coeffs_.cwiseAbs().maxCoeff();
    const double tail = coeffs_.tail(coeffs_.size() - ncoef).cwiseAbs().maxCoeff();
    if (tail > 1e-9 * std::max(scale, 1e-300))
        throw std::runtime_error("Poly1D::coeffs_truncated: nonvanishing tail");
    return coeffs_.head(ncoef);
}

TensorPoly TensorPoly::contract(const std::array<double, 2>& v) const
{
    if (order < 1)
        throw std::invalid_argument("TensorPoly::contract: order must be >= 1");
    TensorPoly out;
    out.order = order - 1;
    out.comps.reserve(order);
    for (int a = 0; a < order; ++a)
        out.comps.push_back(comps[a + 1] * v[0] + comps[a] * v[1]);
    return out;
}

TensorPoly1D TensorPoly1D::contract(const std::array<double, 2>& v) const
{
    if (order < 1)
        throw std::invalid_argument("TensorPoly1D::contract: order must be >= 1");
    TensorPoly1D out;
    out.order = order - 1;
    out.comps.reserve(order);
    for (int a = 0; a < order; ++a)
        out.comps.push_back(comps[a + 1] * v[0] + comps[a] * v[1]);
    return out;
}

Poly1D TensorPoly1D::contract_full(const std::array<double, 2>& v1, int n1,
                                   const std::array<double, 2>& v2, int n2) const
{
    if (n1 + n2 != order)
        throw std::invalid_argument("TensorPoly1D::contract_full: order mismatch");
    TensorPoly1D cur = *this;
    for (int i = 0; i < n1; ++i)
        cur = cur.contract(v1);
    for (int i = 0; i < n2; ++i)
        cur = cur.contract(v2);
    return cur.comps[0];
}

TensorPoly grad_tensor(const Polynomial& p, int s)
{
    if (s < 0)
        throw std::invalid_argument("grad_tensor: s must be >= 0");
    TensorPoly out;
    out.order = s;
    out.comps.reserve(s + 1);
    for (int a = 0; a <= s; ++a)
        out.comps.push_back(p.derive({a, s - a}));
    return out;
}

Polynomial tensor_contraction(const TensorPoly& a, const TensorPoly& b)
{
    if (a.order != b.order)
        throw std::invalid_argument("tensor_contraction: order mismatch");
    Polynomial out(a.comps.empty() ? ScaledFrame2D{} : a.comps[0].frame(), 0);
    bool first = true;
    for (int i = 0; i <= a.order; ++i) {
        // Naive product via coefficients would need 2D multiplication; the
        // callers only ever integrate this, so keep it as a quadrature-side
        // object: here we form the product polynomial explicitly.
        const Polynomial& pa = a.comps[i];
        const Polynomial& pb = b.comps[i];
        const int deg = std::max(0, pa.degree()) + std::max(0, pb.degree());
        Polynomial prod(pa.frame(), deg);
        int ia = 0;
        for (int da = 0; da <= pa.degree(); ++da)
            for (int a2 = 0; a2 <= da; ++a2, ++ia) {
                const double ca = pa.coeffs()[ia];
                if (ca == 0.0)
                    continue;
                int ib = 0;
                for (int db = 0; db <= pb.degree(); ++db)
                    for (int b2 = 0; b2 <= db; ++b2, ++ib) {
                        const double cb = pb.coeffs()[ib];
                        if (cb == 0.0)
                            continue;
                        const MultiIndex g{(da - a2) + (db - b2), a2 + b2};
                        prod.coeffs()[multiindex_position(g)] += ca * cb;
                    }
            }
        const Polynomial term = prod * binomial(a.order, i);
        out = first ? term : out + term;
        first = false;
    }
    return out;
}

double integrate_polygon(const Polynomial& p,
                         const std::vector<std::array<double, 2>>& verts)
{
    const auto rule = polygon_rule(verts, std::max(0, p.degree()));
    double s = 0.0;
    for (const auto& q : rule)
        s += q.w * p.evaluate(q.x, q.y);
    return s;
}

double integrate_polygon_product(const Polynomial& p, const Polynomial& q,
                                 const std::vector<std::array<double, 2>>& verts)
{
    const auto rule = polygon_rule(verts, std::max(0, p.degree()) + std::max(0, q.degree()));
    double s = 0.0;
    for (const auto& pt : rule)
        s += pt.w * p.evaluate(pt.x, pt.y) * q.evaluate(pt.x, pt.y);
    return s;
}

Poly1D restrict_to_edge(const Polynomial& p,
                        const std::array<double, 2>& a,
                        const std::array<double, 2>& b)
{
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    if (len <= 0.0)
        throw std::invalid_argument("restrict_to_edge: zero-length edge");
    // x(u) = mid + u * len * t, u in [-1/2, 1/2]; in scaled coordinates
    // xi(u) and eta(u) are affine in u.
    const std::array<double, 2> mid{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    const auto& fr = p.frame();
    const double c1 = (mid[0] - fr.center[0]) / fr.h;
    const double c2 = (mid[1] - fr.center[1]) / fr.h;
    const double d1 = (b[0] - a[0]) / fr.h;
    const double d2 = (b[1] - a[1]) / fr.h;

    const int deg = std::max(0, p.degree());
    // Powers of the two affine factors.
    std::vector<Poly1D> pow1(deg + 1), pow2(deg + 1);
    Eigen::VectorXd lin1(2), lin2(2);
    lin1 << c1, d1;
    lin2 << c2, d2;
    pow1[0] = Poly1D(Eigen::VectorXd::Ones(1));
    pow2[0] = Poly1D(Eigen::VectorXd::Ones(1));
    for (int i = 1; i <= deg; ++i) {
        pow1[i] = pow1[i - 1] * Poly1D(lin1);
        pow2[i] = pow2[i - 1] * Poly1D(lin2);
    }

    Poly1D out = Poly1D::zero();
    int idx = 0;
    for (int d = 0; d <= p.degree(); ++d)
        for (int a2 = 0; a2 <= d; ++a2, ++idx) {
            const double c = p.coeffs()[idx];
            if (c != 0.0)
                out = out + pow1[d - a2] * pow2[a2] * c;
        }
    return out;
}

double integrate_edge(const Poly1D& p, double edge_length)
{
    if (edge_length <= 0.0)
        throw std::invalid_argument("integrate_edge: zero-length edge");
    double s = 0.0;
    for (int i = 0; i < p.coeffs().size(); i += 2)
        s += p.coeffs()[i] * 2.0 * std::pow(0.5, i + 1) / double(i + 1);
    return s * edge_length;
}

MassMatrices mass_matrices(const std::vector<std::array<double, 2>>& verts,
                           const ScaledFrame2D& frame, int m, int k)
{
    if (k < m)
        throw std::invalid_argument("mass_matrices: k must be >= m");
    const int nk = poly_space_dim(k);
    const auto idxs = enumerate_multiindices(k);
    std::vector<Polynomial> mono;
    mono.reserve(nk);
    for (const auto& al : idxs)
        mono.push_back(Polynomial::monomial(frame, al));

    // One full Gram matrix; the three matrices are leading blocks of it.
    Eigen::MatrixXd gram(nk, nk);
    const auto rule = polygon_rule(verts, 2 * k);
    Eigen::MatrixXd vals(long(rule.size()), nk);
    for (std::size_t q = 0; q < rule.size(); ++q)
        for (int j = 0; j < nk; ++j)
            vals(long(q), j) = mono[j].evaluate(rule[q].x, rule[q].y);
    Eigen::VectorXd w(long(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q)
        w[long(q)] = rule[q].w;
    gram = vals.transpose() * w.asDiagonal() * vals;
    gram = 0.5 * (gram + gram.transpose()).eval();

    MassMatrices out;
    const int nm1 = poly_space_dim(m - 1);
    const int nk2m = poly_space_dim(k - 2 * m);
    out.Mbar = gram.topLeftCorner(nm1, nm1);
    out.Mtilde = gram.topLeftCorner(nk2m, nk2m);
    out.M = gram.topRows(nm1);
    return out;
}

} // namespace pvem
