#include "pvem/solutions.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

namespace pvem {

namespace {

using cplx = std::complex<double>;

/// sin^p(pi t) = sum_r coef[r] * exp(i * (2r - p) * pi * t); the sum is
/// real by conjugate symmetry.
struct TrigPower {
    int power;
    std::vector<cplx> coef;  // index r = 0..power
    std::vector<double> freq; // (2r - power) * pi

    explicit TrigPower(int p) : power(p)
    {
        const cplx inv2i = 1.0 / (cplx(0.0, 2.0));
        cplx scale = 1.0;
        for (int i = 0; i < p; ++i)
            scale *= inv2i;
        for (int r = 0; r <= p; ++r) {
            const double sign = ((p - r) % 2) ? -1.0 : 1.0;
            coef.push_back(scale * sign * binomial(p, r));
            freq.push_back((2.0 * r - p) * M_PI);
        }
    }
};

} // namespace

ManufacturedSolution trig_solution(int power, int m)
{
    auto tp = std::make_shared<TrigPower>(power);

    ScalarField u;
    u.name = "sin" + std::to_string(power);
    u.max_order = 1000;
    u.deriv = [tp](int ax, int ay, double x, double y) {
        cplx acc = 0.0;
        for (std::size_t r = 0; r < tp->coef.size(); ++r) {
            const cplx gx = tp->coef[r] * std::pow(cplx(0.0, tp->freq[r]), ax) *
                            std::exp(cplx(0.0, tp->freq[r] * x));
            for (std::size_t s = 0; s < tp->coef.size(); ++s) {
                const cplx gy = tp->coef[s] * std::pow(cplx(0.0, tp->freq[s]), ay) *
                                std::exp(cplx(0.0, tp->freq[s] * y));
                acc += gx * gy;
            }
        }
        return acc.real();
    };

    ScalarField f;
    f.name = u.name + "_rhs";
    f.max_order = 0;
    f.deriv = [tp, m](int ax, int ay, double x, double y) {
        if (ax != 0 || ay != 0)
            throw std::runtime_error("forcing term: derivatives not provided");
        cplx acc = 0.0;
        for (std::size_t r = 0; r < tp->coef.size(); ++r)
            for (std::size_t s = 0; s < tp->coef.size(); ++s) {
                const double lam = tp->freq[r] * tp->freq[r] + tp->freq[s] * tp->freq[s];
                acc += tp->coef[r] * tp->coef[s] * std::pow(lam, m) *
                       std::exp(cplx(0.0, tp->freq[r] * x + tp->freq[s] * y));
            }
        return acc.real();
    };

    ManufacturedSolution sol;
    sol.name = u.name;
    sol.u = std::move(u);
    sol.f = std::move(f);
    sol.homogeneous_bc = power >= m;
    return sol;
}

ManufacturedSolution zero_solution()
{
    ManufacturedSolution sol;
    sol.name = "zero";
    sol.u = ScalarField::zero();
    sol.f = ScalarField::zero();
    return sol;
}

void ManufacturedSolution::check_consistency(int m) const
{
    const double pts[5][2] = {
        {0.31, 0.47}, {0.62, 0.19}, {0.13, 0.83}, {0.77, 0.71}, {0.42, 0.58}};
    const double h = 1e-3;
    for (const auto& pt : pts) {
        // (-Lap)^m via iterated central differences on the analytic
        // derivatives of u: one FD Laplacian applied to the exact
        // derivatives of order 2(m-1).
        double fd = 0.0;
        for (int j = 0; j <= m - 1; ++j) {
            const double mult = binomial(m - 1, j);
            const int ax = 2 * (m - 1 - j), ay = 2 * j;
            const double dxx = (u.deriv(ax, ay, pt[0] + h, pt[1]) -
                                2.0 * u.deriv(ax, ay, pt[0], pt[1]) +
                                u.deriv(ax, ay, pt[0] - h, pt[1])) /
                               (h * h);
            const double dyy = (u.deriv(ax, ay, pt[0], pt[1] + h) -
                                2.0 * u.deriv(ax, ay, pt[0], pt[1]) +
                                u.deriv(ax, ay, pt[0], pt[1] - h)) /
                               (h * h);
            fd += mult * (dxx + dyy);
        }
        fd *= (m % 2) ? -1.0 : 1.0;
        const double fv = f.value(pt[0], pt[1]);
        const double scale = std::max(std::abs(fv), 1.0);
        if (std::abs(fd - fv) > 1e-4 * scale)
            throw std::runtime_error("manufactured solution " + name +
                                     ": forcing inconsistent with u");
    }
}

ManufacturedSolution solution_by_name(const std::string& name, int m)
{
    if (name == "zero")
        return zero_solution();
    if (name == "sinm")
        return trig_solution(m, m);
    if (name.rfind("sin", 0) == 0 && name.size() > 3) {
        const int p = std::stoi(name.substr(3));
        return trig_solution(p, m);
    }
    throw std::invalid_argument("unknown solution: " + name);
}

} // namespace pvem
