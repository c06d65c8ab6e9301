#pragma once

#include <cstdint>
#include <vector>

namespace pvem {

/// Bivariate multi-index (a1, a2), |alpha| = a1 + a2.
struct MultiIndex {
    int a1 = 0;
    int a2 = 0;

    int order() const { return a1 + a2; }

    bool operator==(const MultiIndex&) const = default;
};

/// Number of bivariate monomials of total degree <= deg: (deg+1)(deg+2)/2.
inline int poly_space_dim(int deg)
{
    return deg < 0 ? 0 : (deg + 1) * (deg + 2) / 2;
}

/// Graded lexicographic position of alpha in the full enumeration:
/// degree blocks in increasing order, a1 descending inside a block.
inline int multiindex_position(const MultiIndex& alpha)
{
    const int d = alpha.order();
    return d * (d + 1) / 2 + alpha.a2;
}

/// All alpha with |alpha| <= degree, graded-lex. Empty for degree < 0.
inline std::vector<MultiIndex> enumerate_multiindices(int degree)
{
    std::vector<MultiIndex> out;
    if (degree < 0)
        return out;
    out.reserve(poly_space_dim(degree));
    for (int d = 0; d <= degree; ++d)
        for (int a2 = 0; a2 <= d; ++a2)
            out.push_back({d - a2, a2});
    return out;
}

/// Binomial coefficient as double (n small throughout this library).
inline double binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i)
        r = r * double(n - i) / double(i + 1);
    return r;
}

} // namespace pvem
