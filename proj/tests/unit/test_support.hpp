// Shared helpers for the unit tests.
#pragma once

#include <complex>
#include <random>
#include <vector>

#include "vortexeq/mpoly.hpp"

namespace vtest {

using vortexeq::Cx;

inline Cx random_cx(std::mt19937_64& rng, double radius = 1.5)
{
    std::uniform_real_distribution<double> u(-radius, radius);
    return {u(rng), u(rng)};
}

inline std::vector<Cx> random_point(std::mt19937_64& rng, std::size_t n, double radius = 1.5)
{
    std::vector<Cx> z(n);
    for (auto& v : z)
        v = random_cx(rng, radius);
    return z;
}

// Dense random polynomial with every monomial of total degree <= d.
inline vortexeq::MPoly random_poly(std::mt19937_64& rng, std::size_t n, int d)
{
    vortexeq::MPoly p(n);
    std::vector<int> r(n, 0);
    for (;;) {
        int deg = 0;
        for (int e : r)
            deg += e;
        if (deg <= d)
            p.add_term(r, random_cx(rng, 1.0));
        std::size_t k = 0;
        while (k < n && ++r[k] > d)
            r[k++] = 0;
        if (k == n)
            break;
    }
    return p;
}

inline double max_abs_diff(const std::vector<Cx>& a, const std::vector<Cx>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace vtest
