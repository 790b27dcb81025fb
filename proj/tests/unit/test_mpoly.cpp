#include <doctest.h>

#include <random>
#include <set>

#include "test_support.hpp"
#include "vortexeq/mpoly.hpp"

using namespace vortexeq;
using vtest::random_point;
using vtest::random_poly;

namespace {

MPoly z(std::size_t n, std::size_t j, int p = 1, Cx c = 1.0)
{
    return MPoly::variable(n, j, p, c);
}

} // namespace

TEST_CASE("adding an additive inverse gives the zero polynomial")
{
    const auto p = z(2, 0);
    const auto q = z(2, 0, 1, -1.0);
    const auto s = add(p, q);
    CHECK(s.is_zero());
    CHECK(s.support().empty());
}

TEST_CASE("disjoint supports add termwise")
{
    const auto s = add(z(2, 0, 2), z(2, 1, 2));
    CHECK(s.size() == 2);
    CHECK(s.coeff({2, 0}) == Cx(1.0));
    CHECK(s.coeff({0, 2}) == Cx(1.0));
}

TEST_CASE("difference of squares")
{
    const auto p = z(2, 0) - z(2, 1);
    const auto q = z(2, 0) + z(2, 1);
    const auto r = mul(p, q);
    CHECK(r == z(2, 0, 2) - z(2, 1, 2));
    CHECK(r.coeff({1, 1}) == Cx(0.0));
}

TEST_CASE("multiplying by one is the identity")
{
    std::mt19937_64 rng(1);
    const auto p = random_poly(rng, 3, 3);
    CHECK(mul(p, MPoly::constant(3, 1.0)) == p);
}

TEST_CASE("evaluation of the first quadratic-pair equation vanishes at (i, i)")
{
    const auto p = z(2, 0, 2) + z(2, 1, 2) + MPoly::constant(2, 2.0);
    const std::vector<Cx> pt{Cx(0, 1), Cx(0, 1)};
    CHECK(std::abs(p.eval(pt)) < 1e-15);
}

TEST_CASE("second quadratic-pair equation is close to one at a reference root")
{
    const auto p = z(2, 0, 3) + z(2, 1, 3) + z(2, 0) + z(2, 1);
    const std::vector<Cx> pt{Cx(-0.250, -1.349), Cx(0.487, -0.693)};
    CHECK(std::abs(p.eval(pt) - 1.0) < 5e-3);
}

TEST_CASE("constants evaluate to themselves")
{
    const auto p = MPoly::constant(3, Cx(2.5, -1.0));
    std::mt19937_64 rng(2);
    CHECK(p.eval(random_point(rng, 3)) == Cx(2.5, -1.0));
    CHECK(p.total_degree() == 0);
}

TEST_CASE("support reads off the stored monomials")
{
    const auto p = z(2, 0, 2) + z(2, 1, 2) + MPoly::constant(2, 2.0);
    const auto s = p.support();
    const std::set<Monomial> got(s.begin(), s.end());
    CHECK(got == std::set<Monomial>{{2, 0}, {0, 2}, {0, 0}});
    CHECK(MPoly(2).support().empty());
}

TEST_CASE("total degree")
{
    CHECK(MPoly::term({1, 2}, 1.0).total_degree() == 3);
    CHECK_THROWS_AS(MPoly(2).total_degree(), std::invalid_argument);
}

TEST_CASE("ring mismatches and bad points are rejected")
{
    CHECK_THROWS_AS(add(z(2, 0), z(3, 0)), std::invalid_argument);
    CHECK_THROWS_AS(mul(z(2, 0), z(3, 0)), std::invalid_argument);
    const std::vector<Cx> pt{Cx(1.0)};
    CHECK_THROWS_AS(z(2, 0).eval(pt), std::invalid_argument);
    MPoly p(2);
    CHECK_THROWS_AS(p.add_term({1, -1}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(p.add_term({1, 0}, Cx(std::nan(""), 0.0)), std::invalid_argument);
}

TEST_CASE("evaluation is a ring homomorphism at random points")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_poly(rng, 3, 3);
        const auto q = random_poly(rng, 3, 3);
        const auto s = add(p, q);
        const auto m = mul(p, q);
        for (int k = 0; k < 10; ++k) {
            const auto pt = random_point(rng, 3);
            const Cx pv = p.eval(pt), qv = q.eval(pt);
            CHECK(std::abs(s.eval(pt) - (pv + qv)) <= 1e-10 * (1 + std::abs(pv) + std::abs(qv)));
            CHECK(std::abs(m.eval(pt) - pv * qv) <= 1e-10 * (1 + std::abs(pv * qv)));
        }
    }
}

TEST_CASE("support of a product lies in the Minkowski sum of supports")
{
    std::mt19937_64 rng(4);
    MPoly p(2), q(2);
    p.add_term({2, 0}, 1.0);
    p.add_term({0, 1}, vtest::random_cx(rng));
    q.add_term({1, 1}, vtest::random_cx(rng));
    q.add_term({0, 0}, 2.0);
    std::set<Monomial> sums;
    for (const auto& a : p.support())
        for (const auto& b : q.support())
            sums.insert({a[0] + b[0], a[1] + b[1]});
    for (const auto& r : mul(p, q).support())
        CHECK(sums.count(r) == 1);
}

TEST_CASE("no zero coefficients survive arithmetic")
{
    std::mt19937_64 rng(5);
    const auto p = random_poly(rng, 2, 2);
    const auto r = (p + z(2, 0)) - z(2, 0) - p;
    CHECK(r.is_zero());
    const auto sq = mul(p, p);
    for (const auto& [mono, c] : sq.terms())
        CHECK(c != Cx(0.0));
}

TEST_CASE("derivatives agree with central differences")
{
    std::mt19937_64 rng(6);
    const auto p = random_poly(rng, 2, 4);
    const auto pt = random_point(rng, 2, 1.0);
    for (std::size_t j = 0; j < 2; ++j) {
        const double h = 1e-5;
        auto a = pt, b = pt;
        a[j] += h;
        b[j] -= h;
        const Cx fd = (p.eval(a) - p.eval(b)) / (2 * h);
        CHECK(std::abs(p.derivative(j).eval(pt) - fd) < 1e-6 * (1 + std::abs(fd)));
    }
}

TEST_CASE("JSON round trip keeps terms leading-first")
{
    const auto p = z(2, 1, 1, Cx(0, 2)) + z(2, 0, 3) + MPoly::constant(2, -1.0) + MPoly::term({1, 1}, 4.0);
    const nlohmann::json j = p;
    CHECK(j.at("n_vars") == 2);
    CHECK(j.at("terms").size() == 4);
    CHECK(j.at("terms")[0].at("exp") == std::vector<int>{3, 0});
    CHECK(j.at("terms")[1].at("exp") == std::vector<int>{1, 1});
    CHECK(j.at("terms")[3].at("exp") == std::vector<int>{0, 0});
    CHECK(mpoly_from_json(j) == p);
}

TEST_CASE("grlex ordering breaks degree ties lexicographically")
{
    GrlexDescending less;
    CHECK(less({2, 0}, {1, 0}));
    CHECK(less({1, 1}, {0, 2}));
    CHECK_FALSE(less({0, 2}, {1, 1}));
    CHECK(less({0, 3}, {2, 0}));
}
