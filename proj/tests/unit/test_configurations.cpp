#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "vortexeq/configurations.hpp"

using namespace vortexeq;

namespace {

Circulations rat(std::initializer_list<Rational> g)
{
    std::vector<Rational> v(g);
    return Circulations::from_rationals(v);
}

Equilibrium make_eq(std::vector<Cx> z)
{
    Equilibrium e;
    e.z = z;
    e.z_physical = std::move(z);
    e.admissible = true;
    return e;
}

// a * w_N(a zeta + b) == w_N(zeta) at random points.
bool symmetry_holds(const VortexProblem& prob, const AffineMap& map, std::mt19937_64& rng)
{
    for (int t = 0; t < 8; ++t) {
        const Cx zeta = vtest::random_cx(rng, 2.0);
        const Cx lhs = map.a * prob.normalized_velocity(map.apply(zeta));
        const Cx rhs = prob.normalized_velocity(zeta);
        if (std::abs(lhs - rhs) > 1e-10 * (1 + std::abs(rhs)))
            return false;
    }
    return true;
}

BigInt binomial(int n, int k)
{
    BigInt r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

} // namespace

TEST_CASE("species partition")
{
    auto p = species_partition(rat({1, 1, Rational(-5, 4)}));
    CHECK(p.species_count() == 2);
    CHECK(p.sizes() == std::vector<std::size_t>{2, 1});
    CHECK(p.species_of == std::vector<std::size_t>{0, 0, 1});
    CHECK(*p.blocks[1].exact == Rational(-5, 4));

    const std::vector<double> g{0.5, 2.0, 0.5 + 1e-14, 2.0};
    p = species_partition(Circulations::from_values(g));
    CHECK(p.sizes() == std::vector<std::size_t>{2, 2});
    CHECK(p.species_of == std::vector<std::size_t>{0, 1, 0, 1});
    CHECK_FALSE(p.blocks[0].exact.has_value());
}

TEST_CASE("affine maps: inverse and composition")
{
    CHECK_THROWS_AS(AffineMap(0.0, 1.0), std::invalid_argument);
    std::mt19937_64 rng(51);
    for (int t = 0; t < 20; ++t) {
        const AffineMap f(vtest::random_cx(rng) + Cx(2.0), vtest::random_cx(rng));
        const AffineMap g(vtest::random_cx(rng) + Cx(0.0, 2.0), vtest::random_cx(rng));
        const Cx zeta = vtest::random_cx(rng);
        CHECK(std::abs(f.inverse().apply(f.apply(zeta)) - zeta) < 1e-12);
        CHECK(std::abs(g.after(f).apply(zeta) - g.apply(f.apply(zeta))) < 1e-12);
    }
}

TEST_CASE("candidate maps: m = 1 with a constant")
{
    const Cx c(1.0, 1.0);
    const auto prob = from_normalized(rat({1, 2}), 1, {c});
    const auto maps = candidate_maps(prob);
    REQUIRE(maps.size() == 2);
    CHECK(maps[0].a == Cx(1.0));
    CHECK(maps[0].b == Cx(0.0));
    CHECK(maps[1].a == Cx(-1.0));
    CHECK(std::abs(maps[1].b + 2.0 * c) < 1e-15);
    std::mt19937_64 rng(52);
    for (const auto& m : maps)
        CHECK(symmetry_holds(prob, m, rng));
}

TEST_CASE("candidate maps: rotations for W = 0")
{
    const auto prob = from_normalized(rat({1, 1}), 2, {});
    const auto maps = candidate_maps(prob);
    REQUIRE(maps.size() == 3);
    for (const auto& m : maps) {
        CHECK(std::abs(m.a * m.a * m.a - 1.0) < 1e-14);
        CHECK(m.b == Cx(0.0));
    }
}

TEST_CASE("candidate maps: partial symmetry and generic backgrounds")
{
    std::mt19937_64 rng(53);
    // w_N = zeta^3 + zeta keeps only a = +-1.
    auto prob = from_normalized(rat({1, 1}), 3, {Cx(0.0), Cx(1.0), Cx(0.0)});
    auto maps = candidate_maps(prob);
    CHECK(maps.size() == 2);
    for (const auto& m : maps)
        CHECK(symmetry_holds(prob, m, rng));

    // zeta^2 + 1 admits only the identity.
    CHECK(candidate_maps(from_normalized(rat({1, 1}), 2, {Cx(1.0), Cx(0.0)})).size() == 1);

    // m = 1 always has the reflection zeta -> -zeta - 2c; start at m = 2.
    for (int m = 2; m <= 4; ++m) {
        std::vector<Cx> W(m);
        for (auto& v : W)
            v = vtest::random_cx(rng);
        prob = from_normalized(rat({1, 1}), m, W);
        maps = candidate_maps(prob);
        REQUIRE(maps.size() == 1);
        CHECK(maps[0].a == Cx(1.0));
        // Every rotation that passes the pointwise test must be reported.
        for (int k = 1; k <= m; ++k) {
            const Cx a = std::polar(1.0, 2.0 * std::numbers::pi * k / (m + 1));
            const AffineMap cand(a, W[m - 1] * (a - 1.0) / static_cast<double>(m));
            CHECK_FALSE(symmetry_holds(prob, cand, rng));
        }
    }
}

TEST_CASE("equivalence respects species")
{
    const auto gammas = rat({1, 1, Rational(-5, 4)});
    const auto prob = from_normalized(gammas, 1, {Cx(0.5)});
    const auto maps = candidate_maps(prob);
    const auto e1 = make_eq({Cx(0.1, 0.2), Cx(-0.4, 0.7), Cx(0.9, -0.3)});

    // Swapping the two equal vortices is the identity configuration.
    auto e2 = make_eq({e1.z[1], e1.z[0], e1.z[2]});
    auto w = equivalent(e1, e2, maps, gammas);
    REQUIRE(w.has_value());
    CHECK(w->a == Cx(1.0));

    // The image under the reflection, also permuted.
    const auto& r = maps[1];
    e2 = make_eq({r.apply(e1.z[1]), r.apply(e1.z[0]), r.apply(e1.z[2])});
    w = equivalent(e1, e2, maps, gammas);
    REQUIRE(w.has_value());
    CHECK(w->a == Cx(-1.0));

    // Exchanging vortices of different circulation is not allowed.
    e2 = make_eq({e1.z[2], e1.z[1], e1.z[0]});
    CHECK_FALSE(equivalent(e1, e2, maps, gammas).has_value());

    // Small perturbations inside the tolerance still match.
    e2 = make_eq({e1.z[0] + 1e-8, e1.z[1], e1.z[2]});
    CHECK(equivalent(e1, e2, maps, gammas).has_value());
}

TEST_CASE("classification of the quadratic pair")
{
    const auto prob = from_normalized(rat({1, 1}), 2, {Cx(1.0)});
    const auto eqs = filter_admissible(solve(build_poly_system(prob), {}, 0), prob);
    const auto c = classify(eqs, prob);
    CHECK(c.admissible_count == 6);
    CHECK(c.classes.size() == 3);
    CHECK(c.bound == 3);
    CHECK(c.attained());
    for (const auto& cl : c.classes) {
        CHECK(cl.members.size() == 2);
        CHECK(cl.representative == cl.members.front());
        REQUIRE(cl.witnesses.size() == 1);
        const auto& wit = cl.witnesses[0];
        CHECK(witness_defect(prob, eqs[wit.from], eqs[wit.to], wit.map) < 1e-8);
    }
}

TEST_CASE("classification: two equal vortices with W = 0 form one configuration")
{
    const auto prob = from_normalized(rat({1, 1}), 1, {});
    const auto eqs = filter_admissible(solve(build_poly_system(prob), {}, 0), prob);
    const auto c = classify(eqs, prob);
    CHECK(c.admissible_count == 2);
    CHECK(c.classes.size() == 1);
    CHECK(c.bound == 1);
}

TEST_CASE("classification skips inadmissible entries")
{
    const auto prob = from_normalized(rat({1, 2}), 1, {});
    std::vector<Equilibrium> eqs{make_eq({Cx(1.0), Cx(1.0)})};
    eqs[0].admissible = false;
    const auto c = classify(eqs, prob);
    CHECK(c.admissible_count == 0);
    CHECK(c.classes.empty());
}

TEST_CASE("witness defect detects a wrong map")
{
    const auto prob = from_normalized(rat({1, 2}), 1, {Cx(0.3)});
    const auto eqs = filter_admissible(solve(build_poly_system(prob), {}, 0), prob);
    REQUIRE(eqs.size() == 2);
    const auto maps = candidate_maps(prob);
    const auto w = equivalent(eqs[0], eqs[1], maps, prob.circulations);
    REQUIRE(w.has_value());
    CHECK(witness_defect(prob, eqs[0], eqs[1], *w) < 1e-8);
    CHECK(witness_defect(prob, eqs[0], eqs[1], AffineMap(1.0, 0.1)) > 1e-3);
}

TEST_CASE("normalized complex velocity matches the physical one for lambda = 1")
{
    std::mt19937_64 rng(54);
    const auto prob = from_normalized(rat({1, -2, 3}), 2, {Cx(0.2), Cx(0.0, 0.5)});
    const auto z = vtest::random_point(rng, 3);
    for (int t = 0; t < 5; ++t) {
        const Cx zeta = vtest::random_cx(rng, 3.0);
        CHECK(std::abs(normalized_complex_velocity(prob, z, zeta) - complex_velocity(prob, z, zeta)) < 1e-12);
    }
}

TEST_CASE("configuration bound")
{
    const auto one = [](std::vector<std::size_t> sizes) {
        SpeciesPartition p;
        for (auto s : sizes)
            p.blocks.push_back({1.0, std::nullopt, std::vector<std::size_t>(s)});
        return p;
    };
    CHECK(config_bound(2, 2, one({2})) == 3);
    CHECK(config_bound(2, 2, one({1, 1})) == 6);
    CHECK(config_bound(1, 3, one({2, 1})) == 3);
    CHECK(config_bound(1, 3, one({1, 1, 1})) == 6);
    CHECK(config_bound(30, 30, one({30})) == binomial(59, 30));
    CHECK(config_bound(3, 4, one({4})) == binomial(6, 4));
    CHECK_THROWS_AS(config_bound(2, 3, one({2})), std::invalid_argument);
    CHECK_THROWS_AS(config_bound(0, 2, one({2})), std::invalid_argument);

    const BigInt huge = config_bound(40, 40, one({1, 1, 1, 1, 36}));
    CHECK(huge > BigInt(std::numeric_limits<std::uint64_t>::max()));
    CHECK(bigint_json(huge).is_string());
    CHECK(bigint_json(BigInt(7)) == 7);
}

TEST_CASE("classification JSON")
{
    const auto prob = from_normalized(rat({1, 1}), 2, {Cx(1.0)});
    const auto eqs = filter_admissible(solve(build_poly_system(prob), {}, 0), prob);
    const nlohmann::json j = classify(eqs, prob);
    CHECK(j.at("class_count") == 3);
    CHECK(j.at("bound") == 3);
    CHECK(j.at("attained") == true);
    CHECK(j.at("classes")[0].at("witness_maps").size() == 1);
    const nlohmann::json s = species_partition(prob.circulations);
    CHECK(s.at("blocks")[0].at("indices") == std::vector<int>{1, 2});
}
