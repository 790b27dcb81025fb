#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "test_support.hpp"
#include "vortexeq/equilibria.hpp"

using namespace vortexeq;

namespace {

constexpr Cx kTwoPiI{0.0, 2.0 * std::numbers::pi};

Circulations rat(std::initializer_list<Rational> g)
{
    std::vector<Rational> v(g);
    return Circulations::from_rationals(v);
}

SolutionSet one_cluster_each(const std::vector<std::vector<Cx>>& points)
{
    SolutionSet s;
    for (const auto& p : points)
        s.clusters.push_back({p, 1, 0.0, {}});
    s.total_paths = points.size();
    return s;
}

// Physical condition: the velocity induced at z_j by the other vortices and
// the background vanishes.
double induced_velocity_defect(const std::vector<double>& g, const BackgroundFlow& w, const std::vector<Cx>& z)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        Cx v = w(z[j]);
        for (std::size_t k = 0; k < z.size(); ++k)
            if (k != j)
                v += g[k] / (kTwoPiI * (z[j] - z[k]));
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ','))
            cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("minimum separation")
{
    const std::vector<Cx> z{Cx(0.0), Cx(3.0), Cx(0.0, 1.0)};
    CHECK(min_separation(z) == doctest::Approx(1.0));
}

TEST_CASE("admissibility and physical verification after rescaling")
{
    // w = -8 zeta/(2 pi i): lambda = 1/(2 sqrt 2).
    BackgroundFlow w{{0.0, -8.0 / kTwoPiI}};
    const auto prob = normalize(rat({1, 2}), w);
    const double r3 = std::sqrt(3.0);
    const auto sols = one_cluster_each({{Cx(-2 / r3), Cx(1 / r3)}, {Cx(0.25), Cx(0.25)}});
    const auto eqs = filter_admissible(sols, prob);
    REQUIRE(eqs.size() == 2);

    CHECK(eqs[0].admissible);
    CHECK(eqs[0].rational_residual < 1e-12);
    CHECK(eqs[0].dynamics_residual < 1e-12);
    const Cx lambda = 1.0 / (2.0 * std::sqrt(2.0));
    CHECK(std::abs(eqs[0].z_physical[0] - lambda * (-2 / r3)) < 1e-15);
    CHECK(induced_velocity_defect({1.0, 2.0}, w, eqs[0].z_physical) < 1e-12);

    CHECK_FALSE(eqs[1].admissible);
    CHECK(std::isinf(eqs[1].rational_residual));
    CHECK(std::isinf(eqs[1].dynamics_residual));
}

TEST_CASE("dynamics residual throws on coincident points")
{
    const auto prob = from_normalized(rat({1, 1}), 1, {});
    const std::vector<Cx> z{Cx(0.5), Cx(0.5)};
    CHECK_THROWS_AS(dynamics_residual(prob, prob.background, z), CollisionError);
}

TEST_CASE("dynamics residual is the modulus of the induced velocity")
{
    std::mt19937_64 rng(41);
    const std::vector<double> g{1.0, -0.4, 2.5};
    const auto prob = from_normalized(Circulations::from_values(g), 2, {Cx(0.2, 0.1), Cx(-0.3)});
    const auto z = vtest::random_point(rng, 3);
    CHECK(dynamics_residual(prob, prob.background, z)
          == doctest::Approx(induced_velocity_defect(g, prob.background, z)).epsilon(1e-12));
}

TEST_CASE("single vortex: V(1) = Gamma/(2 pi i)")
{
    const auto prob = from_normalized(rat({3}), 1, {});
    const std::vector<Cx> z{Cx(0.0)};
    const Cx v = complex_velocity(prob, z, Cx(1.0), FieldPart::vortices);
    CHECK(std::abs(v - 3.0 / kTwoPiI) < 1e-15);
    const Cx b = complex_velocity(prob, z, Cx(0.5, 0.5), FieldPart::background);
    CHECK(std::abs(b - prob.background(Cx(0.5, 0.5))) < 1e-15);
}

TEST_CASE("quadratic pair: a conjugate-pair root gives V(conj zeta) = -conj V(zeta)")
{
    const auto prob = from_normalized(rat({1, 1}), 2, {Cx(1.0)});
    const auto sols = solve(build_poly_system(prob), {}, 0);
    const auto eqs = filter_admissible(sols, prob);
    const Equilibrium* pair = nullptr;
    for (const auto& e : eqs)
        if (e.admissible && std::abs(e.z[1] - std::conj(e.z[0])) < 1e-10 && std::abs(e.z[0].imag()) > 0.1)
            pair = &e;
    REQUIRE(pair != nullptr);
    CHECK(std::abs(pair->z[0] - Cx(-0.237, -1.028)) < 2e-3);
    std::mt19937_64 rng(42);
    for (int t = 0; t < 20; ++t) {
        const Cx zeta = vtest::random_cx(rng, 2.0);
        const Cx a = complex_velocity(prob, pair->z_physical, std::conj(zeta));
        const Cx b = complex_velocity(prob, pair->z_physical, zeta);
        CHECK(std::abs(a + std::conj(b)) < 1e-12 * (1 + std::abs(b)));
    }
}

TEST_CASE("grid parsing and validation")
{
    const auto g = GridSpec::parse("-1,1,0,2,5");
    CHECK(g.xmin == -1.0);
    CHECK(g.ymax == 2.0);
    CHECK(g.resolution == 5);
    CHECK(g.x(0) == -1.0);
    CHECK(g.x(4) == 1.0);
    CHECK(g.y(2) == doctest::Approx(1.0));
    CHECK(g.cell_diagonal() == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(GridSpec::parse("0,1,0,1"), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::parse("1,0,0,1,5"), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::parse("0,1,0,1,1"), std::invalid_argument);
    CHECK_THROWS(GridSpec::parse("a,1,0,1,5"));
}

TEST_CASE("velocity field: superposition, masking and zeros")
{
    const auto prob = from_normalized(rat({1, 2}), 1, {Cx(0.0)});
    const double r3 = std::sqrt(3.0);
    const auto eq = filter_admissible(one_cluster_each({{Cx(-2 / r3), Cx(1 / r3)}}), prob)[0];
    const auto spec = GridSpec::parse("-2,2,-2,2,21");
    const auto total = velocity_field(prob, eq, spec);
    const auto vort = velocity_field(prob, eq, spec, FieldPart::vortices);
    const auto bg = velocity_field(prob, eq, spec, FieldPart::background);
    CHECK(total.pole_radius == doctest::Approx(2 * spec.cell_diagonal()));

    std::size_t masked = 0;
    for (int iy = 0; iy < spec.resolution; ++iy)
        for (int ix = 0; ix < spec.resolution; ++ix) {
            const auto k = total.index(ix, iy);
            const Cx zeta(spec.x(ix), spec.y(iy));
            bool near = false;
            for (const auto& p : eq.z_physical)
                near = near || std::abs(zeta - p) <= total.pole_radius;
            CHECK(total.pole_mask[k] == near);
            if (near) {
                ++masked;
                CHECK(total.values[k] == Cx(0.0));
                continue;
            }
            CHECK(total.values[k] == vort.values[k] + bg.values[k]);
            const Cx direct = complex_velocity(prob, eq.z_physical, zeta);
            CHECK(std::abs(total.values[k] - direct) <= 1e-13 * (1 + std::abs(direct)));
        }
    CHECK(masked > 0);

    Equilibrium bad = eq;
    bad.admissible = false;
    CHECK_THROWS_AS(velocity_field(prob, bad, spec), std::invalid_argument);
}

TEST_CASE("CSV export: header, row order, masked zeros and round trip")
{
    const auto prob = from_normalized(rat({1, 2}), 1, {Cx(0.0)});
    const double r3 = std::sqrt(3.0);
    const auto eq = filter_admissible(one_cluster_each({{Cx(-2 / r3), Cx(1 / r3)}}), prob)[0];

    const auto small = velocity_field(prob, eq, GridSpec::parse("-1,1,-1,1,2"));
    std::ostringstream os;
    export_field(small, os);
    auto rows = read_csv(os.str());
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"x", "y", "u", "v", "masked", "vre", "vim"});
    // x varies fastest.
    CHECK(rows[1][0] == "-1");
    CHECK(rows[1][1] == "-1");
    CHECK(rows[2][0] == "1");
    CHECK(rows[2][1] == "-1");
    CHECK(rows[3][1] == "1");

    const auto spec = GridSpec::parse("-2,2,-2,2,31");
    const auto grid = velocity_field(prob, eq, spec);
    std::ostringstream big;
    export_field(grid, big);
    rows = read_csv(big.str());
    REQUIRE(rows.size() == 1 + 31 * 31);
    bool saw_masked = false;
    for (int iy = 0; iy < spec.resolution; ++iy)
        for (int ix = 0; ix < spec.resolution; ++ix) {
            const auto k = grid.index(ix, iy);
            const auto& r = rows[1 + k];
            REQUIRE(r.size() == 7);
            CHECK(std::stod(r[0]) == spec.x(ix));
            CHECK(std::stod(r[1]) == spec.y(iy));
            if (grid.pole_mask[k]) {
                saw_masked = true;
                CHECK(r[4] == "1");
                CHECK(r[2] == "0");
                CHECK(r[3] == "0");
                continue;
            }
            CHECK(r[4] == "0");
            CHECK(std::stod(r[2]) == grid.values[k].real());
            CHECK(std::stod(r[3]) == -grid.values[k].imag());
            CHECK(std::stod(r[5]) == grid.values[k].real());
            CHECK(std::stod(r[6]) == grid.values[k].imag());
        }
    CHECK(saw_masked);
    CHECK(big.str().find("-0,") == std::string::npos);

    const auto path = (std::filesystem::temp_directory_path() / "vortexeq_field_test.csv").string();
    export_field(grid, path);
    std::ifstream f(path);
    std::stringstream back;
    back << f.rdbuf();
    CHECK(back.str() == big.str());
    std::remove(path.c_str());
}

TEST_CASE("equilibrium JSON writes non-finite residuals as null")
{
    Equilibrium e;
    e.z = {Cx(1.0, 2.0)};
    e.z_physical = e.z;
    e.rational_residual = std::numeric_limits<double>::infinity();
    e.dynamics_residual = 0.5;
    const nlohmann::json j = e;
    CHECK(j.at("residuals").at("rational").is_null());
    CHECK(j.at("residuals").at("dynamics") == 0.5);
    CHECK(j.at("admissible") == false);
}
