#include "vortexeq/configurations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace vortexeq {

namespace {

constexpr Cx kTwoPiI{0.0, 2.0 * std::numbers::pi};

// e^{2 pi i k / q} with exact zeros where they belong.
Cx root_of_unity(int k, int q)
{
    Cx a = std::polar(1.0, 2.0 * std::numbers::pi * k / q);
    if (std::abs(a.real()) < 1e-15)
        a.real(0.0);
    if (std::abs(a.imag()) < 1e-15)
        a.imag(0.0);
    return a;
}

// Coefficients (low-to-high) of w_N.
std::vector<Cx> wn_coeffs(const VortexProblem& prob)
{
    std::vector<Cx> c(prob.W.begin(), prob.W.end());
    c.resize(prob.m, Cx(0.0));
    c.push_back(Cx(1.0));
    return c;
}

// Coefficients of a * P(a*zeta + b) by Horner over polynomials.
std::vector<Cx> pullback(const std::vector<Cx>& P, const AffineMap& map)
{
    std::vector<Cx> acc{Cx(0.0)};
    for (auto it = P.rbegin(); it != P.rend(); ++it) {
        std::vector<Cx> next(acc.size() + 1, Cx(0.0));
        for (std::size_t k = 0; k < acc.size(); ++k) {
            next[k] += acc[k] * map.b;
            next[k + 1] += acc[k] * map.a;
        }
        next[0] += *it;
        acc = std::move(next);
    }
    acc.resize(P.size());
    for (auto& v : acc)
        v *= map.a;
    return acc;
}

// Kuhn's augmenting-path matching; adj[i] lists admissible partners of i.
bool perfect_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t n)
{
    std::vector<std::ptrdiff_t> match_right(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<char> seen(n, 0);
        auto augment = [&](auto&& self, std::size_t u) -> bool {
            for (auto v : adj[u]) {
                if (seen[v])
                    continue;
                seen[v] = 1;
                if (match_right[v] < 0 || self(self, static_cast<std::size_t>(match_right[v]))) {
                    match_right[v] = static_cast<std::ptrdiff_t>(u);
                    return true;
                }
            }
            return false;
        };
        if (!augment(augment, i))
            return false;
    }
    return true;
}

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a)
    {
        while (parent[a] != a)
            a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> parent;
};

BigInt factorial(int k)
{
    BigInt f = 1;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

} // namespace

std::vector<std::size_t> SpeciesPartition::sizes() const
{
    std::vector<std::size_t> s;
    for (const auto& b : blocks)
        s.push_back(b.indices.size());
    return s;
}

SpeciesPartition species_partition(const Circulations& gammas)
{
    SpeciesPartition p;
    const bool exact = gammas.exact();
    for (std::size_t j = 0; j < gammas.size(); ++j) {
        const auto& g = gammas[j];
        std::size_t found = p.blocks.size();
        for (std::size_t b = 0; b < p.blocks.size(); ++b) {
            const bool same = exact ? *p.blocks[b].exact == *g.exact()
                                    : std::abs(p.blocks[b].value - g.value()) <= 1e-12;
            if (same) {
                found = b;
                break;
            }
        }
        if (found == p.blocks.size())
            p.blocks.push_back({g.value(), exact ? g.exact() : std::nullopt, {}});
        p.blocks[found].indices.push_back(j);
        p.species_of.push_back(found);
    }
    return p;
}

AffineMap::AffineMap(Cx a_, Cx b_) : a(a_), b(b_)
{
    if (a == Cx(0.0) || !std::isfinite(std::abs(a)) || !std::isfinite(std::abs(b)))
        throw std::invalid_argument("AffineMap: a must be nonzero and both coefficients finite");
}

AffineMap AffineMap::inverse() const
{
    return AffineMap(1.0 / a, -b / a);
}

AffineMap AffineMap::after(const AffineMap& first) const
{
    return AffineMap(a * first.a, a * first.b + b);
}

std::vector<AffineMap> candidate_maps(const VortexProblem& prob)
{
    if (prob.m < 1)
        throw std::invalid_argument("candidate_maps: m must be >= 1");
    const int m = prob.m;
    const auto P = wn_coeffs(prob);
    double scale = 1.0;
    for (const auto& c : P)
        scale = std::max(scale, std::abs(c));

    std::vector<AffineMap> out;
    for (int k = 0; k <= m; ++k) {
        const Cx a = root_of_unity(k, m + 1);
        const AffineMap map(a, k == 0 ? Cx(0.0) : P[m - 1] * (a - 1.0) / static_cast<double>(m));
        const auto Q = pullback(P, map);
        bool ok = true;
        for (std::size_t i = 0; i < P.size(); ++i)
            ok = ok && std::abs(Q[i] - P[i]) <= 1e-10 * scale;
        if (ok)
            out.push_back(map);
    }
    return out;
}

std::optional<AffineMap> equivalent(const Equilibrium& eq1, const Equilibrium& eq2, std::span<const AffineMap> maps,
                                    const Circulations& gammas)
{
    const std::size_t n = gammas.size();
    if (eq1.z.size() != n || eq2.z.size() != n)
        throw std::invalid_argument("equivalent: equilibria do not match the circulations");
    const auto species = species_partition(gammas).species_of;

    for (const auto& map : maps) {
        std::vector<Cx> pulled(n);
        for (std::size_t j = 0; j < n; ++j)
            pulled[j] = (eq2.z[j] - map.b) / map.a;
        std::vector<std::vector<std::size_t>> adj(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (species[i] == species[j] && std::abs(eq1.z[i] - pulled[j]) <= equivalence_tol)
                    adj[i].push_back(j);
        if (perfect_matching(adj, n))
            return map;
    }
    return std::nullopt;
}

Cx normalized_complex_velocity(const VortexProblem& prob, std::span<const Cx> z, Cx zeta)
{
    Cx s(0.0);
    for (std::size_t j = 0; j < z.size(); ++j)
        s += prob.gamma(j) / (zeta - z[j]);
    return (s - prob.normalized_velocity(zeta)) / kTwoPiI;
}

double witness_defect(const VortexProblem& prob, const Equilibrium& eq1, const Equilibrium& eq2, const AffineMap& map,
                      int samples, std::uint64_t seed)
{
    double radius = 1.0;
    for (const auto& v : eq1.z)
        radius = std::max(radius, std::abs(v));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.5 * radius, 1.5 * radius);

    double worst = 0.0;
    int taken = 0;
    while (taken < samples) {
        const Cx zeta(u(rng), u(rng));
        // Both sides blow up near a pole; compare only well away from them.
        bool near = false;
        for (const auto& v : eq1.z)
            near = near || std::abs(zeta - v) < 0.1;
        for (const auto& v : eq2.z)
            near = near || std::abs(map.apply(zeta) - v) < 0.1 * std::abs(map.a);
        if (near)
            continue;
        const Cx lhs = map.a * normalized_complex_velocity(prob, eq2.z, map.apply(zeta));
        const Cx rhs = normalized_complex_velocity(prob, eq1.z, zeta);
        worst = std::max(worst, std::abs(lhs - rhs));
        ++taken;
    }
    return worst;
}

Classification classify(std::span<const Equilibrium> equilibria, const VortexProblem& prob)
{
    Classification out;
    out.maps = candidate_maps(prob);
    const auto partition = species_partition(prob.circulations);
    out.bound = config_bound(prob.m, static_cast<int>(prob.n()), partition);

    std::vector<std::size_t> adm;
    for (std::size_t i = 0; i < equilibria.size(); ++i)
        if (equilibria[i].admissible)
            adm.push_back(i);
    out.admissible_count = adm.size();

    UnionFind uf(adm.size());
    std::vector<Witness> found;
    for (std::size_t a = 0; a < adm.size(); ++a)
        for (std::size_t b = a + 1; b < adm.size(); ++b)
            if (auto map = equivalent(equilibria[adm[a]], equilibria[adm[b]], out.maps, prob.circulations)) {
                found.push_back({adm[a], adm[b], *map});
                uf.unite(a, b);
            }

    std::vector<std::ptrdiff_t> class_of_root(adm.size(), -1);
    for (std::size_t a = 0; a < adm.size(); ++a) {
        const std::size_t r = uf.find(a);
        if (class_of_root[r] < 0) {
            class_of_root[r] = static_cast<std::ptrdiff_t>(out.classes.size());
            out.classes.push_back({{}, adm[a], {}});
        }
        out.classes[class_of_root[r]].members.push_back(adm[a]);
    }
    // Each witness belongs to the class containing its endpoints.
    for (const auto& w : found) {
        const auto pos = std::find(adm.begin(), adm.end(), w.from) - adm.begin();
        out.classes[class_of_root[uf.find(static_cast<std::size_t>(pos))]].witnesses.push_back(w);
    }
    return out;
}

BigInt config_bound(int m, int n, const SpeciesPartition& partition)
{
    if (m < 1 || n < 1)
        throw std::invalid_argument("config_bound: need m >= 1 and n >= 1");
    std::size_t total = 0;
    for (auto s : partition.sizes())
        total += s;
    if (total != static_cast<std::size_t>(n))
        throw std::invalid_argument("config_bound: species sizes must add up to n");
    BigInt num = factorial(m + n - 1) / factorial(m - 1);
    BigInt den = 1;
    for (auto s : partition.sizes())
        den *= factorial(static_cast<int>(s));
    return num / den;
}

nlohmann::json bigint_json(const BigInt& v)
{
    if (v <= BigInt(std::numeric_limits<std::uint64_t>::max()))
        return nlohmann::json(v.convert_to<std::uint64_t>());
    return nlohmann::json(v.str());
}

void to_json(nlohmann::json& j, const AffineMap& map)
{
    j = {{"a", {map.a.real(), map.a.imag()}}, {"b", {map.b.real(), map.b.imag()}}};
}

void to_json(nlohmann::json& j, const SpeciesPartition& p)
{
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : p.blocks) {
        std::vector<std::size_t> one_based;
        for (auto i : b.indices)
            one_based.push_back(i + 1);
        blocks.push_back({{"value", b.value}, {"indices", one_based}});
    }
    j = {{"species", p.species_count()}, {"sizes", p.sizes()}, {"blocks", std::move(blocks)}};
}

void to_json(nlohmann::json& j, const Classification& c)
{
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& cl : c.classes) {
        nlohmann::json wit = nlohmann::json::array();
        for (const auto& w : cl.witnesses)
            wit.push_back({{"from", w.from}, {"to", w.to}, {"map", w.map}});
        classes.push_back({{"members", cl.members}, {"representative", cl.representative}, {"witness_maps", wit}});
    }
    j = {{"classes", std::move(classes)},
         {"class_count", c.classes.size()},
         {"admissible_count", c.admissible_count},
         {"candidate_maps", c.maps},
         {"bound", bigint_json(c.bound)},
         {"attained", c.attained()}};
}

} // namespace vortexeq
