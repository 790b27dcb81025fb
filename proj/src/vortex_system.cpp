#include "vortexeq/vortex_system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vortexeq {

namespace {

constexpr Cx kTwoPiI{0.0, 2.0 * std::numbers::pi};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw std::overflow_error("bound exceeds 64-bit range");
    return out;
}

} // namespace

Circulation::Circulation(double value) : value_(value)
{
    if (!std::isfinite(value) || value == 0.0)
        throw std::invalid_argument("circulation must be finite and nonzero");
}

Circulation::Circulation(Rational exact)
    : value_(boost::rational_cast<double>(exact)), exact_(exact)
{
    if (exact.numerator() == 0)
        throw std::invalid_argument("circulation must be finite and nonzero");
}

Circulations::Circulations(std::vector<Circulation> gammas) : gammas_(std::move(gammas)) {}

Circulations Circulations::from_values(std::span<const double> values)
{
    std::vector<Circulation> g;
    g.reserve(values.size());
    for (double v : values)
        g.emplace_back(v);
    return Circulations(std::move(g));
}

Circulations Circulations::from_rationals(std::span<const Rational> values)
{
    std::vector<Circulation> g;
    g.reserve(values.size());
    for (const auto& v : values)
        g.emplace_back(v);
    return Circulations(std::move(g));
}

std::vector<double> Circulations::values() const
{
    std::vector<double> out;
    out.reserve(gammas_.size());
    for (const auto& g : gammas_)
        out.push_back(g.value());
    return out;
}

bool Circulations::exact() const
{
    return !gammas_.empty()
        && std::all_of(gammas_.begin(), gammas_.end(), [](const Circulation& g) { return g.exact().has_value(); });
}

Circulations Circulations::permuted(std::span<const std::size_t> order) const
{
    return subset(order);
}

Circulations Circulations::subset(std::span<const std::size_t> indices) const
{
    std::vector<Circulation> g;
    g.reserve(indices.size());
    for (auto i : indices)
        g.push_back(gammas_.at(i));
    return Circulations(std::move(g));
}

Cx BackgroundFlow::operator()(Cx zeta) const
{
    Cx acc(0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * zeta + *it;
    return acc;
}

double VortexProblem::gamma_others(std::size_t j) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < n(); ++i)
        if (i != j)
            s += gamma(i);
    return s;
}

Cx VortexProblem::W_at(Cx u) const
{
    Cx acc(0.0);
    for (auto it = W.rbegin(); it != W.rend(); ++it)
        acc = acc * u + *it;
    return acc;
}

Cx VortexProblem::normalized_velocity(Cx u) const
{
    return std::pow(u, m) + W_at(u);
}

std::vector<Cx> VortexProblem::to_physical(std::span<const Cx> u) const
{
    std::vector<Cx> z(u.begin(), u.end());
    for (auto& v : z)
        v *= scale;
    return z;
}

std::vector<Cx> PolySystem::eval(std::span<const Cx> z) const
{
    std::vector<Cx> out;
    out.reserve(polys.size());
    for (const auto& p : polys)
        out.push_back(p.eval(z));
    return out;
}

double PolySystem::residual_norm(std::span<const Cx> z) const
{
    double r = 0.0;
    for (const auto& p : polys)
        r = std::max(r, std::abs(p.eval(z)));
    return r;
}

VortexProblem normalize(const Circulations& gammas, const BackgroundFlow& w)
{
    if (gammas.size() < 1)
        throw std::invalid_argument("normalize: no circulations");
    const int m = w.degree();
    if (m < 1 || w.coeffs.back() == Cx(0.0))
        throw std::invalid_argument("normalize: background must be a polynomial of degree >= 1 with nonzero leading coefficient");

    // p(zeta) = -2*pi*i * w(zeta); lambda^{m+1} * lead(p) = 1 on the principal branch.
    std::vector<Cx> p(w.coeffs.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        p[k] = -kTwoPiI * w.coeffs[k];
    const Cx alpha = p.back();
    const Cx lambda = std::pow(1.0 / alpha, 1.0 / static_cast<double>(m + 1));

    // W collects the sub-leading coefficients of lambda * p(lambda * u).
    VortexProblem prob;
    prob.circulations = gammas;
    prob.m = m;
    prob.scale = lambda;
    prob.background = w;
    prob.W.resize(m);
    Cx lam_pow = lambda;
    for (int k = 0; k < m; ++k) {
        prob.W[k] = p[k] * lam_pow;
        lam_pow *= lambda;
    }
    return prob;
}

VortexProblem from_normalized(const Circulations& gammas, int m, std::vector<Cx> W)
{
    if (m < 1)
        throw std::invalid_argument("from_normalized: m must be >= 1");
    if (static_cast<int>(W.size()) > m)
        throw std::invalid_argument("from_normalized: W must have degree <= m-1");
    W.resize(m, Cx(0.0));

    VortexProblem prob;
    prob.circulations = gammas;
    prob.m = m;
    prob.W = W;
    prob.pre_normalized = true;
    prob.background.coeffs.resize(m + 1);
    for (int k = 0; k < m; ++k)
        prob.background.coeffs[k] = -W[k] / kTwoPiI;
    prob.background.coeffs[m] = -1.0 / kTwoPiI;
    return prob;
}

std::vector<Cx> build_rational_residual(const VortexProblem& prob, std::span<const Cx> z)
{
    const std::size_t n = prob.n();
    if (z.size() != n)
        throw std::invalid_argument("build_rational_residual: wrong number of coordinates");
    std::vector<Cx> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        Cx lj(0.0);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j)
                continue;
            const Cx d = z[j] - z[k];
            if (d == Cx(0.0))
                throw CollisionError();
            lj += prob.gamma(k) / d;
        }
        out[j] = prob.normalized_velocity(z[j]) - lj;
    }
    return out;
}

PolySystem build_poly_system(const VortexProblem& prob)
{
    const std::size_t n = prob.n();
    const int m = prob.m;
    PolySystem sys;
    sys.polys.reserve(n);

    for (std::size_t k = 1; k <= n; ++k) {
        MPoly P(n);
        const int shift = static_cast<int>(k) - 1;
        for (std::size_t j = 0; j < n; ++j) {
            const double g = prob.gamma(j);
            P.add_term([&] { Monomial r(n, 0); r[j] = m + shift; return r; }(), g);
            for (int r = 0; r < m; ++r) {
                Monomial e(n, 0);
                e[j] = r + shift;
                P.add_term(e, g * prob.W[r]);
            }
        }

        // Move the right-hand side over.
        if (k == 2) {
            double c0 = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    c0 += prob.gamma_pair(i, j);
            P.add_term(Monomial(n, 0), -c0);
        } else if (k >= 3) {
            const int d = static_cast<int>(k) - 2;
            for (std::size_t j = 0; j < n; ++j) {
                Monomial e(n, 0);
                e[j] = d;
                P.add_term(e, -prob.gamma(j) * prob.gamma_others(j));
            }
            for (int r = 1; r < d; ++r) {
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = i + 1; j < n; ++j) {
                        Monomial e(n, 0);
                        e[i] = r;
                        e[j] = d - r;
                        P.add_term(e, -prob.gamma_pair(i, j));
                    }
                }
            }
        }
        sys.degrees.push_back(P.total_degree());
        sys.polys.push_back(std::move(P));
    }
    return sys;
}

Eigen::MatrixXcd transform_matrix(const Circulations& gammas, std::span<const Cx> z)
{
    const auto n = static_cast<Eigen::Index>(gammas.size());
    if (static_cast<Eigen::Index>(z.size()) != n)
        throw std::invalid_argument("transform_matrix: wrong number of coordinates");
    Eigen::MatrixXcd T(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Cx v = gammas[j].value();
        for (Eigen::Index i = 0; i < n; ++i) {
            T(i, j) = v;
            v *= z[j];
        }
    }
    return T;
}

GenericityReport check_genericity(const Circulations& gammas)
{
    const std::size_t n = gammas.size();
    if (n == 0 || n > 20)
        throw std::invalid_argument("check_genericity: need 1 <= n <= 20");

    GenericityReport rep;
    rep.exact = gammas.exact();
    constexpr double tol = 1e-12;

    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool zero = false;
        if (rep.exact) {
            Rational s(0);
            for (std::size_t j = 0; j < n; ++j)
                if (mask & (1u << j))
                    s += *gammas[j].exact();
            zero = (s.numerator() == 0);
        } else {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (mask & (1u << j))
                    s += gammas[j].value();
            zero = std::abs(s) <= tol;
        }
        if (zero) {
            rep.subset_sums_ok = false;
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < n; ++j)
                if (mask & (1u << j))
                    idx.push_back(j);
            rep.failing_subsets.push_back(std::move(idx));
        }
    }

    if (rep.exact) {
        Rational s(0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                s += *gammas[i].exact() * *gammas[j].exact();
        rep.pair_sum_ok = (s.numerator() != 0);
    } else {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                s += gammas[i].value() * gammas[j].value();
        rep.pair_sum_ok = std::abs(s) > tol;
    }
    return rep;
}

Bounds bounds(int m, int n)
{
    if (m < 1 || n < 2)
        throw std::invalid_argument("bounds: need m >= 1 and n >= 2");
    Bounds b;
    const auto d = static_cast<std::uint64_t>(m + n - 1);
    b.bezout = 1;
    for (int k = 0; k < n; ++k)
        b.bezout = checked_mul(b.bezout, d);
    // (m+n-1)!/(m-1)! = m (m+1) ... (m+n-1)
    b.refined = 1;
    for (int k = 0; k < n; ++k)
        b.refined = checked_mul(b.refined, static_cast<std::uint64_t>(m + k));
    return b;
}

void to_json(nlohmann::json& j, const GenericityReport& r)
{
    nlohmann::json subsets = nlohmann::json::array();
    for (const auto& s : r.failing_subsets) {
        nlohmann::json one = nlohmann::json::array();
        for (auto i : s)
            one.push_back(i + 1);
        subsets.push_back(std::move(one));
    }
    j = {{"subset_sums_ok", r.subset_sums_ok},
         {"pair_sum_ok", r.pair_sum_ok},
         {"exact", r.exact},
         {"failing_subsets", std::move(subsets)}};
}

void to_json(nlohmann::json& j, const PolySystem& s)
{
    j = {{"polys", s.polys}, {"degrees", s.degrees}};
}

} // namespace vortexeq
