/*
 * vortex_system.hpp
 * -----------------
 * Fixed equilibria of n point vortices in a polynomial background flow.
 *
 * Physical input is the circulations Gamma_1..Gamma_n and the complex
 * velocity w of the background. Equilibria satisfy
 *
 *     p(z_j) = sum_{k != j} Gamma_k / (z_j - z_k),   p := -2*pi*i * w.
 *
 * Substituting z = lambda*u with lambda^{m+1} * lead(p) = 1 gives the monic
 * normalized form u_j^m + W(u_j) = L_j(u). Left-multiplying that system by
 * the matrix (Gamma_j u_j^{i-1}) yields a polynomial system whose k-th
 * equation has total degree m+k-1.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include "vortexeq/mpoly.hpp"

namespace vortexeq {

using Rational = boost::rational<std::int64_t>;

class CollisionError : public std::domain_error {
public:
    CollisionError() : std::domain_error("collision") {}
};

// A nonzero real circulation, optionally carried as an exact rational.
class Circulation {
public:
    explicit Circulation(double value);
    explicit Circulation(Rational exact);

    double value() const { return value_; }
    const std::optional<Rational>& exact() const { return exact_; }

    friend bool operator==(const Circulation&, const Circulation&) = default;

private:
    double value_;
    std::optional<Rational> exact_;
};

class Circulations {
public:
    Circulations() = default;
    explicit Circulations(std::vector<Circulation> gammas);
    static Circulations from_values(std::span<const double> values);
    static Circulations from_rationals(std::span<const Rational> values);

    std::size_t size() const { return gammas_.size(); }
    const Circulation& operator[](std::size_t j) const { return gammas_[j]; }
    const std::vector<Circulation>& items() const { return gammas_; }
    std::vector<double> values() const;
    // True when every circulation carries an exact rational.
    bool exact() const;

    Circulations permuted(std::span<const std::size_t> order) const;
    Circulations subset(std::span<const std::size_t> indices) const;

private:
    std::vector<Circulation> gammas_;
};

// Complex velocity w of the background, coefficients low-to-high degree.
struct BackgroundFlow {
    std::vector<Cx> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Cx operator()(Cx zeta) const;
};

struct VortexProblem {
    Circulations circulations;
    int m = 1;
    // Coefficients of W, low-to-high, length m (degree <= m-1).
    std::vector<Cx> W;
    // z_physical = scale * u_normalized.
    Cx scale{1.0, 0.0};
    // Physical background; for pre-normalized input this is -(z^m + W)/(2*pi*i).
    BackgroundFlow background;
    bool pre_normalized = false;

    std::size_t n() const { return circulations.size(); }
    double gamma(std::size_t j) const { return circulations[j].value(); }
    // Gamma_i * Gamma_j.
    double gamma_pair(std::size_t i, std::size_t j) const { return gamma(i) * gamma(j); }
    // sum_{i != j} Gamma_i.
    double gamma_others(std::size_t j) const;

    // u^m + W(u).
    Cx normalized_velocity(Cx u) const;
    Cx W_at(Cx u) const;
    std::vector<Cx> to_physical(std::span<const Cx> u) const;
};

// An ordered list of polynomials; polys[k] = 0 is the k-th equation.
struct PolySystem {
    std::vector<MPoly> polys;
    std::vector<int> degrees;

    std::size_t size() const { return polys.size(); }
    std::size_t n_vars() const { return polys.empty() ? 0 : polys.front().n_vars(); }
    std::vector<Cx> eval(std::span<const Cx> z) const;
    double residual_norm(std::span<const Cx> z) const;
};

VortexProblem normalize(const Circulations& gammas, const BackgroundFlow& w);
VortexProblem from_normalized(const Circulations& gammas, int m, std::vector<Cx> W);

// z_j^m + W(z_j) - L_j(z). Throws CollisionError on coincident coordinates.
std::vector<Cx> build_rational_residual(const VortexProblem& prob, std::span<const Cx> z);

PolySystem build_poly_system(const VortexProblem& prob);

// Entry (i, j) = Gamma_j z_j^i, 0-based.
Eigen::MatrixXcd transform_matrix(const Circulations& gammas, std::span<const Cx> z);

struct GenericityReport {
    bool subset_sums_ok = true;
    bool pair_sum_ok = true;
    bool exact = false;
    // 0-based index sets whose circulation sum vanishes.
    std::vector<std::vector<std::size_t>> failing_subsets;

    bool ok() const { return subset_sums_ok && pair_sum_ok; }
};

GenericityReport check_genericity(const Circulations& gammas);

struct Bounds {
    std::uint64_t bezout = 0;
    std::uint64_t refined = 0;
};

// Throws std::overflow_error past 64 bits.
Bounds bounds(int m, int n);

void to_json(nlohmann::json& j, const GenericityReport& r);
void to_json(nlohmann::json& j, const PolySystem& s);

} // namespace vortexeq
