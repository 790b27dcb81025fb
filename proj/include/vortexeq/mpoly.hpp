/*
 * mpoly.hpp
 * ---------
 * Sparse multivariate polynomials with complex double coefficients.
 *
 * A polynomial in n variables is stored as a map from exponent vectors to
 * nonzero coefficients. Terms are kept in descending graded-lexicographic
 * order, so iteration (and serialization) starts from the leading term.
 *
 * Only exact zeros are pruned after arithmetic. Cancellation to tiny
 * values is left to the caller because supports feed the lattice code.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace vortexeq {

using Cx = std::complex<double>;
using Monomial = std::vector<int>;

// Descending graded-lex: higher total degree first, ties broken by
// lexicographic comparison with z_1 > z_2 > ... > z_n.
struct GrlexDescending {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

int monomial_degree(const Monomial& r);

class MPoly {
public:
    using TermMap = std::map<Monomial, Cx, GrlexDescending>;

    explicit MPoly(std::size_t n_vars);

    static MPoly constant(std::size_t n_vars, Cx c);
    // coeff * z_j^power, j is 0-based.
    static MPoly variable(std::size_t n_vars, std::size_t j, int power = 1, Cx coeff = 1.0);
    static MPoly term(Monomial exponents, Cx coeff);

    std::size_t n_vars() const { return n_vars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    // Accumulates into an existing term; the term is erased if the sum is exactly zero.
    void add_term(const Monomial& exponents, Cx coeff);
    Cx coeff(const Monomial& exponents) const;

    Cx eval(std::span<const Cx> z) const;

    // Evaluation in another complex scalar type (used for extended-precision polishing).
    template <class C>
    C eval_as(std::span<const C> z) const;

    MPoly derivative(std::size_t j) const;
    std::vector<Monomial> support() const;
    int total_degree() const;
    int max_exponent(std::size_t j) const;

    MPoly& operator+=(const MPoly& q);
    MPoly& operator-=(const MPoly& q);
    MPoly& operator*=(Cx s);

    friend MPoly operator+(MPoly p, const MPoly& q) { return p += q; }
    friend MPoly operator-(MPoly p, const MPoly& q) { return p -= q; }
    friend MPoly operator*(MPoly p, Cx s) { return p *= s; }
    friend MPoly operator*(Cx s, MPoly p) { return p *= s; }
    friend MPoly operator*(const MPoly& p, const MPoly& q);
    friend bool operator==(const MPoly& p, const MPoly& q) = default;

    std::string to_string() const;

private:
    void check_same_ring(const MPoly& q) const;

    std::size_t n_vars_;
    TermMap terms_;
};

MPoly add(const MPoly& p, const MPoly& q);
MPoly mul(const MPoly& p, const MPoly& q);

void to_json(nlohmann::json& j, const MPoly& p);
MPoly mpoly_from_json(const nlohmann::json& j);

template <class C>
C MPoly::eval_as(std::span<const C> z) const
{
    if (z.size() != n_vars_)
        throw std::invalid_argument("MPoly::eval: point has wrong length");

    // Power tables per variable, then a direct sum over the terms.
    std::vector<std::vector<C>> powers(n_vars_);
    for (std::size_t j = 0; j < n_vars_; ++j) {
        const int top = max_exponent(j);
        powers[j].reserve(top + 1);
        powers[j].push_back(C(1));
        for (int e = 1; e <= top; ++e)
            powers[j].push_back(powers[j].back() * z[j]);
    }

    C sum(0);
    for (const auto& [r, c] : terms_) {
        C t(c.real(), c.imag());
        for (std::size_t j = 0; j < n_vars_; ++j)
            if (r[j] != 0)
                t *= powers[j][r[j]];
        sum += t;
    }
    return sum;
}

} // namespace vortexeq
