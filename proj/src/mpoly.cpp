#include "vortexeq/mpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace vortexeq {

int monomial_degree(const Monomial& r)
{
    return std::accumulate(r.begin(), r.end(), 0);
}

bool GrlexDescending::operator()(const Monomial& a, const Monomial& b) const
{
    const int da = monomial_degree(a);
    const int db = monomial_degree(b);
    if (da != db)
        return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

MPoly::MPoly(std::size_t n_vars) : n_vars_(n_vars)
{
    if (n_vars == 0)
        throw std::invalid_argument("MPoly: need at least one variable");
}

MPoly MPoly::constant(std::size_t n_vars, Cx c)
{
    MPoly p(n_vars);
    p.add_term(Monomial(n_vars, 0), c);
    return p;
}

MPoly MPoly::variable(std::size_t n_vars, std::size_t j, int power, Cx coeff)
{
    if (j >= n_vars)
        throw std::invalid_argument("MPoly::variable: index out of range");
    Monomial r(n_vars, 0);
    r[j] = power;
    return term(std::move(r), coeff);
}

MPoly MPoly::term(Monomial exponents, Cx coeff)
{
    MPoly p(exponents.size());
    p.add_term(exponents, coeff);
    return p;
}

void MPoly::add_term(const Monomial& exponents, Cx coeff)
{
    if (exponents.size() != n_vars_)
        throw std::invalid_argument("MPoly: monomial has wrong number of variables");
    if (std::any_of(exponents.begin(), exponents.end(), [](int e) { return e < 0; }))
        throw std::invalid_argument("MPoly: negative exponent");
    if (!std::isfinite(coeff.real()) || !std::isfinite(coeff.imag()))
        throw std::invalid_argument("MPoly: non-finite coefficient");
    if (coeff == Cx(0.0))
        return;

    auto [it, inserted] = terms_.try_emplace(exponents, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == Cx(0.0))
            terms_.erase(it);
    }
}

Cx MPoly::coeff(const Monomial& exponents) const
{
    auto it = terms_.find(exponents);
    return it == terms_.end() ? Cx(0.0) : it->second;
}

Cx MPoly::eval(std::span<const Cx> z) const
{
    return eval_as<Cx>(z);
}

MPoly MPoly::derivative(std::size_t j) const
{
    if (j >= n_vars_)
        throw std::invalid_argument("MPoly::derivative: index out of range");
    MPoly d(n_vars_);
    for (const auto& [r, c] : terms_) {
        if (r[j] == 0)
            continue;
        Monomial s = r;
        s[j] -= 1;
        d.add_term(s, c * static_cast<double>(r[j]));
    }
    return d;
}

std::vector<Monomial> MPoly::support() const
{
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& kv : terms_)
        out.push_back(kv.first);
    return out;
}

int MPoly::total_degree() const
{
    if (terms_.empty())
        throw std::invalid_argument("MPoly::total_degree: zero polynomial");
    // Leading term under graded order carries the maximal degree.
    return monomial_degree(terms_.begin()->first);
}

int MPoly::max_exponent(std::size_t j) const
{
    int top = 0;
    for (const auto& kv : terms_)
        top = std::max(top, kv.first[j]);
    return top;
}

void MPoly::check_same_ring(const MPoly& q) const
{
    if (q.n_vars_ != n_vars_)
        throw std::invalid_argument("MPoly: variable-count mismatch");
}

MPoly& MPoly::operator+=(const MPoly& q)
{
    check_same_ring(q);
    for (const auto& [r, c] : q.terms_)
        add_term(r, c);
    return *this;
}

MPoly& MPoly::operator-=(const MPoly& q)
{
    check_same_ring(q);
    for (const auto& [r, c] : q.terms_)
        add_term(r, -c);
    return *this;
}

MPoly& MPoly::operator*=(Cx s)
{
    if (s == Cx(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= s;
        if (it->second == Cx(0.0))
            it = terms_.erase(it);
        else
            ++it;
    }
    return *this;
}

MPoly operator*(const MPoly& p, const MPoly& q)
{
    p.check_same_ring(q);
    MPoly out(p.n_vars_);
    Monomial r(p.n_vars_);
    for (const auto& [a, ca] : p.terms_) {
        for (const auto& [b, cb] : q.terms_) {
            for (std::size_t j = 0; j < r.size(); ++j)
                r[j] = a[j] + b[j];
            out.add_term(r, ca * cb);
        }
    }
    return out;
}

MPoly add(const MPoly& p, const MPoly& q) { return p + q; }
MPoly mul(const MPoly& p, const MPoly& q) { return p * q; }

std::string MPoly::to_string() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (const auto& [r, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << '(' << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (r[j] == 0)
                continue;
            os << "*z" << (j + 1);
            if (r[j] > 1)
                os << '^' << r[j];
        }
    }
    return os.str();
}

void to_json(nlohmann::json& j, const MPoly& p)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [r, c] : p.terms())
        terms.push_back({{"exp", r}, {"re", c.real()}, {"im", c.imag()}});
    j = {{"n_vars", p.n_vars()}, {"terms", std::move(terms)}};
}

MPoly mpoly_from_json(const nlohmann::json& j)
{
    MPoly p(j.at("n_vars").get<std::size_t>());
    for (const auto& t : j.at("terms"))
        p.add_term(t.at("exp").get<Monomial>(), Cx(t.at("re").get<double>(), t.value("im", 0.0)));
    return p;
}

} // namespace vortexeq
