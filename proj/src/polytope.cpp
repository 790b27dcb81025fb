#include "vortexeq/polytope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace vortexeq {

namespace {

using Vec3 = std::array<std::int64_t, 3>;

Vec3 diff3(const LatticePoint& a, const LatticePoint& b)
{
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Vec3 cross3(const Vec3& u, const Vec3& v)
{
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

std::int64_t dot3(const Vec3& u, const Vec3& v)
{
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

bool is_zero3(const Vec3& v)
{
    return v[0] == 0 && v[1] == 0 && v[2] == 0;
}

using P2 = std::array<std::int64_t, 2>;

std::int64_t cross2(const P2& o, const P2& a, const P2& b)
{
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Monotone chain over index-tagged points; returns indices of strict hull
// vertices in cyclic order. Input must not be collinear.
std::vector<std::size_t> hull2d(const std::vector<P2>& pts)
{
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    idx.erase(std::unique(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a] == pts[b]; }),
              idx.end());
    if (idx.size() < 3)
        return idx;

    std::vector<std::size_t> h(2 * idx.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        while (k >= 2 && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[idx[i]]) <= 0)
            --k;
        h[k++] = idx[i];
    }
    for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[idx[i]]) <= 0)
            --k;
        h[k++] = idx[i];
    }
    h.resize(k - 1);
    return h;
}

std::size_t dominant_axis(const Vec3& n)
{
    std::size_t a = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::llabs(n[i]) > std::llabs(n[a]))
            a = i;
    return a;
}

// Project 3D points onto the two axes other than `drop`.
std::vector<P2> project(const std::vector<LatticePoint>& pts, std::size_t drop)
{
    std::vector<P2> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        P2 q{};
        std::size_t t = 0;
        for (std::size_t i = 0; i < 3; ++i)
            if (i != drop)
                q[t++] = p[i];
        out.push_back(q);
    }
    return out;
}

void dedupe(std::vector<LatticePoint>& pts)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// Cyclically ordered vertex rings of the facets of a full-dimensional 3D hull.
std::vector<std::vector<LatticePoint>> facets3d(const std::vector<LatticePoint>& pts)
{
    std::set<std::pair<Vec3, std::int64_t>> planes;
    const std::size_t N = pts.size();
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i + 1; j < N; ++j) {
            const Vec3 u = diff3(pts[j], pts[i]);
            for (std::size_t k = j + 1; k < N; ++k) {
                Vec3 nrm = cross3(u, diff3(pts[k], pts[i]));
                if (is_zero3(nrm))
                    continue;
                bool pos = false, neg = false;
                for (const auto& p : pts) {
                    const auto s = dot3(nrm, diff3(p, pts[i]));
                    pos |= s > 0;
                    neg |= s < 0;
                    if (pos && neg)
                        break;
                }
                if (pos && neg)
                    continue;
                if (pos)
                    for (auto& c : nrm)
                        c = -c;
                const std::int64_t g = std::gcd(std::gcd(nrm[0], nrm[1]), nrm[2]);
                for (auto& c : nrm)
                    c /= g;
                planes.emplace(nrm, dot3(nrm, Vec3{pts[i][0], pts[i][1], pts[i][2]}));
            }
        }
    }

    std::vector<std::vector<LatticePoint>> rings;
    for (const auto& [nrm, off] : planes) {
        std::vector<LatticePoint> on;
        for (const auto& p : pts)
            if (dot3(nrm, Vec3{p[0], p[1], p[2]}) == off)
                on.push_back(p);
        const auto order = hull2d(project(on, dominant_axis(nrm)));
        std::vector<LatticePoint> ring;
        for (auto i : order)
            ring.push_back(on[i]);
        rings.push_back(std::move(ring));
    }
    return rings;
}

enum class Shape { point, segment, planar, solid };

struct Frame3 {
    Shape shape = Shape::point;
    Vec3 normal{};
};

Frame3 classify3(const std::vector<LatticePoint>& pts)
{
    Frame3 f;
    if (pts.size() < 2)
        return f;
    const Vec3 v1 = diff3(pts[1], pts[0]);
    f.shape = Shape::segment;
    std::size_t second = 0;
    for (std::size_t i = 2; i < pts.size(); ++i) {
        const Vec3 c = cross3(v1, diff3(pts[i], pts[0]));
        if (!is_zero3(c)) {
            f.shape = Shape::planar;
            f.normal = c;
            second = i;
            break;
        }
    }
    if (f.shape != Shape::planar)
        return f;
    for (std::size_t i = second + 1; i < pts.size(); ++i)
        if (dot3(f.normal, diff3(pts[i], pts[0])) != 0) {
            f.shape = Shape::solid;
            break;
        }
    return f;
}

bool collinear2(const std::vector<LatticePoint>& pts)
{
    for (std::size_t i = 2; i < pts.size(); ++i)
        if (cross2(P2{pts[0][0], pts[0][1]}, P2{pts[1][0], pts[1][1]}, P2{pts[i][0], pts[i][1]}) != 0)
            return false;
    return true;
}

std::vector<LatticePoint> extreme_points(std::size_t dim, std::vector<LatticePoint> pts)
{
    dedupe(pts);
    if (pts.size() <= 2)
        return pts;
    // Lexicographic extremes are the endpoints of a collinear set.
    auto ends = [&] { return std::vector<LatticePoint>{pts.front(), pts.back()}; };

    if (dim == 1)
        return ends();

    if (dim == 2) {
        if (collinear2(pts))
            return ends();
        std::vector<P2> q;
        for (const auto& p : pts)
            q.push_back({p[0], p[1]});
        std::vector<LatticePoint> out;
        for (auto i : hull2d(q))
            out.push_back(pts[i]);
        dedupe(out);
        return out;
    }

    const Frame3 f = classify3(pts);
    std::vector<LatticePoint> out;
    switch (f.shape) {
    case Shape::point:
    case Shape::segment:
        return ends();
    case Shape::planar:
        for (auto i : hull2d(project(pts, dominant_axis(f.normal))))
            out.push_back(pts[i]);
        break;
    case Shape::solid:
        for (const auto& ring : facets3d(pts))
            out.insert(out.end(), ring.begin(), ring.end());
        break;
    }
    dedupe(out);
    return out;
}

// d such that pts spans exactly d*Delta_n (with all pure powers present), if so.
std::optional<std::int64_t> as_simplex(std::size_t dim, const std::vector<LatticePoint>& pts)
{
    std::int64_t d = 0;
    for (const auto& p : pts) {
        std::int64_t s = 0;
        for (auto c : p) {
            if (c < 0)
                return std::nullopt;
            s += c;
        }
        d = std::max(d, s);
    }
    std::vector<bool> corner(dim, false);
    bool origin = false;
    for (const auto& p : pts) {
        const auto nz = std::count_if(p.begin(), p.end(), [](auto c) { return c != 0; });
        if (nz == 0)
            origin = true;
        if (nz == 1 && d > 0) {
            for (std::size_t j = 0; j < dim; ++j)
                if (p[j] == d)
                    corner[j] = true;
        }
    }
    if (!origin)
        return std::nullopt;
    if (d == 0)
        return 0;
    if (std::all_of(corner.begin(), corner.end(), [](bool b) { return b; }))
        return d;
    return std::nullopt;
}

std::int64_t factorial(std::size_t n)
{
    std::int64_t f = 1;
    for (std::size_t k = 2; k <= n; ++k)
        f *= static_cast<std::int64_t>(k);
    return f;
}

} // namespace

LatticePolytope::LatticePolytope(std::size_t dim, std::vector<LatticePoint> vertices)
    : dim_(dim), vertices_(std::move(vertices))
{
}

LatticePolytope LatticePolytope::hull(std::size_t dim, std::vector<LatticePoint> points)
{
    if (dim == 0)
        throw std::invalid_argument("LatticePolytope: dimension must be positive");
    if (points.empty())
        throw std::invalid_argument("LatticePolytope: empty point set");
    for (const auto& p : points)
        if (p.size() != dim)
            throw std::invalid_argument("LatticePolytope: point has wrong dimension");

    if (dim <= 3)
        return LatticePolytope(dim, extreme_points(dim, std::move(points)));

    dedupe(points);
    if (points.size() == 1)
        return LatticePolytope(dim, std::move(points));
    if (auto d = as_simplex(dim, points))
        return simplex(dim, *d);
    throw std::invalid_argument("LatticePolytope: dimension > 3 is supported only for dilated simplices");
}

LatticePolytope LatticePolytope::simplex(std::size_t dim, std::int64_t dilation)
{
    if (dilation < 0)
        throw std::invalid_argument("LatticePolytope::simplex: negative dilation");
    std::vector<LatticePoint> v{LatticePoint(dim, 0)};
    if (dilation > 0) {
        for (std::size_t j = 0; j < dim; ++j) {
            LatticePoint e(dim, 0);
            e[j] = dilation;
            v.push_back(std::move(e));
        }
    }
    dedupe(v);
    return LatticePolytope(dim, std::move(v));
}

std::optional<std::int64_t> LatticePolytope::simplex_dilation() const
{
    auto d = as_simplex(dim_, vertices_);
    if (d && *this == simplex(dim_, *d))
        return d;
    return std::nullopt;
}

std::int64_t LatticePolytope::normalized_volume() const
{
    const auto& v = vertices_;
    if (dim_ > 3) {
        auto d = simplex_dilation();
        if (!d)
            throw std::invalid_argument("normalized_volume: dimension > 3 needs a dilated simplex");
        std::int64_t out = 1;
        for (std::size_t k = 0; k < dim_; ++k)
            out *= *d;
        return out;
    }
    if (v.size() <= dim_)
        return 0;
    if (dim_ == 1)
        return v.back()[0] - v.front()[0];
    if (dim_ == 2) {
        std::vector<P2> q;
        for (const auto& p : v)
            q.push_back({p[0], p[1]});
        const auto ring = hull2d(q);
        std::int64_t twice = 0;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const auto& a = q[ring[i]];
            const auto& b = q[ring[(i + 1) % ring.size()]];
            twice += a[0] * b[1] - a[1] * b[0];
        }
        return std::llabs(twice);
    }
    if (classify3(v).shape != Shape::solid)
        return 0;
    // Cone over every facet from a fixed vertex; tetrahedra with apex on the
    // facet plane contribute zero.
    const auto& apex = v.front();
    std::int64_t six = 0;
    for (const auto& ring : facets3d(v)) {
        for (std::size_t t = 1; t + 1 < ring.size(); ++t) {
            const Vec3 a = diff3(ring[0], apex), b = diff3(ring[t], apex), c = diff3(ring[t + 1], apex);
            six += std::llabs(dot3(a, cross3(b, c)));
        }
    }
    return six;
}

LatticePolytope newton_polytope(const MPoly& p)
{
    const std::size_t n = p.n_vars();
    std::vector<LatticePoint> pts{LatticePoint(n, 0)};
    for (const auto& r : p.support())
        pts.emplace_back(r.begin(), r.end());
    return LatticePolytope::hull(n, std::move(pts));
}

LatticePolytope minkowski_sum(const LatticePolytope& P, const LatticePolytope& Q)
{
    if (P.dim() != Q.dim())
        throw std::invalid_argument("minkowski_sum: dimension mismatch");
    const auto dp = P.simplex_dilation();
    const auto dq = Q.simplex_dilation();
    if (dp && dq)
        return LatticePolytope::simplex(P.dim(), *dp + *dq);

    std::vector<LatticePoint> pts;
    pts.reserve(P.vertices().size() * Q.vertices().size());
    for (const auto& a : P.vertices()) {
        for (const auto& b : Q.vertices()) {
            LatticePoint s(a.size());
            for (std::size_t j = 0; j < s.size(); ++j)
                s[j] = a[j] + b[j];
            pts.push_back(std::move(s));
        }
    }
    return LatticePolytope::hull(P.dim(), std::move(pts));
}

ReducedSystem reduce_system(const PolySystem& system, std::span<const std::int64_t> alpha)
{
    const std::size_t n = system.n_vars();
    if (alpha.size() != n)
        throw std::invalid_argument("reduce_system: alpha has wrong length");
    if (std::all_of(alpha.begin(), alpha.end(), [](auto a) { return a == 0; }))
        throw std::invalid_argument("reduce_system: alpha must be nonzero");

    auto weight = [&](const Monomial& r) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < n; ++j)
            s += alpha[j] * r[j];
        return s;
    };

    ReducedSystem out;
    out.alpha.assign(alpha.begin(), alpha.end());
    for (const auto& P : system.polys) {
        MPoly R(n);
        if (!P.is_zero()) {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (const auto& kv : P.terms())
                best = std::min(best, weight(kv.first));
            for (const auto& [r, c] : P.terms())
                if (weight(r) == best)
                    R.add_term(r, c);
        }
        out.polys.push_back(std::move(R));
    }
    return out;
}

std::vector<std::int64_t> FaceDescriptor::representative_alpha(std::size_t n) const
{
    std::vector<std::int64_t> a(n, 0);
    for (auto j : subset)
        a.at(j) = -1;
    return a;
}

std::vector<FaceDescriptor> enumerate_facet_faces(std::size_t n)
{
    if (n < 1 || n > 20)
        throw std::invalid_argument("enumerate_facet_faces: need 1 <= n <= 20");
    std::vector<FaceDescriptor> out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        FaceDescriptor f;
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (1u << j))
                f.subset.push_back(j);
        out.push_back(std::move(f));
    }
    return out;
}

bool TorusCheck::agree() const
{
    if (!oracle)
        return true;
    // A found solution contradicts a criterion that rules them out.
    return !(criterion == TorusVerdict::no_solution && *oracle == TorusVerdict::has_solution);
}

std::optional<bool> TorusCheck::has_torus_solution() const
{
    if (!agree())
        return std::nullopt;
    if (criterion == TorusVerdict::no_solution)
        return false;
    if (oracle && *oracle == TorusVerdict::has_solution)
        return true;
    return std::nullopt;
}

TorusCheck special_reduced_solvable(const Circulations& gammas_subset, int m, const TorusOracleConfig& cfg)
{
    const std::size_t k = gammas_subset.size();
    if (k < 1)
        throw std::invalid_argument("special_reduced_solvable: empty subset");
    if (m < 1)
        throw std::invalid_argument("special_reduced_solvable: m must be >= 1");

    TorusCheck out;
    out.criterion = check_genericity(gammas_subset).subset_sums_ok ? TorusVerdict::no_solution
                                                                    : TorusVerdict::undetermined;
    if (k > 3)
        return out;

    const auto g = gammas_subset.values();
    const auto K = static_cast<Eigen::Index>(k);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> radius(0.5, 1.5);

    // The equations are weighted-homogeneous, so solutions come in C* orbits.
    // A random linear normalization c.z = 1 picks one point per orbit and
    // excludes the origin; Gauss-Newton handles the (k+1) x k system.
    auto F = [&](const Eigen::VectorXcd& z) {
        Eigen::VectorXcd f(K);
        for (Eigen::Index i = 0; i < K; ++i) {
            Cx s(0.0);
            for (Eigen::Index j = 0; j < K; ++j)
                s += g[j] * std::pow(z(j), m + static_cast<int>(i));
            f(i) = s;
        }
        return f;
    };

    out.oracle = TorusVerdict::no_solution;
    for (int start = 0; start < cfg.starts; ++start) {
        Eigen::VectorXcd c(K), z(K);
        for (Eigen::Index j = 0; j < K; ++j) {
            c(j) = std::polar(1.0, angle(rng));
            z(j) = std::polar(radius(rng), angle(rng));
        }
        for (int it = 0; it < cfg.max_iterations; ++it) {
            Eigen::VectorXcd r(K + 1);
            r.head(K) = F(z);
            r(K) = c.dot(z) - 1.0;  // dot() conjugates c; any fixed vector works.
            Eigen::MatrixXcd J(K + 1, K);
            for (Eigen::Index i = 0; i < K; ++i)
                for (Eigen::Index j = 0; j < K; ++j) {
                    const int e = m + static_cast<int>(i);
                    J(i, j) = g[j] * static_cast<double>(e) * std::pow(z(j), e - 1);
                }
            J.row(K) = c.adjoint();
            const Eigen::VectorXcd step = J.completeOrthogonalDecomposition().solve(r);
            z -= step;
            if (!z.allFinite() || step.norm() <= 1e-15 * (1.0 + z.norm()))
                break;
        }
        if (!z.allFinite())
            continue;
        const double top = z.cwiseAbs().maxCoeff();
        if (top == 0.0)
            continue;
        const Eigen::VectorXcd unit = z / top;
        if (unit.cwiseAbs().minCoeff() <= cfg.min_modulus)
            continue;
        if (F(unit).cwiseAbs().maxCoeff() < cfg.residual_tol) {
            out.oracle = TorusVerdict::has_solution;
            out.witness.assign(z.data(), z.data() + K);
            break;
        }
    }
    return out;
}

FinitenessCertificate finiteness_certificate(const PolySystem& system, const Circulations& gammas,
                                             std::uint64_t seed)
{
    const std::size_t n = system.size();
    if (n == 0 || gammas.size() != n || system.n_vars() != n)
        throw std::invalid_argument("finiteness_certificate: system and circulations disagree in size");

    FinitenessCertificate cert;
    cert.m = system.degrees.front();
    const int m = cert.m;
    cert.a_n = static_cast<std::int64_t>(n) * m + static_cast<std::int64_t>(n * (n - 1) / 2);

    // Every Newton polytope must be (m+k-1)*Delta_n so their sum is a_n*Delta_n
    // and the relevant alphas support it at a face of the outer facet.
    cert.newton_polytopes_ok = true;
    LatticePolytope total = LatticePolytope::simplex(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto Nk = newton_polytope(system.polys[k]);
        if (Nk != LatticePolytope::simplex(n, m + static_cast<std::int64_t>(k)))
            cert.newton_polytopes_ok = false;
        total = minkowski_sum(total, Nk);
    }
    if (total != LatticePolytope::simplex(n, cert.a_n))
        cert.newton_polytopes_ok = false;

    cert.constant_term_nonzero = n < 2 || system.polys[1].coeff(Monomial(n, 0)) != Cx(0.0);

    const auto values = gammas.values();
    bool all_ok = true;
    std::uint64_t face_seed = seed;
    for (auto& face : enumerate_facet_faces(n)) {
        FaceVerdict fv;
        fv.face = face;
        const auto alpha = face.representative_alpha(n);
        fv.reduced = reduce_system(system, alpha);

        // Expected: sum_{j in J} Gamma_j z_j^{m+k-1} in every equation.
        fv.special_form = true;
        for (std::size_t k = 0; k < n && fv.special_form; ++k) {
            const auto& R = fv.reduced.polys[k];
            if (R.size() != face.subset.size()) {
                fv.special_form = false;
                break;
            }
            for (auto j : face.subset) {
                Monomial r(n, 0);
                r[j] = m + static_cast<int>(k);
                const Cx c = R.coeff(r);
                if (std::abs(c - values[j]) > 1e-12 * std::abs(values[j])) {
                    fv.special_form = false;
                    break;
                }
            }
        }

        TorusOracleConfig ocfg;
        ocfg.seed = face_seed++;
        fv.check = special_reduced_solvable(gammas.subset(face.subset), m, ocfg);
        if (!fv.special_form)
            fv.check.criterion = TorusVerdict::undetermined;
        fv.ok = fv.special_form && fv.check.has_torus_solution() == false;
        all_ok = all_ok && fv.ok;
        cert.faces.push_back(std::move(fv));
    }
    cert.ok = all_ok && cert.newton_polytopes_ok && cert.constant_term_nonzero;
    return cert;
}

std::uint64_t mixed_volume_simplices(std::span<const std::int64_t> dilations)
{
    if (dilations.empty())
        throw std::invalid_argument("mixed_volume_simplices: need n >= 1");
    std::uint64_t out = 1;
    for (auto d : dilations) {
        if (d <= 0)
            throw std::invalid_argument("mixed_volume_simplices: dilations must be positive");
        if (__builtin_mul_overflow(out, static_cast<std::uint64_t>(d), &out))
            throw std::overflow_error("mixed_volume_simplices: exceeds 64-bit range");
    }
    return out;
}

Rational mixed_volume_oracle(std::span<const LatticePolytope> polytopes)
{
    const std::size_t n = polytopes.size();
    if (n != 2 && n != 3)
        throw std::invalid_argument("mixed_volume_oracle: only n = 2 or 3 supported");
    for (const auto& P : polytopes)
        if (P.dim() != n)
            throw std::invalid_argument("mixed_volume_oracle: polytope dimension must equal n");

    std::int64_t acc = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        LatticePolytope sum = LatticePolytope::simplex(n, 0);
        int size = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                sum = minkowski_sum(sum, polytopes[i]);
                ++size;
            }
        const std::int64_t v = sum.normalized_volume();
        acc += ((n - size) % 2 == 0) ? v : -v;
    }
    return Rational(acc, factorial(n));
}

const char* to_string(TorusVerdict v)
{
    switch (v) {
    case TorusVerdict::no_solution: return "no_solution";
    case TorusVerdict::has_solution: return "has_solution";
    case TorusVerdict::undetermined: return "undetermined";
    }
    return "undetermined";
}

void to_json(nlohmann::json& j, const LatticePolytope& P)
{
    j = {{"dim", P.dim()}, {"vertices", P.vertices()}};
}

void to_json(nlohmann::json& j, const FinitenessCertificate& c)
{
    nlohmann::json faces = nlohmann::json::array();
    for (const auto& f : c.faces) {
        nlohmann::json subset = nlohmann::json::array();
        for (auto i : f.face.subset)
            subset.push_back(i + 1);
        faces.push_back({{"subset", std::move(subset)},
                         {"alpha", f.reduced.alpha},
                         {"reduced_system", f.reduced.polys},
                         {"special_form", f.special_form},
                         {"criterion_verdict", to_string(f.check.criterion)},
                         {"oracle_verdict", f.check.oracle ? to_string(*f.check.oracle) : "not_run"},
                         {"ok", f.ok}});
    }
    j = {{"status", c.ok ? "ok" : "inconclusive"},
         {"m", c.m},
         {"alpha0", "ones"},
         {"a_n", c.a_n},
         {"newton_polytopes_ok", c.newton_polytopes_ok},
         {"constant_term_nonzero", c.constant_term_nonzero},
         {"faces", std::move(faces)}};
}

} // namespace vortexeq
