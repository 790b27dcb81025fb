#include "vortexeq/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include <Eigen/Dense>
#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace vortexeq {

namespace {

using QCx = boost::multiprecision::complex128;
using QVec = Eigen::Matrix<QCx, Eigen::Dynamic, 1>;
using QMat = Eigen::Matrix<QCx, Eigen::Dynamic, Eigen::Dynamic>;

double norm2(std::span<const Cx> z)
{
    double s = 0.0;
    for (const auto& v : z)
        s += std::norm(v);
    return std::sqrt(s);
}

double distance(std::span<const Cx> a, std::span<const Cx> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

using Jacobian = std::vector<std::vector<MPoly>>;

Jacobian jacobian_of(const PolySystem& sys)
{
    Jacobian J(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i)
        for (std::size_t j = 0; j < sys.n_vars(); ++j)
            J[i].push_back(sys.polys[i].derivative(j));
    return J;
}

// H(z, s) = s*gamma*g + (1-s)*f with analytic partials.
class Homotopy {
public:
    Homotopy(const PolySystem& target, const PolySystem& start, Cx gamma)
        : f_(target), g_(start), Jf_(jacobian_of(target)), Jg_(jacobian_of(start)), gamma_(gamma)
    {
        if (target.size() != start.size() || target.n_vars() != start.n_vars() || target.size() != target.n_vars())
            throw std::invalid_argument("homotopy: target and start must be square systems of equal size");
    }

    std::size_t n() const { return f_.size(); }

    void eval(const Eigen::VectorXcd& z, double s, Eigen::VectorXcd& H, Eigen::MatrixXcd& Hz,
              Eigen::VectorXcd* Hs) const
    {
        const auto N = static_cast<Eigen::Index>(n());
        std::span<const Cx> zs(z.data(), n());
        H.resize(N);
        Hz.resize(N, N);
        if (Hs)
            Hs->resize(N);
        const Cx a = s * gamma_;
        const double b = 1.0 - s;
        for (Eigen::Index i = 0; i < N; ++i) {
            const Cx fi = f_.polys[i].eval(zs);
            const Cx gi = g_.polys[i].eval(zs);
            H(i) = a * gi + b * fi;
            if (Hs)
                (*Hs)(i) = gamma_ * gi - fi;
            for (Eigen::Index j = 0; j < N; ++j)
                Hz(i, j) = a * Jg_[i][j].eval(zs) + b * Jf_[i][j].eval(zs);
        }
    }

    const PolySystem& target() const { return f_; }
    const Jacobian& target_jacobian() const { return Jf_; }

private:
    const PolySystem& f_;
    const PolySystem& g_;
    Jacobian Jf_;
    Jacobian Jg_;
    Cx gamma_;
};

PolishResult polish_with(const PolySystem& f, const Jacobian& J, std::span<const Cx> z0, const HomotopyConfig& cfg)
{
    const auto N = static_cast<Eigen::Index>(f.size());
    QVec z(N);
    for (Eigen::Index i = 0; i < N; ++i)
        z(i) = QCx(z0[i].real(), z0[i].imag());

    auto residual_q = [&](const QVec& x) {
        std::span<const QCx> xs(x.data(), static_cast<std::size_t>(N));
        QVec r(N);
        for (Eigen::Index i = 0; i < N; ++i)
            r(i) = f.polys[i].eval_as<QCx>(xs);
        return r;
    };
    auto qnorm = [](const QVec& v) {
        boost::multiprecision::float128 s = 0;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            s += boost::multiprecision::norm(v(i));
        return sqrt(s);
    };

    PolishResult out;
    QVec best = z;
    QVec r = residual_q(z);
    auto best_res = qnorm(r);
    constexpr int kMaxIterations = 160;
    for (int it = 0; it < kMaxIterations; ++it) {
        std::span<const QCx> zs(z.data(), static_cast<std::size_t>(N));
        QMat Jq(N, N);
        for (Eigen::Index i = 0; i < N; ++i)
            for (Eigen::Index j = 0; j < N; ++j)
                Jq(i, j) = J[i][j].eval_as<QCx>(zs);
        const QVec step = Jq.partialPivLu().solve(r);
        const auto step_norm = qnorm(step);
        if (!isfinite(step_norm))
            break;
        z -= step;
        ++out.iterations;
        const auto z_norm = qnorm(z);
        if (!isfinite(z_norm) || z_norm > cfg.divergence_norm)
            break;
        r = residual_q(z);
        const auto res = qnorm(r);
        if (res < best_res) {
            best_res = res;
            best = z;
        }
        if (res == 0 || step_norm <= 1e-30 * (1 + z_norm))
            break;
    }

    out.point.resize(N);
    for (Eigen::Index i = 0; i < N; ++i)
        out.point[i] = Cx(static_cast<double>(best(i).real()), static_cast<double>(best(i).imag()));
    out.residual = f.residual_norm(out.point);
    out.converged = std::isfinite(out.residual) && out.residual < cfg.endpoint_tol
        && std::isfinite(norm2(out.point));
    return out;
}

class PathTracker {
public:
    PathTracker(const Homotopy& h, const HomotopyConfig& cfg) : h_(h), cfg_(cfg) {}

    TrackedPath run(std::span<const Cx> root) const
    {
        TrackedPath path;
        path.start_root.assign(root.begin(), root.end());
        const auto N = static_cast<Eigen::Index>(h_.n());
        Eigen::VectorXcd z(N);
        for (Eigen::Index i = 0; i < N; ++i)
            z(i) = root[i];

        State st{z, 1.0, cfg_.step_init, 0};
        // Main segment: s from 1 down to endgame_start with absolute step floor.
        if (!advance(st, cfg_.endgame_start, cfg_.step_min, path))
            return finish(path, st);

        // Endgame: geometric samples s_k, step floor relative to s.
        std::vector<Eigen::VectorXcd> samples{st.z};
        double s_target = cfg_.endgame_start;
        while (s_target > cfg_.endgame_final) {
            s_target *= 0.5;
            st.h = std::min(st.h, st.s - s_target);
            const double floor = cfg_.step_min * s_target / cfg_.endgame_start;
            if (!advance(st, s_target, floor, path))
                return finish(path, st);
            samples.push_back(st.z);
        }
        return decide(path, st, samples);
    }

private:
    struct State {
        Eigen::VectorXcd z;
        double s;
        double h;
        int successes;
    };

    bool correct(Eigen::VectorXcd& z, double s) const
    {
        Eigen::VectorXcd H;
        Eigen::MatrixXcd Hz;
        double prev = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 4; ++it) {
            h_.eval(z, s, H, Hz, nullptr);
            const Eigen::VectorXcd d = Hz.partialPivLu().solve(H);
            const double nd = d.norm();
            if (!std::isfinite(nd))
                return false;
            z -= d;
            const double scale = 1.0 + z.norm();
            if (it == 0 && nd > 0.25 * scale)
                return false;
            if (nd <= cfg_.track_tol * scale)
                return true;
            if (it > 0 && nd > 0.5 * prev)
                return false;
            prev = nd;
        }
        return false;
    }

    // Moves st.s down to s_end. False stops the path (outcome recorded in `path`).
    bool advance(State& st, double s_end, double h_floor, TrackedPath& path) const
    {
        const double h_max = std::max(cfg_.step_init, 0.1);
        Eigen::VectorXcd H, Hs;
        Eigen::MatrixXcd Hz;
        while (st.s > s_end) {
            if (path.steps_taken >= cfg_.max_steps) {
                path.outcome = PathOutcome::failed;
                path.note = "max_steps";
                return false;
            }
            double h = std::min({st.h, h_max, st.s - s_end});
            h_.eval(st.z, st.s, H, Hz, &Hs);
            const Eigen::VectorXcd dz = Hz.partialPivLu().solve(Hs);  // dz/ds = -Hz^{-1} Hs
            Eigen::VectorXcd z1 = st.z + h * dz;                       // s decreases by h
            const double s1 = (st.s - h <= s_end) ? s_end : st.s - h;
            ++path.steps_taken;
            if (dz.allFinite() && correct(z1, s1)) {
                st.z = z1;
                st.s = s1;
                if (++st.successes >= 3) {
                    st.h = std::min(2.0 * h, h_max);
                    st.successes = 0;
                } else {
                    st.h = h;
                }
                if (st.z.norm() > cfg_.divergence_norm) {
                    path.outcome = PathOutcome::diverged;
                    path.note = "norm";
                    return false;
                }
            } else {
                st.h = 0.5 * h;
                st.successes = 0;
                if (st.h < h_floor) {
                    path.outcome = PathOutcome::diverged;
                    path.note = "step_underflow";
                    return false;
                }
            }
        }
        return true;
    }

    TrackedPath finish(TrackedPath& path, const State& st) const
    {
        path.endpoint.assign(st.z.data(), st.z.data() + st.z.size());
        path.final_residual = std::numeric_limits<double>::infinity();
        return path;
    }

    TrackedPath decide(TrackedPath& path, const State& st, const std::vector<Eigen::VectorXcd>& samples) const
    {
        const std::size_t K = samples.size() - 1;
        auto delta = [&](std::size_t k) { return (samples[k] - samples[k - 1]).norm(); };
        const double last = delta(K);
        const double scale = 1.0 + samples[K].norm();

        // Successive samples spread apart for paths heading to infinity
        // (|z| ~ s^-q) and draw together for finite endpoints.
        constexpr std::size_t window = 5;
        if (K > window && last > 1e-10 * scale) {
            const double ratio = std::pow(last / delta(K - window), 1.0 / window);
            if (ratio > 1.05 && samples[K].norm() > samples[K - window].norm()) {
                path.outcome = PathOutcome::diverged;
                path.note = "growing";
                return finish(path, st);
            }
        }

        std::span<const Cx> zk(samples[K].data(), static_cast<std::size_t>(samples[K].size()));
        const auto pol = polish_with(h_.target(), h_.target_jacobian(), zk, cfg_);
        path.endpoint = pol.point;
        path.final_residual = pol.residual;
        const double moved = distance(pol.point, zk);
        if (pol.converged && moved <= std::max(1e-6 * scale, 50.0 * last)) {
            path.outcome = PathOutcome::converged;
        } else {
            path.outcome = PathOutcome::failed;
            path.note = pol.converged ? "polish_jumped" : "polish_failed";
        }
        return path;
    }

    const Homotopy& h_;
    const HomotopyConfig& cfg_;
};

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

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn)
{
    const std::size_t workers = std::min(worker_threads(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
                fn(i);
        });
}

} // namespace

void HomotopyConfig::validate() const
{
    if (!(0 < step_min && step_min <= step_init && step_init < 1))
        throw std::invalid_argument("HomotopyConfig: need 0 < step_min <= step_init < 1");
    if (!(newton_tol > 0 && endpoint_tol > 0 && cluster_radius > 0 && track_tol > 0))
        throw std::invalid_argument("HomotopyConfig: tolerances must be positive");
    if (!(0 < endgame_final && endgame_final < endgame_start && endgame_start < 1))
        throw std::invalid_argument("HomotopyConfig: need 0 < endgame_final < endgame_start < 1");
    if (max_steps <= 0)
        throw std::invalid_argument("HomotopyConfig: max_steps must be positive");
    if (std::abs(gamma_twist) == 0.0)
        throw std::invalid_argument("HomotopyConfig: gamma_twist must be nonzero");
}

StartSystem start_system(std::span<const int> degrees, std::span<const Cx> constants)
{
    const std::size_t n = degrees.size();
    if (n == 0 || constants.size() != n)
        throw std::invalid_argument("start_system: need one constant per degree");

    StartSystem out;
    out.constants.assign(constants.begin(), constants.end());
    std::vector<std::vector<Cx>> per_coord(n);
    std::size_t count = 1;
    for (std::size_t k = 0; k < n; ++k) {
        const int d = degrees[k];
        if (d < 1)
            throw std::invalid_argument("start_system: degrees must be >= 1");
        if (constants[k] == Cx(0.0))
            throw std::invalid_argument("start_system: constants must be nonzero");
        MPoly g = MPoly::variable(n, k, d);
        g.add_term(Monomial(n, 0), -constants[k]);
        out.system.polys.push_back(std::move(g));
        out.system.degrees.push_back(d);

        const double r = std::pow(std::abs(constants[k]), 1.0 / d);
        const double a = std::arg(constants[k]);
        for (int j = 0; j < d; ++j)
            per_coord[k].push_back(std::polar(r, (a + 2.0 * std::numbers::pi * j) / d));
        count *= static_cast<std::size_t>(d);
    }

    // Mixed-radix enumeration, last coordinate fastest.
    out.roots.reserve(count);
    std::vector<std::size_t> digit(n, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::vector<Cx> root(n);
        for (std::size_t k = 0; k < n; ++k)
            root[k] = per_coord[k][digit[k]];
        out.roots.push_back(std::move(root));
        for (std::size_t k = n; k-- > 0;) {
            if (++digit[k] < per_coord[k].size())
                break;
            digit[k] = 0;
        }
    }
    return out;
}

StartSystem start_system(std::span<const int> degrees, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Cx> c(degrees.size());
    for (auto& v : c)
        v = std::polar(1.0, angle(rng));
    return start_system(degrees, c);
}

TrackedPath track_path(const PolySystem& target, const PolySystem& start, std::span<const Cx> root,
                       const HomotopyConfig& cfg)
{
    cfg.validate();
    const Homotopy h(target, start, cfg.gamma_twist);
    return PathTracker(h, cfg).run(root);
}

PolishResult polish_root(const PolySystem& target, std::span<const Cx> z0, const HomotopyConfig& cfg)
{
    if (z0.size() != target.n_vars() || target.size() != target.n_vars())
        throw std::invalid_argument("polish_root: square system and matching point required");
    return polish_with(target, jacobian_of(target), z0, cfg);
}

int SolutionSet::total_multiplicity() const
{
    int s = 0;
    for (const auto& c : clusters)
        s += c.multiplicity;
    return s;
}

SolutionSet cluster_endpoints(const PolySystem& target, std::span<const TrackedPath> paths,
                              const HomotopyConfig& cfg)
{
    SolutionSet out;
    out.total_paths = paths.size();
    out.paths.assign(paths.begin(), paths.end());
    std::sort(out.paths.begin(), out.paths.end(),
              [](const TrackedPath& a, const TrackedPath& b) { return a.path_id < b.path_id; });

    std::vector<std::size_t> good;
    for (std::size_t i = 0; i < out.paths.size(); ++i) {
        if (out.paths[i].converged())
            good.push_back(i);
        else
            ++out.divergent_path_count;
    }
    if (good.empty())
        return out;

    UnionFind uf(good.size());
    for (std::size_t a = 0; a < good.size(); ++a)
        for (std::size_t b = a + 1; b < good.size(); ++b)
            if (distance(out.paths[good[a]].endpoint, out.paths[good[b]].endpoint) <= cfg.cluster_radius)
                uf.unite(a, b);

    const Jacobian J = jacobian_of(target);
    std::vector<std::vector<std::size_t>> groups(good.size());
    for (std::size_t a = 0; a < good.size(); ++a)
        groups[uf.find(a)].push_back(a);

    for (const auto& grp : groups) {
        if (grp.empty())
            continue;
        const std::size_t n = target.n_vars();
        std::vector<Cx> centroid(n, Cx(0.0));
        double wsum = 0.0;
        double best_res = std::numeric_limits<double>::infinity();
        std::size_t best = good[grp.front()];
        SolutionCluster cl;
        for (auto a : grp) {
            const auto& p = out.paths[good[a]];
            const double w = 1.0 / (p.final_residual + 1e-18);
            for (std::size_t i = 0; i < n; ++i)
                centroid[i] += w * p.endpoint[i];
            wsum += w;
            if (p.final_residual < best_res) {
                best_res = p.final_residual;
                best = good[a];
            }
            cl.path_ids.push_back(p.path_id);
        }
        for (auto& v : centroid)
            v /= wsum;

        const auto pol = polish_with(target, J, centroid, cfg);
        if (pol.converged && pol.residual <= best_res) {
            cl.point = pol.point;
            cl.residual = pol.residual;
        } else {
            cl.point = out.paths[best].endpoint;
            cl.residual = best_res;
        }
        cl.multiplicity = static_cast<int>(grp.size());
        out.clusters.push_back(std::move(cl));
    }
    return out;
}

SolutionSet solve(const PolySystem& system, HomotopyConfig cfg, std::uint64_t seed)
{
    const std::size_t n = system.size();
    if (n == 0 || system.n_vars() != n)
        throw std::invalid_argument("solve: need a square nonempty system");

    std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ull);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    cfg.gamma_twist = std::polar(1.0, angle(rng));
    cfg.validate();

    std::vector<int> degrees;
    for (const auto& p : system.polys)
        degrees.push_back(p.total_degree());
    const StartSystem start = start_system(degrees, seed);

    const Homotopy h(system, start.system, cfg.gamma_twist);
    const PathTracker tracker(h, cfg);
    std::vector<TrackedPath> paths(start.roots.size());
    parallel_for(paths.size(), [&](std::size_t i) {
        paths[i] = tracker.run(start.roots[i]);
        paths[i].path_id = i;
    });

    SolutionSet out = cluster_endpoints(system, paths, cfg);
    out.seed = seed;
    out.gamma_twist = cfg.gamma_twist;
    return out;
}

std::size_t worker_threads()
{
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("VORTEXEQ_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            hw = std::min(hw, static_cast<std::size_t>(v));
    }
    return hw;
}

const char* to_string(PathOutcome o)
{
    switch (o) {
    case PathOutcome::converged: return "converged";
    case PathOutcome::diverged: return "diverged";
    case PathOutcome::failed: return "failed";
    }
    return "failed";
}

namespace {

nlohmann::json point_json(std::span<const Cx> z)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : z)
        a.push_back({v.real(), v.imag()});
    return a;
}

} // namespace

void write_path_log(std::ostream& os, const SolutionSet& sols)
{
    for (const auto& p : sols.paths) {
        nlohmann::json line = {{"path_id", p.path_id},
                               {"steps", p.steps_taken},
                               {"outcome", to_string(p.outcome)},
                               {"endpoint", point_json(p.endpoint)}};
        if (!p.note.empty())
            line["note"] = p.note;
        os << line.dump() << '\n';
    }
}

void to_json(nlohmann::json& j, const SolutionSet& s)
{
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& c : s.clusters)
        clusters.push_back({{"point", point_json(c.point)},
                            {"multiplicity", c.multiplicity},
                            {"residual", c.residual},
                            {"path_ids", c.path_ids}});
    j = {{"seed", s.seed},
         {"gamma_twist", {s.gamma_twist.real(), s.gamma_twist.imag()}},
         {"total_paths", s.total_paths},
         {"divergent_path_count", s.divergent_path_count},
         {"total_multiplicity", s.total_multiplicity()},
         {"clusters", std::move(clusters)}};
}

} // namespace vortexeq
