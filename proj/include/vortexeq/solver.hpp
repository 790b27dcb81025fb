/*
 * solver.hpp
 * ----------
 * Total-degree homotopy continuation with endpoint clustering.
 *
 * The homotopy is H(z, s) = s*gamma*g(z) + (1 - s)*f(z), tracked from s = 1
 * (start system g) to s = 0 (target f). Far from s = 0 an Euler predictor
 * and Newton corrector advance with an adaptive step. Below
 * `endgame_start` the path is sampled on the geometric sequence
 * s_k = endgame_start * 2^-k; the growth of successive samples separates
 * paths running off to infinity from paths converging to a finite
 * (possibly multiple) root. Converging endpoints are polished by Newton's
 * method on f in 113-bit precision, which brings a triple root to roughly
 * 1e-11 instead of the 1e-5 double precision allows.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "vortexeq/mpoly.hpp"
#include "vortexeq/vortex_system.hpp"

namespace vortexeq {

struct HomotopyConfig {
    double step_init = 0.05;
    double step_min = 1e-7;
    double newton_tol = 1e-12;
    double endpoint_tol = 1e-9;
    double cluster_radius = 1e-5;
    int max_steps = 10000;
    Cx gamma_twist{0.8, 0.6};

    // Relative Newton tolerance for the corrector while tracking.
    double track_tol = 1e-9;
    double endgame_start = 0.05;
    double endgame_final = 1e-9;
    double divergence_norm = 1e8;

    void validate() const;
};

enum class PathOutcome { converged, diverged, failed };

struct TrackedPath {
    std::size_t path_id = 0;
    std::vector<Cx> start_root;
    std::vector<Cx> endpoint;
    PathOutcome outcome = PathOutcome::failed;
    int steps_taken = 0;
    double final_residual = 0.0;
    std::string note;

    bool converged() const { return outcome == PathOutcome::converged; }
};

struct StartSystem {
    PolySystem system;
    std::vector<Cx> constants;
    std::vector<std::vector<Cx>> roots;
};

// g_k = z_k^{d_k} - c_k with random unit-modulus c_k drawn from `seed`.
StartSystem start_system(std::span<const int> degrees, std::uint64_t seed);
StartSystem start_system(std::span<const int> degrees, std::span<const Cx> constants);

TrackedPath track_path(const PolySystem& target, const PolySystem& start, std::span<const Cx> root,
                       const HomotopyConfig& cfg);

struct SolutionCluster {
    std::vector<Cx> point;
    int multiplicity = 0;
    double residual = 0.0;
    std::vector<std::size_t> path_ids;
};

struct SolutionSet {
    std::vector<SolutionCluster> clusters;
    std::size_t divergent_path_count = 0;
    std::size_t total_paths = 0;
    std::uint64_t seed = 0;
    Cx gamma_twist{1.0, 0.0};
    std::vector<TrackedPath> paths;

    int total_multiplicity() const;
};

struct PolishResult {
    std::vector<Cx> point;
    double residual = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Newton on the target at s = 0 in extended precision.
PolishResult polish_root(const PolySystem& target, std::span<const Cx> z0, const HomotopyConfig& cfg);

// Single-linkage clustering of converged endpoints, then a polished
// residual-weighted centroid per cluster. Non-converged paths count as divergent.
SolutionSet cluster_endpoints(const PolySystem& target, std::span<const TrackedPath> paths,
                              const HomotopyConfig& cfg);

// start_system -> track every path -> cluster. Deterministic in `seed`;
// gamma_twist is drawn from the seed. VORTEXEQ_THREADS caps worker threads.
SolutionSet solve(const PolySystem& system, HomotopyConfig cfg, std::uint64_t seed);

std::size_t worker_threads();

const char* to_string(PathOutcome o);
void write_path_log(std::ostream& os, const SolutionSet& sols);
void to_json(nlohmann::json& j, const SolutionSet& s);

} // namespace vortexeq
