/*
 * configurations.hpp
 * ------------------
 * Grouping of admissible equilibria into fixed equilibrium configurations.
 *
 * Two solutions z, z' are equivalent when an affine map zeta -> a*zeta + b
 * satisfies a * V_{z'}(a*zeta + b) = V_z(zeta). Comparing the analytic parts
 * pins (a, b) to a finite set determined by the background alone; comparing
 * the poles and residues then reduces the test to matching the multiset
 * {((z'_j - b)/a, Gamma_j)} against {(z_j, Gamma_j)}.
 *
 * All of this works in normalized coordinates, where the background is
 * w_N(zeta) = zeta^m + W(zeta).
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vortexeq/equilibria.hpp"
#include "vortexeq/vortex_system.hpp"

namespace vortexeq {

inline constexpr double equivalence_tol = 1e-6;

struct SpeciesBlock {
    double value = 0.0;
    std::optional<Rational> exact;
    std::vector<std::size_t> indices;
};

struct SpeciesPartition {
    std::vector<SpeciesBlock> blocks;
    // species_of[j] = block index of vortex j.
    std::vector<std::size_t> species_of;

    std::size_t species_count() const { return blocks.size(); }
    std::vector<std::size_t> sizes() const;
};

// Equal circulations share a block; exact comparison for rational input,
// tolerance 1e-12 otherwise. Blocks are ordered by first index.
SpeciesPartition species_partition(const Circulations& gammas);

struct AffineMap {
    Cx a{1.0, 0.0};
    Cx b{0.0, 0.0};

    AffineMap() = default;
    AffineMap(Cx a_, Cx b_);

    Cx apply(Cx zeta) const { return a * zeta + b; }
    AffineMap inverse() const;
    // (*this) after `first`: zeta -> a*(first(zeta)) + b.
    AffineMap after(const AffineMap& first) const;
};

// Maps with a * w_N(a*zeta + b) = w_N(zeta), verified coefficient-wise to
// 1e-10. (1, 0) first, then by increasing arg(a) in [0, 2*pi).
std::vector<AffineMap> candidate_maps(const VortexProblem& prob);

// First map under which the poles of eq2, pulled back by the map, match the
// poles of eq1 with equal circulations. The map sends eq1's poles onto eq2's.
std::optional<AffineMap> equivalent(const Equilibrium& eq1, const Equilibrium& eq2, std::span<const AffineMap> maps,
                                    const Circulations& gammas);

// (1/(2*pi*i)) * (sum_j Gamma_j / (zeta - z_j) - w_N(zeta)).
Cx normalized_complex_velocity(const VortexProblem& prob, std::span<const Cx> z, Cx zeta);

// max |a * V_{z'}(a*zeta + b) - V_z(zeta)| over `samples` random points
// kept away from the poles.
double witness_defect(const VortexProblem& prob, const Equilibrium& eq1, const Equilibrium& eq2, const AffineMap& map,
                      int samples = 10, std::uint64_t seed = 0);

struct Witness {
    std::size_t from = 0;
    std::size_t to = 0;
    AffineMap map;
};

struct ConfigurationClass {
    // Indices into the equilibrium list, ascending.
    std::vector<std::size_t> members;
    std::size_t representative = 0;
    // One witness per successful pairwise test inside the class.
    std::vector<Witness> witnesses;
};

using BigInt = boost::multiprecision::cpp_int;

struct Classification {
    std::vector<ConfigurationClass> classes;
    std::vector<AffineMap> maps;
    std::size_t admissible_count = 0;
    BigInt bound = 0;

    bool attained() const { return BigInt(classes.size()) == bound; }
};

// Inadmissible entries are skipped. Classes are ordered by smallest member.
Classification classify(std::span<const Equilibrium> equilibria, const VortexProblem& prob);

// (m+n-1)! / ((m-1)! * n_1! * ... * n_k!).
BigInt config_bound(int m, int n, const SpeciesPartition& partition);

void to_json(nlohmann::json& j, const AffineMap& map);
void to_json(nlohmann::json& j, const SpeciesPartition& p);
void to_json(nlohmann::json& j, const Classification& c);
nlohmann::json bigint_json(const BigInt& v);

} // namespace vortexeq
