/*
 * polytope.hpp
 * ------------
 * Newton polytopes, reduced (face) systems and mixed volumes.
 *
 * Hulls are computed exactly over the integers for dimensions 1..3. In
 * higher dimension only dilated standard simplices d*Delta_n are handled,
 * which is all the vortex systems ever produce.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vortexeq/mpoly.hpp"
#include "vortexeq/vortex_system.hpp"

namespace vortexeq {

using LatticePoint = std::vector<std::int64_t>;

class LatticePolytope {
public:
    // Convex hull of the given points; keeps only extreme points.
    static LatticePolytope hull(std::size_t dim, std::vector<LatticePoint> points);
    // Vertices {0, d e_1, ..., d e_n}.
    static LatticePolytope simplex(std::size_t dim, std::int64_t dilation);

    std::size_t dim() const { return dim_; }
    // Sorted lexicographically.
    const std::vector<LatticePoint>& vertices() const { return vertices_; }
    // d when this polytope is exactly d*Delta_n (d >= 0).
    std::optional<std::int64_t> simplex_dilation() const;

    // dim! * volume, exact. Zero for lower-dimensional polytopes.
    std::int64_t normalized_volume() const;

    friend bool operator==(const LatticePolytope&, const LatticePolytope&) = default;

private:
    LatticePolytope(std::size_t dim, std::vector<LatticePoint> vertices);

    std::size_t dim_ = 0;
    std::vector<LatticePoint> vertices_;
};

// Hull of support(p) together with the origin.
LatticePolytope newton_polytope(const MPoly& p);
LatticePolytope minkowski_sum(const LatticePolytope& P, const LatticePolytope& Q);

struct ReducedSystem {
    std::vector<std::int64_t> alpha;
    std::vector<MPoly> polys;
};

// Keeps, per equation, the terms minimizing alpha . r over the support.
ReducedSystem reduce_system(const PolySystem& system, std::span<const std::int64_t> alpha);

struct FaceDescriptor {
    // 0-based coordinate indices spanning the face.
    std::vector<std::size_t> subset;

    // alpha_j = -1 on the subset, 0 elsewhere.
    std::vector<std::int64_t> representative_alpha(std::size_t n) const;
};

// All nonempty subsets of {0..n-1}, in binary-counter order.
std::vector<FaceDescriptor> enumerate_facet_faces(std::size_t n);

enum class TorusVerdict { no_solution, has_solution, undetermined };

struct TorusCheck {
    TorusVerdict criterion = TorusVerdict::undetermined;
    // Empty when the subset is too large for the numeric search.
    std::optional<TorusVerdict> oracle;
    // Witness found by the numeric search, if any.
    std::vector<Cx> witness;

    bool agree() const;
    // True: torus solution exists. False: none. Empty: undetermined.
    std::optional<bool> has_torus_solution() const;
};

struct TorusOracleConfig {
    int starts = 200;
    int max_iterations = 60;
    double residual_tol = 1e-10;
    double min_modulus = 1e-6;
    std::uint64_t seed = 0;
};

// System sum_{j in J} Gamma_j z_j^{m+i-1} = 0, i = 1..|J|, over (C*)^|J|.
TorusCheck special_reduced_solvable(const Circulations& gammas_subset, int m,
                                    const TorusOracleConfig& cfg = {});

struct FaceVerdict {
    FaceDescriptor face;
    ReducedSystem reduced;
    bool special_form = false;
    TorusCheck check;
    bool ok = false;
};

struct FinitenessCertificate {
    bool ok = false;
    int m = 0;
    std::int64_t a_n = 0;
    bool newton_polytopes_ok = false;
    bool constant_term_nonzero = false;
    std::vector<FaceVerdict> faces;
};

// Reduced-system test with alpha_0 = (1,...,1) over every face of the
// facet of a_n*Delta_n. Never reports ok when a face is undetermined.
FinitenessCertificate finiteness_certificate(const PolySystem& system, const Circulations& gammas,
                                             std::uint64_t seed = 0);

// Product of the dilations: MV(d_1 Delta_n, ..., d_n Delta_n).
std::uint64_t mixed_volume_simplices(std::span<const std::int64_t> dilations);

// Inclusion-exclusion over Minkowski sums with exact volumes, n in {2, 3}.
Rational mixed_volume_oracle(std::span<const LatticePolytope> polytopes);

void to_json(nlohmann::json& j, const LatticePolytope& P);
void to_json(nlohmann::json& j, const FinitenessCertificate& c);
const char* to_string(TorusVerdict v);

} // namespace vortexeq
