/*
 * equilibria.hpp
 * --------------
 * Admissibility, physical verification and velocity-field sampling.
 *
 * The complex velocity generated by vortices z_j in a background w is
 *
 *     V(zeta) = (1/(2*pi*i)) * sum_j Gamma_j / (zeta - z_j) + w(zeta),
 *
 * and the flow vector field is conj(V). Fields are sampled in physical
 * coordinates with the physical background, so for pre-normalized input
 * w = -(zeta^m + W(zeta)) / (2*pi*i).
 */
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vortexeq/solver.hpp"
#include "vortexeq/vortex_system.hpp"

namespace vortexeq {

inline constexpr double collision_tol = 1e-8;

struct Equilibrium {
    std::vector<Cx> z;
    std::vector<Cx> z_physical;
    int multiplicity = 1;
    double rational_residual = 0.0;
    double dynamics_residual = 0.0;
    bool admissible = false;
};

double min_separation(std::span<const Cx> z);

// One Equilibrium per cluster, same order. Inadmissible clusters are kept
// with infinite residuals.
std::vector<Equilibrium> filter_admissible(const SolutionSet& solutions, const VortexProblem& prob);

// max_j |-(1/(2 pi i)) sum_{k != j} Gamma_k / conj(z_j - z_k) + conj(w(z_j))|.
// Throws CollisionError on coincident points.
double dynamics_residual(const VortexProblem& prob, const BackgroundFlow& w, std::span<const Cx> z_physical);

struct GridSpec {
    double xmin = -2.0;
    double xmax = 2.0;
    double ymin = -2.0;
    double ymax = 2.0;
    int resolution = 41;

    // "xmin,xmax,ymin,ymax,res"
    static GridSpec parse(const std::string& text);
    void validate() const;
    double x(int i) const;
    double y(int j) const;
    double cell_diagonal() const;
};

enum class FieldPart { total, vortices, background };

struct FieldGrid {
    GridSpec spec;
    // Row-major with y outer: index = iy * resolution + ix.
    std::vector<Cx> values;
    std::vector<bool> pole_mask;
    double pole_radius = 0.0;

    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * spec.resolution + ix; }
};

// Masked cells hold zero. Throws std::invalid_argument for inadmissible input.
FieldGrid velocity_field(const VortexProblem& prob, const Equilibrium& eq, const GridSpec& grid,
                         FieldPart part = FieldPart::total);

// V at a single point in physical coordinates, no masking.
Cx complex_velocity(const VortexProblem& prob, std::span<const Cx> z_physical, Cx zeta,
                    FieldPart part = FieldPart::total);

// Columns x,y,u,v,masked,vre,vim with (u, v) = (Re V, -Im V), the flow
// conj(V), and (vre, vim) = (Re V, Im V).
void export_field(const FieldGrid& grid, std::ostream& os);
void export_field(const FieldGrid& grid, const std::string& path);

void to_json(nlohmann::json& j, const Equilibrium& e);

} // namespace vortexeq
