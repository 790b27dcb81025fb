#include "vortexeq/equilibria.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace vortexeq {

namespace {

constexpr Cx kTwoPiI{0.0, 2.0 * std::numbers::pi};

nlohmann::json points_json(std::span<const Cx> z)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : z)
        a.push_back({v.real(), v.imag()});
    return a;
}

// Non-finite residuals (inadmissible solutions) serialize as null.
nlohmann::json json_number(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

} // namespace

double min_separation(std::span<const Cx> z)
{
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j)
            d = std::min(d, std::abs(z[i] - z[j]));
    return d;
}

std::vector<Equilibrium> filter_admissible(const SolutionSet& solutions, const VortexProblem& prob)
{
    std::vector<Equilibrium> out;
    out.reserve(solutions.clusters.size());
    for (const auto& c : solutions.clusters) {
        Equilibrium e;
        e.z = c.point;
        e.z_physical = prob.to_physical(c.point);
        e.multiplicity = c.multiplicity;
        e.admissible = min_separation(e.z) > collision_tol;
        if (e.admissible) {
            double r = 0.0;
            for (const auto& v : build_rational_residual(prob, e.z))
                r = std::max(r, std::abs(v));
            e.rational_residual = r;
            e.dynamics_residual = dynamics_residual(prob, prob.background, e.z_physical);
        } else {
            e.rational_residual = std::numeric_limits<double>::infinity();
            e.dynamics_residual = std::numeric_limits<double>::infinity();
        }
        out.push_back(std::move(e));
    }
    return out;
}

double dynamics_residual(const VortexProblem& prob, const BackgroundFlow& w, std::span<const Cx> z)
{
    if (z.size() != prob.n())
        throw std::invalid_argument("dynamics_residual: wrong number of vortices");
    double worst = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        Cx s(0.0);
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (k == j)
                continue;
            const Cx d = std::conj(z[j] - z[k]);
            if (std::abs(d) == 0.0)
                throw CollisionError();
            s += prob.gamma(k) / d;
        }
        worst = std::max(worst, std::abs(-s / kTwoPiI + std::conj(w(z[j]))));
    }
    return worst;
}

GridSpec GridSpec::parse(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        parts.push_back(item);
    if (parts.size() != 5)
        throw std::invalid_argument("grid must be \"xmin,xmax,ymin,ymax,res\"");
    GridSpec g;
    try {
        g.xmin = std::stod(parts[0]);
        g.xmax = std::stod(parts[1]);
        g.ymin = std::stod(parts[2]);
        g.ymax = std::stod(parts[3]);
        std::size_t used = 0;
        g.resolution = std::stoi(parts[4], &used);
        if (parts[4].find_first_not_of(" ", used) != std::string::npos)
            throw std::invalid_argument("resolution");
    } catch (const std::logic_error&) {
        throw std::invalid_argument("grid must be \"xmin,xmax,ymin,ymax,res\" with numeric fields");
    }
    g.validate();
    return g;
}

void GridSpec::validate() const
{
    if (!(std::isfinite(xmin) && std::isfinite(xmax) && std::isfinite(ymin) && std::isfinite(ymax)))
        throw std::invalid_argument("grid: bounds must be finite");
    if (!(xmin < xmax && ymin < ymax))
        throw std::invalid_argument("grid: need xmin < xmax and ymin < ymax");
    if (resolution < 2)
        throw std::invalid_argument("grid: resolution must be >= 2");
}

double GridSpec::x(int i) const
{
    return xmin + (xmax - xmin) * i / (resolution - 1);
}

double GridSpec::y(int j) const
{
    return ymin + (ymax - ymin) * j / (resolution - 1);
}

double GridSpec::cell_diagonal() const
{
    return std::hypot((xmax - xmin) / (resolution - 1), (ymax - ymin) / (resolution - 1));
}

Cx complex_velocity(const VortexProblem& prob, std::span<const Cx> z, Cx zeta, FieldPart part)
{
    Cx vort(0.0);
    if (part != FieldPart::background) {
        for (std::size_t j = 0; j < z.size(); ++j)
            vort += prob.gamma(j) / (zeta - z[j]);
        vort /= kTwoPiI;
    }
    if (part == FieldPart::vortices)
        return vort;
    const Cx bg = prob.background(zeta);
    if (part == FieldPart::background)
        return bg;
    return vort + bg;
}

FieldGrid velocity_field(const VortexProblem& prob, const Equilibrium& eq, const GridSpec& grid, FieldPart part)
{
    grid.validate();
    if (!eq.admissible)
        throw std::invalid_argument("velocity_field: equilibrium is not admissible");
    if (eq.z_physical.size() != prob.n())
        throw std::invalid_argument("velocity_field: wrong number of vortices");

    FieldGrid out;
    out.spec = grid;
    out.pole_radius = 2.0 * grid.cell_diagonal();
    const std::size_t cells = static_cast<std::size_t>(grid.resolution) * grid.resolution;
    out.values.assign(cells, Cx(0.0));
    out.pole_mask.assign(cells, false);

    for (int iy = 0; iy < grid.resolution; ++iy) {
        for (int ix = 0; ix < grid.resolution; ++ix) {
            const Cx zeta(grid.x(ix), grid.y(iy));
            const std::size_t k = out.index(ix, iy);
            bool masked = false;
            for (const auto& zj : eq.z_physical)
                masked = masked || std::abs(zeta - zj) <= out.pole_radius;
            out.pole_mask[k] = masked;
            if (masked)
                continue;
            // Each part is evaluated on its own and then summed, so the total
            // equals vortices + background bit for bit.
            const Cx vort = part == FieldPart::background ? Cx(0.0)
                                                          : complex_velocity(prob, eq.z_physical, zeta, FieldPart::vortices);
            const Cx bg = part == FieldPart::vortices ? Cx(0.0)
                                                      : complex_velocity(prob, eq.z_physical, zeta, FieldPart::background);
            out.values[k] = part == FieldPart::total ? vort + bg : (part == FieldPart::vortices ? vort : bg);
        }
    }
    return out;
}

void export_field(const FieldGrid& grid, std::ostream& os)
{
    os << "x,y,u,v,masked,vre,vim\n";
    os << std::setprecision(17);
    for (int iy = 0; iy < grid.spec.resolution; ++iy) {
        for (int ix = 0; ix < grid.spec.resolution; ++ix) {
            const std::size_t k = grid.index(ix, iy);
            const bool masked = grid.pole_mask[k];
            const Cx v = masked ? Cx(0.0) : grid.values[k];
            // -0.0 would make the text depend on the sign of a zero; print +0.
            const double u = v.real() + 0.0;
            const double vv = -v.imag() + 0.0;
            os << grid.spec.x(ix) << ',' << grid.spec.y(iy) << ',' << u << ',' << vv << ','
               << (masked ? 1 : 0) << ',' << u << ',' << (v.imag() + 0.0) << '\n';
        }
    }
}

void export_field(const FieldGrid& grid, const std::string& path)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open " + path + " for writing");
    export_field(grid, f);
    if (!f)
        throw std::runtime_error("failed writing " + path);
}

void to_json(nlohmann::json& j, const Equilibrium& e)
{
    j = {{"z", points_json(e.z)},
         {"z_physical", points_json(e.z_physical)},
         {"multiplicity", e.multiplicity},
         {"residuals", {{"rational", json_number(e.rational_residual)}, {"dynamics", json_number(e.dynamics_residual)}}},
         {"admissible", e.admissible}};
}

} // namespace vortexeq
