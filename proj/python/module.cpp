#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vortexeq/pipeline.hpp"

namespace py = pybind11;
using namespace vortexeq;

namespace {

// Results cross the boundary as JSON text; the Python side decodes them.
RunResult run_json(const std::string& problem, std::uint64_t seed)
{
    return run_pipeline(parse_problem(nlohmann::json::parse(problem)), seed);
}

py::dict field(const std::string& problem, std::uint64_t seed, int solution, const std::string& grid,
               const std::string& part)
{
    const auto r = run_json(problem, seed);
    std::ptrdiff_t k = solution;
    if (k < 0) {
        for (std::size_t i = 0; i < r.equilibria.size() && k < 0; ++i)
            if (r.equilibria[i].admissible)
                k = static_cast<std::ptrdiff_t>(i);
        if (k < 0)
            throw std::runtime_error("no admissible solution to sample");
    }
    if (static_cast<std::size_t>(k) >= r.equilibria.size())
        throw py::index_error("solution index out of range");
    FieldPart p = FieldPart::total;
    if (part == "vortices")
        p = FieldPart::vortices;
    else if (part == "background")
        p = FieldPart::background;
    else if (part != "total")
        throw std::invalid_argument("part must be total, vortices or background");

    const auto g = velocity_field(r.problem, r.equilibria[k], GridSpec::parse(grid), p);
    const auto n = static_cast<py::ssize_t>(g.spec.resolution);
    py::array_t<std::complex<double>> values({n, n});
    py::array_t<bool> mask({n, n});
    py::array_t<double> x(n), y(n);
    auto v = values.mutable_unchecked<2>();
    auto mk = mask.mutable_unchecked<2>();
    for (py::ssize_t iy = 0; iy < n; ++iy) {
        y.mutable_at(iy) = g.spec.y(static_cast<int>(iy));
        x.mutable_at(iy) = g.spec.x(static_cast<int>(iy));
        for (py::ssize_t ix = 0; ix < n; ++ix) {
            const auto idx = g.index(static_cast<int>(ix), static_cast<int>(iy));
            v(iy, ix) = g.values[idx];
            mk(iy, ix) = g.pole_mask[idx];
        }
    }
    py::dict out;
    out["solution"] = k;
    out["x"] = x;
    out["y"] = y;
    out["values"] = values;
    out["mask"] = mask;
    out["pole_radius"] = g.pole_radius;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Fixed equilibria of point vortices in a polynomial background flow";

    m.def("solve", [](const std::string& problem, std::uint64_t seed) {
        return solutions_json(run_json(problem, seed)).dump();
    }, py::arg("problem"), py::arg("seed") = 0);

    m.def("certify", [](const std::string& problem, std::uint64_t seed) {
        return certificate_json(run_json(problem, seed)).dump();
    }, py::arg("problem"), py::arg("seed") = 0);

    m.def("classify", [](const std::string& problem, std::uint64_t seed) {
        return classification_json(run_json(problem, seed)).dump();
    }, py::arg("problem"), py::arg("seed") = 0);

    m.def("summary", [](const std::string& problem, std::uint64_t seed) {
        const auto r = run_json(problem, seed);
        return py::make_tuple(r.cell(), r.exit_code());
    }, py::arg("problem"), py::arg("seed") = 0);

    m.def("field", &field, py::arg("problem"), py::arg("seed") = 0, py::arg("solution") = -1,
          py::arg("grid") = "-2,2,-2,2,41", py::arg("part") = "total");

    m.def("table", [](const std::string& batch, std::uint64_t seed) {
        return table_report(load_table_batch(batch), seed).text();
    }, py::arg("batch"), py::arg("seed") = 0);

    m.def("bounds", [](int mm, int n) {
        const auto b = bounds(mm, n);
        return py::make_tuple(b.bezout, b.refined);
    }, py::arg("m"), py::arg("n"));

    m.def("config_bound", [](int mm, const std::vector<std::size_t>& sizes) {
        SpeciesPartition p;
        std::size_t n = 0;
        for (auto s : sizes) {
            p.blocks.push_back({1.0, std::nullopt, std::vector<std::size_t>(s)});
            n += s;
        }
        return config_bound(mm, static_cast<int>(n), p).str();
    }, py::arg("m"), py::arg("species_sizes"));

    py::register_exception<CollisionError>(m, "CollisionError", PyExc_ValueError);
}
