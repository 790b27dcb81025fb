/*
 * pipeline.hpp
 * ------------
 * Problem files, the end-to-end run and the summary tables.
 *
 * A problem file is JSON:
 *
 *   {"name": "...",
 *    "gammas": [1, 1, {"num": -5, "den": 4}],      // or "-5/4", or 0.5
 *    "w_coeffs": [[re, im], ...]}                   // physical w, low-to-high
 *
 * or, for input already in normalized form,
 *
 *   {"name": "...", "gammas": [...], "pre_normalized": true,
 *    "m": 2, "W_coeffs": [[re, im], ...]}           // W, low-to-high, length <= m
 *
 * Integers, {"num","den"} objects and "p/q" strings are exact. A single
 * floating-point circulation makes the whole set inexact.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vortexeq/configurations.hpp"
#include "vortexeq/equilibria.hpp"
#include "vortexeq/polytope.hpp"
#include "vortexeq/solver.hpp"
#include "vortexeq/vortex_system.hpp"

namespace vortexeq {

struct ProblemSpec {
    std::string name;
    Circulations circulations;
    bool pre_normalized = false;
    BackgroundFlow w;
    int m = 0;
    std::vector<Cx> W;

    VortexProblem problem() const;
};

ProblemSpec parse_problem(const nlohmann::json& j);
ProblemSpec load_problem(const std::filesystem::path& path);
void to_json(nlohmann::json& j, const ProblemSpec& p);

struct RunResult {
    ProblemSpec spec;
    VortexProblem problem;
    std::uint64_t seed = 0;
    GenericityReport genericity;
    Bounds bounds;
    PolySystem system;
    FinitenessCertificate certificate;
    SolutionSet solutions;
    std::vector<Equilibrium> equilibria;
    Classification classification;

    // "a/b/c": classes / distinct admissible solutions / solutions with multiplicity.
    std::string cell() const;
    // 0 ok, 2 genericity fails, 1 every path diverged on a generic problem.
    int exit_code() const;
};

RunResult run_pipeline(const ProblemSpec& spec, std::uint64_t seed, const HomotopyConfig& cfg = {});

nlohmann::json header_json(const RunResult& r);
nlohmann::json solutions_json(const RunResult& r);
nlohmann::json certificate_json(const RunResult& r);
nlohmann::json classification_json(const RunResult& r);
// One line per cluster: index, multiplicity, admissible, residuals, coordinates.
std::string solutions_csv(const RunResult& r);

struct TableCell {
    // Empty: the case does not exist ("---").
    std::vector<std::filesystem::path> problems;
};

struct TableRow {
    std::string label;
    std::vector<TableCell> cells;
};

struct TableBatch {
    std::string title;
    std::vector<std::string> columns;
    std::vector<TableRow> rows;
};

// Problem paths are resolved relative to the batch file.
TableBatch load_table_batch(const std::filesystem::path& path);

struct TableReport {
    TableBatch batch;
    // Cell text per row and column; variants that disagree are joined with ", ".
    std::vector<std::vector<std::string>> cells;
    std::vector<std::vector<RunResult>> runs;

    std::string text() const;
};

TableReport table_report(const TableBatch& batch, std::uint64_t seed, const HomotopyConfig& cfg = {});
void to_json(nlohmann::json& j, const TableReport& t);

} // namespace vortexeq
