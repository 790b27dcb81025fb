// vortexeq: fixed equilibria of point vortices in a polynomial background flow.
//
//   vortexeq solve    --problem P [--seed N] [--format json|csv] [--out DIR] [--log FILE]
//   vortexeq certify  --problem P [--seed N] [--out DIR]
//   vortexeq classify --problem P [--seed N] [--out DIR]
//   vortexeq field    --problem P [--seed N] [--solution K] [--grid G] [--part total|vortices|background] [--out DIR]
//   vortexeq table    --batch B [--seed N] [--format text|json] [--out DIR]
//   vortexeq run      --problem P [--seed N] --out DIR [--grid G]
//
// Exit status: 0 on success, 2 when the circulations fail the genericity
// condition (results are still written), 1 on errors or when every path
// diverges on a generic problem.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vortexeq/pipeline.hpp"

namespace fs = std::filesystem;
using namespace vortexeq;

namespace {

struct Options {
    std::string problem;
    std::string batch;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
    std::string grid = "-2,2,-2,2,41";
    std::string part = "total";
    std::string log;
    int solution = -1;
};

// Writes to DIR/<file> when --out is set, else to stdout.
void emit(const Options& o, const std::string& file, const std::string& text)
{
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(o.out);
    const fs::path path = fs::path(o.out) / file;
    std::ofstream f(path);
    if (!f || !(f << text))
        throw std::runtime_error("cannot write " + path.string());
}

std::string dump(const nlohmann::json& j)
{
    return j.dump(2) + "\n";
}

void write_log(const Options& o, const RunResult& r)
{
    if (o.log.empty())
        return;
    std::ofstream f(o.log);
    if (!f)
        throw std::runtime_error("cannot write " + o.log);
    write_path_log(f, r.solutions);
}

FieldPart parse_part(const std::string& s)
{
    if (s == "total")
        return FieldPart::total;
    if (s == "vortices")
        return FieldPart::vortices;
    if (s == "background")
        return FieldPart::background;
    throw std::invalid_argument("--part must be total, vortices or background");
}

// The requested equilibrium, or the first admissible one.
std::size_t pick_solution(const RunResult& r, int requested)
{
    if (requested >= 0) {
        if (static_cast<std::size_t>(requested) >= r.equilibria.size())
            throw std::invalid_argument("--solution index out of range");
        if (!r.equilibria[requested].admissible)
            throw std::invalid_argument("--solution refers to an inadmissible solution");
        return static_cast<std::size_t>(requested);
    }
    for (std::size_t i = 0; i < r.equilibria.size(); ++i)
        if (r.equilibria[i].admissible)
            return i;
    throw std::runtime_error("no admissible solution to sample");
}

std::string field_csv(const RunResult& r, std::size_t k, const GridSpec& grid, FieldPart part)
{
    std::ostringstream os;
    export_field(velocity_field(r.problem, r.equilibria[k], grid, part), os);
    return os.str();
}

int cmd_solve(const Options& o)
{
    const auto r = run_pipeline(load_problem(o.problem), o.seed);
    if (o.format == "csv")
        emit(o, "solutions.csv", solutions_csv(r));
    else
        emit(o, "solutions.json", dump(solutions_json(r)));
    write_log(o, r);
    return r.exit_code();
}

int cmd_certify(const Options& o)
{
    const auto spec = load_problem(o.problem);
    RunResult r;
    r.spec = spec;
    r.seed = o.seed;
    r.problem = spec.problem();
    r.genericity = check_genericity(r.problem.circulations);
    r.bounds = bounds(r.problem.m, static_cast<int>(r.problem.n()));
    r.system = build_poly_system(r.problem);
    r.certificate = finiteness_certificate(r.system, r.problem.circulations, o.seed);
    auto j = certificate_json(r);
    j.erase("gamma_twist");
    emit(o, "certificate.json", dump(j));
    return r.genericity.ok() ? 0 : 2;
}

int cmd_classify(const Options& o)
{
    const auto r = run_pipeline(load_problem(o.problem), o.seed);
    emit(o, "classification.json", dump(classification_json(r)));
    return r.exit_code();
}

int cmd_field(const Options& o)
{
    const auto grid = GridSpec::parse(o.grid);
    const auto part = parse_part(o.part);
    const auto r = run_pipeline(load_problem(o.problem), o.seed);
    const auto k = pick_solution(r, o.solution);
    emit(o, "field_" + std::to_string(k) + ".csv", field_csv(r, k, grid, part));
    return r.exit_code() == 2 ? 2 : 0;
}

int cmd_table(const Options& o)
{
    const auto report = table_report(load_table_batch(o.batch), o.seed);
    if (o.format == "json")
        emit(o, "table.json", dump(nlohmann::json(report)));
    else
        emit(o, "table.txt", report.text());
    return 0;
}

int cmd_run(const Options& o)
{
    const auto r = run_pipeline(load_problem(o.problem), o.seed);
    emit(o, "solutions.json", dump(solutions_json(r)));
    emit(o, "certificate.json", dump(certificate_json(r)));
    emit(o, "classification.json", dump(classification_json(r)));
    std::ostringstream log;
    write_path_log(log, r.solutions);
    emit(o, "paths.jsonl", log.str());
    const auto grid = GridSpec::parse(o.grid);
    for (std::size_t k = 0; k < r.equilibria.size(); ++k)
        if (r.equilibria[k].admissible)
            emit(o, "field_" + std::to_string(k) + ".csv", field_csv(r, k, grid, FieldPart::total));
    std::cout << r.spec.name << ": " << r.cell() << "\n";
    return r.exit_code();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fixed equilibria of point vortices in a polynomial background flow"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool needs_problem) {
        auto* p = sub->add_option("--problem", o.problem, "Problem JSON file");
        if (needs_problem)
            p->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "Random seed (64-bit)");
        sub->add_option("--out", o.out, "Output directory (default: stdout)");
    };

    auto* solve = app.add_subcommand("solve", "Solve the polynomial system and report all solutions");
    add_common(solve, true);
    solve->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    solve->add_option("--log", o.log, "Per-path JSON-lines log file");

    auto* certify = app.add_subcommand("certify", "Genericity, bounds and the finiteness certificate");
    add_common(certify, true);

    auto* classify = app.add_subcommand("classify", "Group admissible solutions into configurations");
    add_common(classify, true);

    auto* field = app.add_subcommand("field", "Sample the complex velocity of one equilibrium on a grid (CSV)");
    add_common(field, true);
    field->add_option("--grid", o.grid, "xmin,xmax,ymin,ymax,res");
    field->add_option("--solution", o.solution, "Solution index (default: first admissible)");
    field->add_option("--part", o.part, "total, vortices or background")
        ->check(CLI::IsMember({"total", "vortices", "background"}));

    auto* table = app.add_subcommand("table", "Summarize a batch of problems as a/b/c cells");
    table->add_option("--batch", o.batch, "Table batch JSON file")->required()->check(CLI::ExistingFile);
    table->add_option("--seed", o.seed, "Random seed (64-bit)");
    table->add_option("--out", o.out, "Output directory (default: stdout)");
    table->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* run = app.add_subcommand("run", "Full pipeline: solutions, certificate, classification, fields");
    add_common(run, true);
    run->get_option("--out")->required();
    run->add_option("--grid", o.grid, "xmin,xmax,ymin,ymax,res");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (table->parsed() && table->count("--format") == 0)
        o.format = "text";

    try {
        if (solve->parsed())
            return cmd_solve(o);
        if (certify->parsed())
            return cmd_certify(o);
        if (classify->parsed())
            return cmd_classify(o);
        if (field->parsed())
            return cmd_field(o);
        if (table->parsed())
            return cmd_table(o);
        if (run->parsed())
            return cmd_run(o);
    } catch (const std::exception& e) {
        std::cerr << "vortexeq: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
