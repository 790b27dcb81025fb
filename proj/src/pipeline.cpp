#include "vortexeq/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace vortexeq {

namespace {

std::int64_t parse_int(const std::string& s)
{
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size())
        throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

Cx parse_complex(const nlohmann::json& j)
{
    if (j.is_number())
        return Cx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Cx(j[0].get<double>(), j[1].get<double>());
    throw std::invalid_argument("complex coefficient must be a number or [re, im]");
}

std::vector<Cx> parse_coeffs(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_array())
        throw std::invalid_argument(std::string("problem: missing array '") + key + "'");
    std::vector<Cx> out;
    for (const auto& c : j.at(key))
        out.push_back(parse_complex(c));
    return out;
}

nlohmann::json gamma_json(const Circulation& g)
{
    if (g.exact()) {
        const auto& r = *g.exact();
        if (r.denominator() == 1)
            return r.numerator();
        return {{"num", r.numerator()}, {"den", r.denominator()}};
    }
    return g.value();
}

nlohmann::json coeffs_json(const std::vector<Cx>& c)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : c)
        a.push_back({v.real(), v.imag()});
    return a;
}

std::string format_double(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << (v + 0.0);
    return os.str();
}

} // namespace

VortexProblem ProblemSpec::problem() const
{
    if (pre_normalized)
        return from_normalized(circulations, m, W);
    return normalize(circulations, w);
}

ProblemSpec parse_problem(const nlohmann::json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("problem must be a JSON object");
    ProblemSpec p;
    p.name = j.value("name", std::string("problem"));

    if (!j.contains("gammas") || !j.at("gammas").is_array() || j.at("gammas").empty())
        throw std::invalid_argument("problem: 'gammas' must be a nonempty array");
    std::vector<Rational> exact;
    std::vector<double> values;
    bool all_exact = true;
    for (const auto& g : j.at("gammas")) {
        if (g.is_number_integer()) {
            exact.emplace_back(g.get<std::int64_t>());
        } else if (g.is_object()) {
            exact.emplace_back(g.at("num").get<std::int64_t>(), g.value("den", std::int64_t{1}));
        } else if (g.is_string()) {
            const auto s = g.get<std::string>();
            const auto slash = s.find('/');
            if (slash == std::string::npos)
                exact.emplace_back(parse_int(s));
            else
                exact.emplace_back(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
        } else if (g.is_number()) {
            all_exact = false;
            exact.emplace_back(0);
            values.push_back(g.get<double>());
            continue;
        } else {
            throw std::invalid_argument("problem: circulation must be a number, \"p/q\" or {num, den}");
        }
        values.push_back(boost::rational_cast<double>(exact.back()));
    }
    p.circulations = all_exact ? Circulations::from_rationals(exact) : Circulations::from_values(values);

    p.pre_normalized = j.value("pre_normalized", false);
    if (p.pre_normalized) {
        if (!j.contains("m") || !j.at("m").is_number_integer())
            throw std::invalid_argument("problem: pre-normalized input needs an integer 'm'");
        p.m = j.at("m").get<int>();
        p.W = j.contains("W_coeffs") ? parse_coeffs(j, "W_coeffs") : std::vector<Cx>{};
    } else {
        p.w.coeffs = parse_coeffs(j, "w_coeffs");
    }
    // Validates degrees and leading coefficient up front.
    (void)p.problem();
    return p;
}

ProblemSpec load_problem(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open problem file " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed problem file " + path.string() + ": " + e.what());
    }
    return parse_problem(j);
}

void to_json(nlohmann::json& j, const ProblemSpec& p)
{
    nlohmann::json gammas = nlohmann::json::array();
    for (const auto& g : p.circulations.items())
        gammas.push_back(gamma_json(g));
    j = {{"name", p.name}, {"gammas", gammas}, {"pre_normalized", p.pre_normalized}};
    if (p.pre_normalized) {
        j["m"] = p.m;
        j["W_coeffs"] = coeffs_json(p.W);
    } else {
        j["w_coeffs"] = coeffs_json(p.w.coeffs);
    }
}

std::string RunResult::cell() const
{
    std::size_t admissible = 0;
    for (const auto& e : equilibria)
        admissible += e.admissible ? 1 : 0;
    return std::to_string(classification.classes.size()) + "/" + std::to_string(admissible) + "/"
        + std::to_string(solutions.total_multiplicity());
}

int RunResult::exit_code() const
{
    if (!genericity.ok())
        return 2;
    if (solutions.total_paths > 0 && solutions.clusters.empty())
        return 1;
    return 0;
}

RunResult run_pipeline(const ProblemSpec& spec, std::uint64_t seed, const HomotopyConfig& cfg)
{
    RunResult r;
    r.spec = spec;
    r.seed = seed;
    r.problem = spec.problem();
    r.genericity = check_genericity(r.problem.circulations);
    r.bounds = bounds(r.problem.m, static_cast<int>(r.problem.n()));
    r.system = build_poly_system(r.problem);
    r.certificate = finiteness_certificate(r.system, r.problem.circulations, seed);
    r.solutions = solve(r.system, cfg, seed);
    r.equilibria = filter_admissible(r.solutions, r.problem);
    r.classification = classify(r.equilibria, r.problem);
    return r;
}

nlohmann::json header_json(const RunResult& r)
{
    nlohmann::json h = {{"problem", r.spec},
                        {"seed", r.seed},
                        {"gamma_twist", {r.solutions.gamma_twist.real(), r.solutions.gamma_twist.imag()}},
                        {"m", r.problem.m},
                        {"n", r.problem.n()},
                        {"scale", {r.problem.scale.real(), r.problem.scale.imag()}},
                        {"genericity", r.genericity},
                        {"bounds", {{"bezout", r.bounds.bezout}, {"refined", r.bounds.refined}}}};
    if (!r.genericity.ok())
        h["warning"] = "genericity condition fails: bounds not guaranteed";
    if (!r.certificate.ok)
        h["completeness"] = "finiteness not certified: the solution list may be incomplete";
    return h;
}

nlohmann::json solutions_json(const RunResult& r)
{
    nlohmann::json j = header_json(r);
    j["solver"] = r.solutions;
    j["equilibria"] = r.equilibria;
    j["summary"] = r.cell();
    return j;
}

nlohmann::json certificate_json(const RunResult& r)
{
    nlohmann::json j = header_json(r);
    std::vector<std::int64_t> dil;
    for (int d : r.system.degrees)
        dil.push_back(d);
    j["mixed_volume"] = mixed_volume_simplices(dil);
    j["certificate"] = r.certificate;
    return j;
}

nlohmann::json classification_json(const RunResult& r)
{
    nlohmann::json j = header_json(r);
    j["species"] = species_partition(r.problem.circulations);
    j["classification"] = r.classification;
    j["summary"] = r.cell();
    return j;
}

std::string solutions_csv(const RunResult& r)
{
    std::ostringstream os;
    os << "index,multiplicity,admissible,poly_residual,rational_residual,dynamics_residual";
    for (std::size_t j = 1; j <= r.problem.n(); ++j)
        os << ",z" << j << "_re,z" << j << "_im";
    os << '\n';
    for (std::size_t i = 0; i < r.equilibria.size(); ++i) {
        const auto& e = r.equilibria[i];
        os << i << ',' << e.multiplicity << ',' << (e.admissible ? 1 : 0) << ','
           << format_double(r.solutions.clusters[i].residual) << ',' << format_double(e.rational_residual) << ','
           << format_double(e.dynamics_residual);
        for (const auto& v : e.z)
            os << ',' << format_double(v.real()) << ',' << format_double(v.imag());
        os << '\n';
    }
    return os.str();
}

TableBatch load_table_batch(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open table batch " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed table batch " + path.string() + ": " + e.what());
    }
    const auto base = path.parent_path();
    TableBatch b;
    b.title = j.value("title", std::string());
    b.columns = j.value("columns", std::vector<std::string>{});
    for (const auto& row : j.value("rows", nlohmann::json::array())) {
        TableRow r;
        r.label = row.value("label", std::string());
        for (const auto& cell : row.at("cells")) {
            TableCell c;
            if (cell.is_string())
                c.problems.push_back(base / cell.get<std::string>());
            else if (cell.is_array())
                for (const auto& p : cell)
                    c.problems.push_back(base / p.get<std::string>());
            else if (!cell.is_null())
                throw std::invalid_argument("table cell must be a path, a list of paths or null");
            r.cells.push_back(std::move(c));
        }
        if (!b.columns.empty() && r.cells.size() != b.columns.size())
            throw std::invalid_argument("table row '" + r.label + "' has the wrong number of cells");
        b.rows.push_back(std::move(r));
    }
    return b;
}

TableReport table_report(const TableBatch& batch, std::uint64_t seed, const HomotopyConfig& cfg)
{
    TableReport t;
    t.batch = batch;
    for (const auto& row : batch.rows) {
        std::vector<std::string> texts;
        std::vector<RunResult> runs;
        for (const auto& cell : row.cells) {
            if (cell.problems.empty()) {
                texts.emplace_back("---");
                continue;
            }
            std::vector<std::string> seen;
            for (const auto& p : cell.problems) {
                runs.push_back(run_pipeline(load_problem(p), seed, cfg));
                const auto c = runs.back().cell();
                if (std::find(seen.begin(), seen.end(), c) == seen.end())
                    seen.push_back(c);
            }
            std::string joined;
            for (std::size_t i = 0; i < seen.size(); ++i)
                joined += (i ? ", " : "") + seen[i];
            texts.push_back(joined);
        }
        t.cells.push_back(std::move(texts));
        t.runs.push_back(std::move(runs));
    }
    return t;
}

std::string TableReport::text() const
{
    if (batch.rows.empty())
        return "";
    std::ostringstream os;
    if (!batch.title.empty())
        os << batch.title << "\n\n";
    os << "|";
    os << " |";
    for (const auto& c : batch.columns)
        os << ' ' << c << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < batch.columns.size(); ++i)
        os << "---|";
    os << '\n';
    for (std::size_t r = 0; r < batch.rows.size(); ++r) {
        os << "| " << batch.rows[r].label << " |";
        for (const auto& c : cells[r])
            os << ' ' << c << " |";
        os << '\n';
    }
    return os.str();
}

void to_json(nlohmann::json& j, const TableReport& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < t.batch.rows.size(); ++r)
        rows.push_back({{"label", t.batch.rows[r].label}, {"cells", t.cells[r]}});
    j = {{"title", t.batch.title}, {"columns", t.batch.columns}, {"rows", rows}};
}

} // namespace vortexeq
