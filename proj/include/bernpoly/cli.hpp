#ifndef BERNPOLY_CLI_HPP
#define BERNPOLY_CLI_HPP

/**
 * @file cli.hpp
 * @brief The bernpoly command line: check, sample, transform, bounds, vertices.
 *
 * Exit status: 0 success or feasible, 1 infeasible or bound violation,
 * 2 malformed input, 3 solver stall.
 */

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bernpoly/io.hpp"
#include "bernpoly/oracle.hpp"
#include "bernpoly/polytope.hpp"
#include "bernpoly/sampler.hpp"
#include "bernpoly/simplex.hpp"
#include "bernpoly/transform.hpp"

namespace bernpoly::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInfeasible = 1,
    kBadInput = 2,
    kSolverStall = 3,
};

inline constexpr std::uint64_t kDefaultSeed = 20170531;

struct CheckOptions {
    std::string matrix_file;
    double tol = 1e-9;
    bool oracle = false;
    bool emit_alpha = false;
    std::size_t max_n = kDefaultDimensionCap;
    std::string pivot_rule = "dantzig";
    std::optional<std::size_t> max_pivots;
};

struct SampleOptions {
    std::string matrix_file;
    std::size_t count = 1000;
    std::uint64_t seed = kDefaultSeed;
    bool entropy = false;
    std::string out = "-";
    double tol = 1e-9;
    std::size_t max_n = kDefaultDimensionCap;
};

struct TransformOptions {
    std::string matrix_file;
    std::string marginal_file;
    std::size_t count = 1000;
    std::uint64_t seed = kDefaultSeed;
    bool entropy = false;
    std::string out = "-";
    std::string report;
    double tol = 1e-9;
    std::size_t max_n = kDefaultDimensionCap;
};

struct BoundsOptions {
    std::string marginal_file;
    std::vector<std::size_t> pair{1, 2};
};

struct VerticesOptions {
    std::size_t n = 0;
    std::string format = "json";
    bool cuts = false;
    std::size_t max_n = kDefaultDimensionCap;
};

namespace detail {

inline void write_json(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

inline Json error_report(const std::string& kind, const std::string& message)
{
    Json j;
    j["error"] = kind;
    j["message"] = message;
    return j;
}

inline std::uint64_t resolve_seed(std::uint64_t seed, bool entropy)
{
    if (!entropy)
        return seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

/// Opens @p path for writing, or hands back @p fallback for "-".
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback)
    {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_)
            throw InputError("cannot open '" + path + "' for writing");
        stream_ = file_.get();
    }

    std::ostream& stream() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

inline VertexMatrix checked_vertex_matrix(std::size_t n, std::size_t max_n, std::ostream& err)
{
    if (max_n > kDefaultDimensionCap)
        err << "warning: dimension cap raised to " << max_n
            << "; the vertex matrix has 2^(n-1) columns and cost grows exponentially\n";
    try {
        return build_vertex_matrix(n, max_n);
    }
    catch (const CapacityError& e) {
        throw InputError(e.what());
    }
}

inline SolverConfig solver_config(double tol, const std::string& rule,
                                  std::optional<std::size_t> max_pivots = std::nullopt)
{
    SolverConfig cfg;
    cfg.feasibility_tol = tol;
    cfg.max_pivots = max_pivots;
    if (rule == "bland")
        cfg.pivot_rule = PivotRule::bland;
    else if (rule == "dantzig")
        cfg.pivot_rule = PivotRule::dantzig_with_bland_fallback;
    else
        throw InputError("unknown pivot rule '" + rule + "'");
    try {
        cfg.validate();
    }
    catch (const DomainError& e) {
        throw InputError(e.what());
    }
    return cfg;
}

inline Json feasibility_json(std::size_t n, const FeasibilityResult& r, bool emit_alpha)
{
    Json j;
    j["n"] = n;
    j["feasible"] = r.feasible;
    j["objective_residual"] = sig9(r.objective_residual);
    j["marginal"] = r.marginal;
    j["pivots"] = r.pivots;
    if (r.feasible && emit_alpha)
        j["alpha"] = number_array(*r.alpha);
    if (!r.feasible)
        j["certificate"] = number_array(*r.certificate);
    return j;
}

inline std::string csv_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline void print_correlation_summary(std::ostream& err, const CorrelationVector& target,
                                      const CorrelationVector& empirical, const char* label)
{
    err << label << " (pair: target, empirical)\n";
    std::size_t pos = 0;
    for (const PairIndex p : all_pairs(target.n())) {
        err << "  (" << p.i << "," << p.j << "): " << csv_number(target[pos]) << ", "
            << csv_number(empirical[pos]) << '\n';
        ++pos;
    }
}

}  // namespace detail

inline int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err)
{
    const CorrelationVector rho = read_correlation_file(opt.matrix_file);
    const SolverConfig cfg = detail::solver_config(opt.tol, opt.pivot_rule, opt.max_pivots);
    if (opt.oracle && rho.n() > kOracleDimensionCap)
        throw InputError("--oracle supports n <= " + std::to_string(kOracleDimensionCap));
    const VertexMatrix m = detail::checked_vertex_matrix(rho.n(), opt.max_n, err);
    const FeasibilityResult r = phase1_feasibility(m, rho, cfg);
    Json report = detail::feasibility_json(rho.n(), r, opt.emit_alpha);
    if (opt.oracle) {
        const FeasibilityResult o = oracle_feasible(rho, cfg);
        Json oj;
        oj["feasible"] = o.feasible;
        oj["agrees"] = o.feasible == r.feasible;
        report["oracle"] = oj;
    }
    detail::write_json(out, report);
    return r.feasible ? kSuccess : kInfeasible;
}

inline int cmd_sample(const SampleOptions& opt, std::ostream& out, std::ostream& err)
{
    const CorrelationVector rho = read_correlation_file(opt.matrix_file);
    if (opt.count < 1)
        throw InputError("--count must be at least 1");
    const VertexMatrix m = detail::checked_vertex_matrix(rho.n(), opt.max_n, err);
    const FeasibilityResult r = phase1_feasibility(m, rho, detail::solver_config(opt.tol, "dantzig"));
    if (!r.feasible) {
        detail::write_json(err, detail::feasibility_json(rho.n(), r, false));
        return kInfeasible;
    }
    const MixingWeights w = MixingWeights::normalized(rho.n(), *r.alpha);
    RandomSource rng(detail::resolve_seed(opt.seed, opt.entropy));
    const BernoulliSampleBatch batch = sample_bernoulli(w, opt.count, rng);

    detail::OutputTarget target(opt.out, out);
    std::ostream& os = target.stream();
    for (std::size_t i = 1; i <= batch.n; ++i)
        os << (i > 1 ? "," : "") << 'B' << i;
    os << '\n';
    for (std::size_t r_ = 0; r_ < batch.count; ++r_) {
        for (std::size_t i = 0; i < batch.n; ++i)
            os << (i ? "," : "") << static_cast<int>(batch.at(r_, i));
        os << '\n';
    }
    if (batch.count >= 2) {
        try {
            detail::print_correlation_summary(err, rho, empirical_correlation(batch),
                                              "empirical correlation");
        }
        catch (const DegenerateData& e) {
            err << "empirical correlation unavailable: " << e.what() << '\n';
        }
    }
    return kSuccess;
}

inline Json plan_json(const TransformPlan& plan)
{
    Json j;
    j["n"] = plan.n;
    Json ms = Json::array();
    for (const auto& m : plan.marginals)
        ms.push_back(marginal_to_json(m));
    j["marginals"] = ms;
    j["target"] = number_array(plan.target.values());
    Json pairs = Json::array();
    for (const PairPlan& p : plan.pairs) {
        Json pj;
        pj["pair"] = {p.pair.i, p.pair.j};
        pj["rho_min"] = sig9(p.bounds.rho_min);
        pj["rho_max"] = sig9(p.bounds.rho_max);
        pj["w"] = sig9(p.w);
        pj["bern_rho"] = sig9(p.bern_rho);
        if (p.bounds.precision_warning)
            pj["precision_warning"] = true;
        pairs.push_back(pj);
    }
    j["pairs"] = pairs;
    j["bernoulli_target"] = number_array(plan.bernoulli_target.values());
    return j;
}

inline int cmd_transform(const TransformOptions& opt, std::ostream& out, std::ostream& err)
{
    const CorrelationVector target = read_correlation_file(opt.matrix_file);
    std::vector<Marginal> marginals = read_marginals_file(opt.marginal_file);
    if (marginals.size() != target.n())
        throw InputError("matrix has dimension " + std::to_string(target.n()) + " but " +
                         std::to_string(marginals.size()) + " marginals were given");
    if (opt.count < 1)
        throw InputError("--count must be at least 1");
    const bool draws_to_stdout = opt.out.empty() || opt.out == "-";
    std::ostream& report_default = draws_to_stdout ? err : out;

    TransformPlan plan;
    try {
        plan = build_transform_plan(std::move(marginals), target);
    }
    catch (const InfeasiblePair& e) {
        Json j = detail::error_report("infeasible_pair", e.what());
        j["pair"] = {e.i(), e.j()};
        j["target"] = sig9(target.at({e.i(), e.j()}));
        j["rho_min"] = sig9(e.rho_min());
        j["rho_max"] = sig9(e.rho_max());
        detail::write_json(report_default, j);
        return kInfeasible;
    }
    catch (const DegenerateBounds& e) {
        throw InputError(e.what());
    }

    const VertexMatrix m = detail::checked_vertex_matrix(plan.n, opt.max_n, err);
    const FeasibilityResult r =
        phase1_feasibility(m, plan.bernoulli_target, detail::solver_config(opt.tol, "dantzig"));
    Json report = plan_json(plan);
    report["feasible"] = r.feasible;
    if (!r.feasible) {
        report["certificate"] = number_array(*r.certificate);
        detail::OutputTarget rep(opt.report, report_default);
        detail::write_json(rep.stream(), report);
        return kInfeasible;
    }
    const MixingWeights w = MixingWeights::normalized(plan.n, *r.alpha);
    report["alpha"] = number_array(w.alpha());

    RandomSource rng(detail::resolve_seed(opt.seed, opt.entropy));
    const GeneralSampleBatch batch = sample_general(plan, w, opt.count, rng);
    {
        detail::OutputTarget draws(opt.out, out);
        std::ostream& os = draws.stream();
        for (std::size_t i = 1; i <= batch.n; ++i)
            os << (i > 1 ? "," : "") << 'X' << i;
        os << '\n';
        for (std::size_t r_ = 0; r_ < batch.count; ++r_) {
            for (std::size_t i = 0; i < batch.n; ++i)
                os << (i ? "," : "") << detail::csv_number(batch.at(r_, i));
            os << '\n';
        }
    }
    detail::OutputTarget rep(opt.report, report_default);
    detail::write_json(rep.stream(), report);
    return kSuccess;
}

inline int cmd_bounds(const BoundsOptions& opt, std::ostream& out, std::ostream&)
{
    const std::vector<Marginal> marginals = read_marginals_file(opt.marginal_file);
    if (opt.pair.size() != 2)
        throw InputError("--pair takes two 1-based indices");
    const std::size_t i = opt.pair[0], j = opt.pair[1];
    if (i < 1 || j < 1 || i > marginals.size() || j > marginals.size() || i == j)
        throw InputError("--pair must name two distinct marginals in 1.." +
                         std::to_string(marginals.size()));
    const FHBounds b = fh_bounds(marginals[i - 1], marginals[j - 1]);
    Json report;
    report["pair"] = {i, j};
    report["rho_min"] = sig9(b.rho_min);
    report["rho_max"] = sig9(b.rho_max);
    if (b.precision_warning)
        report["precision_warning"] = true;
    detail::write_json(out, report);
    return kSuccess;
}

inline int cmd_vertices(const VerticesOptions& opt, std::ostream& out, std::ostream& err)
{
    if (opt.format != "json" && opt.format != "csv")
        throw InputError("--format must be json or csv");
    const VertexMatrix m = detail::checked_vertex_matrix(opt.n, opt.max_n, err);
    const auto pairs = all_pairs(opt.n);

    if (opt.format == "csv") {
        out << 'k';
        for (const auto& p : pairs)
            out << ",rho_" << p.i << '_' << p.j;
        if (opt.cuts)
            for (const auto& p : pairs)
                out << ",cut_" << p.i << '_' << p.j;
        out << '\n';
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out << c + 1;
            const auto col = m.column(c);
            for (int v : col)
                out << ',' << v;
            if (opt.cuts)
                for (int v : col)
                    out << ',' << (1 - v) / 2;
            out << '\n';
        }
        return kSuccess;
    }

    Json j;
    j["n"] = opt.n;
    Json pj = Json::array();
    for (const auto& p : pairs)
        pj.push_back({p.i, p.j});
    j["pairs"] = pj;
    Json vs = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
        Json v;
        v["k"] = c + 1;
        v["x"] = diagonal_vertex(DiagonalIndex(c + 1, opt.n)).bits;
        const auto col = m.column(c);
        v["rho"] = col;
        if (opt.cuts) {
            std::vector<int> cut(col.size());
            for (std::size_t r = 0; r < col.size(); ++r)
                cut[r] = (1 - col[r]) / 2;
            v["cut"] = cut;
        }
        vs.push_back(v);
    }
    j["vertices"] = vs;
    detail::write_json(out, j);
    return kSuccess;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Feasibility and sampling for symmetric Bernoulli correlation vectors",
                 "bernpoly"};
    app.require_subcommand(1);

    CheckOptions check;
    auto* c = app.add_subcommand("check", "decide whether a correlation matrix is attainable");
    c->add_option("matrix", check.matrix_file, "CSV matrix or JSON {n, rho}")->required();
    c->add_option("--tol", check.tol, "Phase-I objective tolerance")->capture_default_str();
    c->add_flag("--oracle", check.oracle, "cross-check with the 2^n atom LP (n <= 12)");
    c->add_flag("--emit-alpha", check.emit_alpha, "include mixing weights in the report");
    c->add_option("--max-n", check.max_n, "dimension cap")->capture_default_str();
    c->add_option("--pivot-rule", check.pivot_rule, "dantzig or bland")->capture_default_str();
    c->add_option("--max-pivots", check.max_pivots, "pivot budget (default 50 * (rows + cols))");

    SampleOptions sample;
    auto* s = app.add_subcommand("sample", "draw symmetric Bernoulli vectors");
    s->add_option("matrix", sample.matrix_file, "CSV matrix or JSON {n, rho}")->required();
    s->add_option("--count", sample.count, "number of draws")->capture_default_str();
    s->add_option("--seed", sample.seed, "RNG seed")->capture_default_str();
    s->add_flag("--entropy", sample.entropy, "seed from std::random_device");
    s->add_option("--out", sample.out, "CSV output path, - for stdout")->capture_default_str();
    s->add_option("--tol", sample.tol, "Phase-I objective tolerance")->capture_default_str();
    s->add_option("--max-n", sample.max_n, "dimension cap")->capture_default_str();

    TransformOptions transform;
    auto* t = app.add_subcommand("transform", "draw vectors with general marginals");
    t->add_option("matrix", transform.matrix_file, "target correlation matrix")->required();
    t->add_option("marginals", transform.marginal_file, "JSON marginal spec")->required();
    t->add_option("--count", transform.count, "number of draws")->capture_default_str();
    t->add_option("--seed", transform.seed, "RNG seed")->capture_default_str();
    t->add_flag("--entropy", transform.entropy, "seed from std::random_device");
    t->add_option("--out", transform.out, "CSV output path, - for stdout")->capture_default_str();
    t->add_option("--report", transform.report,
                  "JSON plan report path (default: stdout, or stderr when draws go to stdout)");
    t->add_option("--tol", transform.tol, "Phase-I objective tolerance")->capture_default_str();
    t->add_option("--max-n", transform.max_n, "dimension cap")->capture_default_str();

    BoundsOptions bounds;
    auto* b = app.add_subcommand("bounds", "Frechet-Hoeffding correlation bounds of a pair");
    b->add_option("marginals", bounds.marginal_file, "JSON marginal spec")->required();
    b->add_option("--pair", bounds.pair, "two 1-based indices")->expected(2)->capture_default_str();

    VerticesOptions vertices;
    auto* v = app.add_subcommand("vertices", "list the 2^(n-1) vertex correlation vectors");
    v->add_option("n", vertices.n, "dimension")->required();
    v->add_option("--format", vertices.format, "json or csv")->capture_default_str();
    v->add_flag("--cuts", vertices.cuts, "also emit the matching cut vectors");
    v->add_option("--max-n", vertices.max_n, "dimension cap")->capture_default_str();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    }
    catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    }
    catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }

    try {
        if (c->parsed())
            return cmd_check(check, out, err);
        if (s->parsed())
            return cmd_sample(sample, out, err);
        if (t->parsed())
            return cmd_transform(transform, out, err);
        if (b->parsed())
            return cmd_bounds(bounds, out, err);
        if (v->parsed())
            return cmd_vertices(vertices, out, err);
    }
    catch (const SolverStall& e) {
        err << "error: " << e.what() << " after " << e.iterations() << " pivots\n";
        return kSolverStall;
    }
    catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }
    catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }
    catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }
    catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kBadInput;
}

}  // namespace bernpoly::cli

#endif  // BERNPOLY_CLI_HPP
