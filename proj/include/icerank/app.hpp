#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "icerank/distribution.hpp"
#include "icerank/error.hpp"
#include "icerank/io.hpp"
#include "icerank/metrics.hpp"
#include "icerank/radr.hpp"
#include "icerank/ranking.hpp"
#include "icerank/scenario_engine.hpp"

namespace icerank::app {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace detail {

inline void require_file(const fs::path& path, const std::string& flag) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw Error(Errc::io_error, flag + ": no such file '" + path.string() + "'");
    }
}

inline void require_output_dir(const fs::path& file, const std::string& flag) {
    const fs::path parent = file.parent_path();
    std::error_code ec;
    if (!parent.empty() && !fs::is_directory(parent, ec)) {
        throw Error(Errc::io_error, flag + ": directory '" + parent.string() + "' does not exist");
    }
}

inline void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) {
        throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
    }
}

/// Loads a project descriptor and checks the scenario file it points to.
inline ProjectDescriptor checked_project(const fs::path& path, const std::string& flag) {
    require_file(path, flag);
    ProjectDescriptor project = load_project(path);
    if (project.scenario_file) require_file(*project.scenario_file, flag + " scenario_file");
    return project;
}

inline void require_tenors(const YieldCurve& curve, const ProjectDescriptor& project) {
    if (curve.horizon() < project.horizon) {
        throw Error(Errc::config_error, "--curve: no rate for tenor " +
                                            std::to_string(curve.horizon() + 1) + " required by project '" +
                                            project.id + "' (horizon " +
                                            std::to_string(project.horizon) + ")");
    }
}

/// "lo:hi:step" to an inclusive grid.
inline std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> v;
    std::string normalized = text;
    for (char& c : normalized) if (c == ':') c = ',';
    const auto cells = csv::split_row(normalized);
    if (cells.size() != 3) {
        throw Error(Errc::config_error, "--grid: expected lo:hi:step, got '" + text + "'");
    }
    for (std::size_t i = 0; i < 3; ++i) {
        try {
            v.push_back(csv::parse_double(cells[i], "--grid", 1, i + 1));
        } catch (const Error&) {
            throw Error(Errc::config_error, "--grid: cannot parse '" + text + "'");
        }
    }
    try {
        return make_grid(v[0], v[1], v[2]);
    } catch (const Error& e) {
        throw Error(Errc::config_error, std::string("--grid: ") + e.what());
    }
}

inline std::string money(double value) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(0) << value;
    return s.str();
}

inline std::string percent(double rate) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << rate * 100.0 << '%';
    return s.str();
}

inline std::string ratio(const OmegaResult& o) {
    if (o.infinite()) return "inf";
    if (o.indeterminate()) return "indeterminate";
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << o.omega;
    return s.str();
}

/// Machine text for Omega: full precision, `inf` or `nan` when flagged.
inline std::string omega_text(const OmegaResult& o) {
    if (o.infinite()) return "inf";
    if (o.indeterminate()) return "nan";
    return format_number(o.omega);
}

inline std::string_view kind_text(const OmegaResult& o) {
    return o.finite() ? "finite" : (o.infinite() ? "infinite" : "indeterminate");
}

inline ojson omega_json(const OmegaResult& o) {
    ojson j;
    j["threshold"] = o.threshold;
    j["call"] = o.call;
    j["put"] = o.put;
    j["omega"] = o.finite() ? ojson(o.omega) : ojson(nullptr);
    j["kind"] = std::string(kind_text(o));
    return j;
}

inline ojson crossings_json(const std::vector<CrossingInterval>& intervals) {
    ojson arr = ojson::array();
    for (const auto& c : intervals) {
        arr.push_back({{"lower", c.lower},
                       {"upper", c.upper},
                       {"sign_below", c.sign_below},
                       {"sign_above", c.sign_above}});
    }
    return arr;
}

inline std::string summary_row(std::string_view name, const Summary& s) {
    return std::string(name) + "," + format_number(s.mean) + "," + format_number(s.median) + "," +
           format_number(s.std_dev) + "," + (s.skewness ? format_number(*s.skewness) : "") + "\n";
}

struct Common {
    std::optional<std::size_t> n;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;

    GeneratorOverrides overrides() const { return {n, seed}; }
};

inline void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--n", common.n, "Scenario count override for generated projects");
    cmd->add_option("--seed", common.seed, "Seed override for generated projects");
    cmd->add_option("--workers", common.workers, "Worker threads (output does not depend on it)")
        ->check(CLI::Range(1u, 1024u));
}

}  // namespace detail

struct SimulateArgs {
    std::string spec;
    std::string out;
    detail::Common common;
};

inline int simulate(const SimulateArgs& args, std::ostream& out) {
    detail::require_file(args.spec, "--spec");
    detail::require_output_dir(args.out, "--out");
    GeneratorSpec spec = load_generator_spec(args.spec);
    apply(spec, args.common.overrides());
    const ScenarioSet set = generate(spec, "generated", args.common.workers);

    std::ostringstream csv;
    write_scenarios(csv, set);
    detail::write_file(args.out, csv.str());

    const std::size_t slot = stochastic_slot(spec);
    std::vector<double> draws;
    draws.reserve(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) draws.push_back(set[i].at(static_cast<int>(slot)));
    const Summary s = summarize(EmpiricalDistribution(std::move(draws)));
    out << "wrote " << set.size() << " scenarios to " << args.out << "\n"
        << "t" << slot << " sample: mean " << format_number(s.mean) << ", median "
        << format_number(s.median) << ", std " << format_number(s.std_dev) << ", skewness "
        << (s.skewness ? format_number(*s.skewness) : "undefined") << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string project;
    std::string curve;
    std::string out_dir;
    detail::Common common;
};

inline int evaluate(const EvaluateArgs& args, std::ostream& out) {
    const ProjectDescriptor project = detail::checked_project(args.project, "--project");
    detail::require_file(args.curve, "--curve");
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (!fs::is_directory(args.out_dir, ec)) {
        throw Error(Errc::io_error, "--out-dir: cannot create '" + args.out_dir + "'");
    }
    const YieldCurve curve = load_curve(args.curve);
    detail::require_tenors(curve, project);
    const ScenarioSet set = materialize(project, args.common.overrides(), args.common.workers);
    const auto results = evaluate_all(set, curve, args.common.workers);

    std::string rows =
        "scenario,npv,profit,terminal_return,mu,pi,premium_npv,premium_return,total_outlay\n";
    std::vector<double> npv;
    std::vector<double> mu;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        rows += std::to_string(i) + "," + format_number(r.npv) + "," + format_number(r.terminal_profit) + "," +
                format_number(r.terminal_return) + "," + format_number(r.annualized_return) + "," +
                format_number(r.profitability_index) + "," + format_number(r.premium_npv) + "," +
                format_number(r.premium_return) + "," + format_number(r.replication.total_outlay) +
                "\n";
        npv.push_back(r.npv);
        mu.push_back(r.annualized_return);
    }
    const std::vector<double> weights(set.weights().begin(), set.weights().end());
    const Summary npv_summary = summarize(EmpiricalDistribution(npv, weights));
    const Summary mu_summary = summarize(EmpiricalDistribution(mu, weights));
    detail::write_file(fs::path(args.out_dir) / "evaluation.csv", rows);
    detail::write_file(fs::path(args.out_dir) / "summary.csv",
                       "metric,mean,median,std,skewness\n" + detail::summary_row("npv", npv_summary) +
                           detail::summary_row("mu", mu_summary));

    auto skew = [](const Summary& s) {
        if (!s.skewness) return std::string("undefined");
        std::ostringstream t;
        t << std::fixed << std::setprecision(1) << *s.skewness;
        return t.str();
    };
    out << project.id << ": " << set.size() << " scenarios\n"
        << "  NPV  mean " << detail::money(npv_summary.mean) << "  median "
        << detail::money(npv_summary.median) << "  std " << detail::money(npv_summary.std_dev)
        << "  skewness " << skew(npv_summary) << "\n"
        << "  mu   mean " << detail::percent(mu_summary.mean) << "  median "
        << detail::percent(mu_summary.median) << "  std " << detail::percent(mu_summary.std_dev)
        << "  skewness " << skew(mu_summary) << "\n";
    return 0;
}

struct RankArgs {
    std::vector<std::string> projects;
    std::string curve;
    std::optional<double> delta_mu;
    std::optional<double> mu_star;
    std::optional<double> npv_star;
    std::optional<double> profit_star;
    std::string metric = "mu";
    std::string out;
    std::string csv;
    std::string grid;
    detail::Common common;
};

inline HurdleSpec hurdle_from(const RankArgs& args) {
    std::vector<HurdleSpec> given;
    if (args.delta_mu) given.push_back({HurdleKind::delta_mu, *args.delta_mu});
    if (args.mu_star) given.push_back({HurdleKind::mu_star, *args.mu_star});
    if (args.npv_star) given.push_back({HurdleKind::npv_star, *args.npv_star});
    if (args.profit_star) given.push_back({HurdleKind::profit_star, *args.profit_star});
    if (given.size() != 1) {
        throw Error(Errc::config_error,
                    "exactly one of --delta-mu, --mu-star, --npv-star, --profit-star is required");
    }
    return given.front();
}

inline ProjectDistribution load_distribution(const ProjectDescriptor& project,
                                             const YieldCurve& curve, Metric metric,
                                             const detail::Common& common) {
    detail::require_tenors(curve, project);
    const ScenarioSet set = materialize(project, common.overrides(), common.workers);
    const auto results = evaluate_all(set, curve, common.workers);
    return project_distribution(project.id, results, set.weights(), metric, set.horizon());
}

inline int rank(const RankArgs& args, std::ostream& out) {
    const HurdleSpec hurdle = hurdle_from(args);
    const Metric metric = parse_metric(args.metric);
    std::vector<ProjectDescriptor> descriptors;
    for (const auto& p : args.projects) descriptors.push_back(detail::checked_project(p, "--projects"));
    detail::require_file(args.curve, "--curve");
    detail::require_output_dir(args.out, "--out");
    if (!args.csv.empty()) detail::require_output_dir(args.csv, "--csv");
    const std::vector<double> grid = args.grid.empty() ? std::vector<double>{} : detail::parse_grid(args.grid);

    const YieldCurve curve = load_curve(args.curve);
    std::vector<ProjectDistribution> projects;
    for (const auto& d : descriptors) projects.push_back(load_distribution(d, curve, metric, args.common));
    const RankingReport report = icerank::rank(projects, hurdle, metric, curve, grid);

    ojson doc;
    doc["hurdle"] = {{"kind", std::string(to_string(hurdle.kind))}, {"value", hurdle.value}};
    doc["metric"] = std::string(to_string(metric));
    doc["order"] = report.order;
    doc["excluded"] = report.excluded;
    doc["warnings"] = report.warnings;
    ojson entries = ojson::array();
    for (const auto& e : report.entries) {
        ojson j;
        j["project"] = e.project_id;
        j["threshold"] = e.hurdle.threshold;
        j["per_scenario_threshold"] = e.hurdle.per_scenario;
        j["thresholds"] = {{"delta_mu", e.hurdle.thresholds.delta_mu},
                           {"mu_star", e.hurdle.thresholds.mu_star},
                           {"npv_star", e.hurdle.thresholds.npv_star},
                           {"basis_outlay", e.hurdle.thresholds.basis_outlay}};
        j["omega"] = detail::omega_json(e.hurdle.omega);
        j["omega_slope"] = std::isfinite(e.hurdle.slope) ? ojson(e.hurdle.slope) : ojson(nullptr);
        j["summary"] = {{"mean", e.summary.mean},
                        {"median", e.summary.median},
                        {"std", e.summary.std_dev},
                        {"skewness", e.summary.skewness ? ojson(*e.summary.skewness) : ojson(nullptr)}};
        j["accept"] = e.accept;
        j["excluded"] = e.excluded;
        entries.push_back(std::move(j));
    }
    doc["entries"] = std::move(entries);
    if (!grid.empty()) {
        ojson crossings = ojson::array();
        for (const auto& c : report.crossings) {
            crossings.push_back({{"a", c.project_a},
                                 {"b", c.project_b},
                                 {"intervals", detail::crossings_json(c.intervals)}});
        }
        doc["crossings"] = std::move(crossings);
    }
    detail::write_file(args.out, doc.dump(2) + "\n");

    auto entry_of = [&report](const std::string& id) -> const RankingEntry& {
        for (const auto& e : report.entries) {
            if (e.project_id == id) return e;
        }
        return report.entries.front();
    };
    if (!args.csv.empty()) {
        std::string rows = "rank,project,omega,call,put,threshold,accept\n";
        for (std::size_t i = 0; i < report.order.size(); ++i) {
            const auto& e = entry_of(report.order[i]);
            const auto& o = e.hurdle.omega;
            rows += std::to_string(i + 1) + "," + e.project_id + "," + detail::omega_text(o) + "," +
                    format_number(o.call) + "," + format_number(o.put) + "," +
                    format_number(e.hurdle.threshold) + "," + (e.accept ? "true" : "false") + "\n";
        }
        for (const auto& id : report.excluded) {
            const auto& o = entry_of(id).hurdle.omega;
            rows += "," + id + ",nan," + format_number(o.call) + "," + format_number(o.put) + "," +
                    format_number(entry_of(id).hurdle.threshold) + ",false\n";
        }
        detail::write_file(args.csv, rows);
    }

    out << "hurdle " << to_string(hurdle.kind) << " = " << format_number(hurdle.value)
        << ", metric " << to_string(metric) << "\n";
    for (std::size_t i = 0; i < report.order.size(); ++i) {
        const auto& e = entry_of(report.order[i]);
        out << "  " << i + 1 << ". " << e.project_id << "  Omega " << detail::ratio(e.hurdle.omega)
            << "  threshold "
            << (metric == Metric::npv ? detail::money(e.hurdle.threshold)
                                      : detail::percent(e.hurdle.threshold))
            << "  " << (e.accept ? "accept" : "reject") << "\n";
    }
    for (const auto& w : report.warnings) out << "  warning: " << w << "\n";
    return 0;
}

struct OmegaCurveArgs {
    std::string project;
    std::string against;
    std::string curve;
    std::string metric = "mu";
    std::string grid;
    std::string out;
    std::string crossings_out;
    detail::Common common;
};

inline std::string curve_csv(const std::vector<HurdlePoint>& points) {
    std::string rows = "threshold,call,put,omega\n";
    for (const auto& p : points) {
        rows += format_number(p.threshold) + "," + format_number(p.omega.call) + "," +
                format_number(p.omega.put) + "," + detail::omega_text(p.omega) + "\n";
    }
    return rows;
}

inline int omega_curve(const OmegaCurveArgs& args, std::ostream& out) {
    const Metric metric = parse_metric(args.metric);
    const ProjectDescriptor first = detail::checked_project(args.project, "--project");
    std::optional<ProjectDescriptor> second;
    if (!args.against.empty()) second = detail::checked_project(args.against, "--against");
    if (!args.crossings_out.empty() && !second) {
        throw Error(Errc::config_error, "--crossings-out requires --against");
    }
    detail::require_file(args.curve, "--curve");
    detail::require_output_dir(args.out, "--out");
    if (!args.crossings_out.empty()) detail::require_output_dir(args.crossings_out, "--crossings-out");
    const std::vector<double> grid = detail::parse_grid(args.grid);

    const YieldCurve curve = load_curve(args.curve);
    const ProjectDistribution a = load_distribution(first, curve, metric, args.common);
    detail::write_file(args.out, curve_csv(omega_vs_hurdle(a, grid, curve)));
    out << "wrote " << grid.size() << " points for " << a.id << " to " << args.out << "\n";
    if (!second) return 0;

    const ProjectDistribution b = load_distribution(*second, curve, metric, args.common);
    const auto intervals = hurdle_crossings(a, b, grid, curve);
    for (const auto& c : intervals) {
        out << "  ranking flips between mu* " << format_number(c.lower) << " and "
            << format_number(c.upper) << "\n";
    }
    if (intervals.empty()) out << "  no ranking flip on the grid\n";
    if (!args.crossings_out.empty()) {
        std::string rows = "lower,upper,sign_below,sign_above\n";
        for (const auto& c : intervals) {
            rows += format_number(c.lower) + "," + format_number(c.upper) + "," +
                    std::to_string(c.sign_below) + "," + std::to_string(c.sign_above) + "\n";
        }
        detail::write_file(args.crossings_out, rows);
    }
    return 0;
}

struct RadrArgs {
    std::string project;
    double r = 0.0;
    double k = 0.0;
    std::string mode = "canonical-strict";
    std::string out;
    detail::Common common;
};

inline int radr_compare(const RadrArgs& args, std::ostream& out) {
    const RadrMode mode = parse_radr_mode(args.mode);
    const ProjectDescriptor project = detail::checked_project(args.project, "--project");
    detail::require_output_dir(args.out, "--out");
    RadrInput input{materialize(project, args.common.overrides(), args.common.workers), args.r,
                    args.k, mode};
    const RadrResult v = radr_valuation(input);

    ojson doc;
    doc["project"] = project.id;
    doc["mode"] = std::string(to_string(v.mode));
    doc["r"] = args.r;
    doc["k"] = args.k;
    doc["mean_flows"] = v.mean_flows;
    doc["npv_at_k"] = v.npv_at_k;
    doc["mirr_at_k"] = v.mirr_at_k;
    doc["mean_npv_at_r"] = v.mean_npv_at_r;
    doc["lambda_radr"] = v.lambda_radr;
    doc["alpha_factors"] = v.alpha_factors;
    doc["accept"] = v.accept;
    if (mode == RadrMode::canonical_strict) {
        const EquivalenceReport eq = equivalence_check(input);
        doc["equivalence"] = {{"npv_positive", eq.npv_positive},
                              {"mirr_above_k", eq.mirr_above_k},
                              {"mean_npv_above_lambda", eq.mean_npv_above_lambda},
                              {"at_boundary", eq.at_boundary},
                              {"consistent", eq.consistent}};
    }
    detail::write_file(args.out, doc.dump(2) + "\n");

    out << project.id << " (" << to_string(mode) << ", r " << detail::percent(args.r) << ", k "
        << detail::percent(args.k) << ")\n"
        << "  NPV " << detail::money(v.npv_at_k) << "  MIRR " << detail::percent(v.mirr_at_k)
        << "  <NPV|r> " << detail::money(v.mean_npv_at_r) << "  Lambda "
        << detail::money(v.lambda_radr) << "  " << (v.accept ? "accept" : "reject") << "\n";
    return 0;
}

/// Parses argv and runs one command. Returns 0 on success, 1 for
/// computation-domain errors and 2 for configuration or IO errors.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App cli{"Omega-based appraisal of investment projects"};
    cli.require_subcommand(1);

    SimulateArgs sim;
    auto* sim_cmd = cli.add_subcommand("simulate", "Draw scenarios from a generator spec");
    sim_cmd->add_option("--spec", sim.spec, "Generator or project JSON")->required();
    sim_cmd->add_option("--out", sim.out, "Scenario CSV to write")->required();
    detail::add_common(sim_cmd, sim.common);

    EvaluateArgs eval;
    auto* eval_cmd = cli.add_subcommand("evaluate", "Per-scenario metrics and summaries");
    eval_cmd->add_option("--project", eval.project, "Project JSON")->required();
    eval_cmd->add_option("--curve", eval.curve, "Yield curve CSV")->required();
    eval_cmd->add_option("--out-dir", eval.out_dir, "Output directory")->required();
    detail::add_common(eval_cmd, eval.common);

    RankArgs rk;
    auto* rank_cmd = cli.add_subcommand("rank", "Rank projects by Omega at a hurdle");
    rank_cmd->add_option("--projects", rk.projects, "Project JSONs")->required();
    rank_cmd->add_option("--curve", rk.curve, "Yield curve CSV")->required();
    rank_cmd->add_option("--delta-mu", rk.delta_mu, "Premium over r_T");
    rank_cmd->add_option("--mu-star", rk.mu_star, "Hurdle annualized return");
    rank_cmd->add_option("--npv-star", rk.npv_star, "Hurdle NPV");
    rank_cmd->add_option("--profit-star", rk.profit_star, "Hurdle terminal profit");
    rank_cmd->add_option("--metric", rk.metric, "npv or mu");
    rank_cmd->add_option("--out", rk.out, "Report JSON")->required();
    rank_cmd->add_option("--csv", rk.csv, "Optional ranking CSV");
    rank_cmd->add_option("--grid", rk.grid, "mu* grid lo:hi:step for pairwise crossings");
    detail::add_common(rank_cmd, rk.common);

    OmegaCurveArgs oc;
    auto* oc_cmd = cli.add_subcommand("omega-curve", "Omega against the hurdle rate");
    oc_cmd->add_option("--project", oc.project, "Project JSON")->required();
    oc_cmd->add_option("--against", oc.against, "Second project for crossing detection");
    oc_cmd->add_option("--curve", oc.curve, "Yield curve CSV")->required();
    oc_cmd->add_option("--metric", oc.metric, "npv or mu");
    oc_cmd->add_option("--grid", oc.grid, "mu* grid lo:hi:step")->required();
    oc_cmd->add_option("--out", oc.out, "Curve CSV")->required();
    oc_cmd->add_option("--crossings-out", oc.crossings_out, "Crossing intervals CSV");
    detail::add_common(oc_cmd, oc.common);

    RadrArgs radr;
    auto* radr_cmd = cli.add_subcommand("radr-compare", "RADR valuation of the mean flows");
    radr_cmd->add_option("--project", radr.project, "Project JSON")->required();
    radr_cmd->add_option("--r", radr.r, "Riskless rate")->required();
    radr_cmd->add_option("--k", radr.k, "Risk-adjusted rate")->required();
    radr_cmd->add_option("--mode", radr.mode, "canonical-strict or paper-table4");
    radr_cmd->add_option("--out", radr.out, "Report JSON")->required();
    detail::add_common(radr_cmd, radr.common);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim_cmd) return simulate(sim, out);
        if (*eval_cmd) return evaluate(eval, out);
        if (*rank_cmd) return rank(rk, out);
        if (*oc_cmd) return omega_curve(oc, out);
        return radr_compare(radr, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_input_error(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace icerank::app
