#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icerank/distribution.hpp"
#include "icerank/error.hpp"
#include "icerank/metrics.hpp"

namespace icerank {

enum class Metric { npv, mu };

inline std::string_view to_string(Metric metric) { return metric == Metric::npv ? "npv" : "mu"; }

inline Metric parse_metric(std::string_view text) {
    if (text == "npv") return Metric::npv;
    if (text == "mu") return Metric::mu;
    throw Error(Errc::config_error, "metric must be 'npv' or 'mu', got '" + std::string(text) + "'");
}

/// One project's per-scenario metric together with the outlay basis each
/// scenario's threshold conversion needs.
struct ProjectDistribution {
    std::string id;
    Metric metric = Metric::npv;
    int horizon = 1;
    EmpiricalDistribution values;
    std::vector<double> basis_outlays;  // same order as values.samples()
};

inline ProjectDistribution project_distribution(std::string id,
                                                std::span<const EvaluationResult> results,
                                                std::span<const double> weights, Metric metric,
                                                int horizon) {
    if (results.size() != weights.size()) {
        throw Error(Errc::length_mismatch, "one weight per evaluation required");
    }
    std::vector<double> values;
    std::vector<double> basis;
    values.reserve(results.size());
    basis.reserve(results.size());
    for (const auto& r : results) {
        values.push_back(metric == Metric::npv ? r.npv : r.annualized_return);
        basis.push_back(r.replication.total_outlay);
    }
    return ProjectDistribution{std::move(id), metric, horizon,
                               EmpiricalDistribution(std::move(values),
                                                     std::vector<double>(weights.begin(), weights.end())),
                               std::move(basis)};
}

/// Omega of one project at a hurdle.
///
/// When every scenario maps the hurdle to the same threshold, Omega is taken
/// on the metric itself at that threshold. Otherwise each scenario is
/// compared with its own threshold: Omega is taken on metric - threshold_i
/// at zero, and `threshold` reports the value at the mean basis outlay.
struct HurdleOmega {
    ThresholdSet thresholds;  // at the mean basis outlay
    double threshold = 0.0;   // in metric units
    bool per_scenario = false;
    OmegaResult omega;
    double slope = 0.0;  // right derivative of Omega in the threshold
};

inline HurdleOmega omega_at_hurdle(const ProjectDistribution& project, const HurdleSpec& hurdle,
                                   const YieldCurve& curve) {
    const auto& basis = project.basis_outlays;
    const auto weights = project.values.weights();
    double mean_basis = 0.0;
    double lo = basis.front();
    double hi = basis.front();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        mean_basis += weights[i] * basis[i];
        lo = std::min(lo, basis[i]);
        hi = std::max(hi, basis[i]);
    }
    const bool uniform = (hi - lo) <= 1e-12 * hi;

    HurdleOmega out;
    out.thresholds = thresholds(hurdle, uniform ? lo : mean_basis, curve, project.horizon);
    out.threshold = project.metric == Metric::npv ? out.thresholds.npv_star : out.thresholds.mu_star;
    const bool rate_hurdle = hurdle.kind == HurdleKind::delta_mu || hurdle.kind == HurdleKind::mu_star;
    out.per_scenario = !uniform && !(project.metric == Metric::mu && rate_hurdle);

    if (!out.per_scenario) {
        out.omega = omega(project.values, out.threshold);
        out.slope = omega_slope(project.values, out.omega);
        return out;
    }
    const auto samples = project.values.samples();
    std::vector<double> excess(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const ThresholdSet t = thresholds(hurdle, basis[i], curve, project.horizon);
        excess[i] = samples[i] - (project.metric == Metric::npv ? t.npv_star : t.mu_star);
    }
    const EmpiricalDistribution shifted(std::move(excess),
                                        std::vector<double>(weights.begin(), weights.end()));
    out.omega = omega(shifted, 0.0);
    out.slope = omega_slope(shifted, out.omega);
    return out;
}

struct HurdlePoint {
    double mu_star = 0.0;
    double threshold = 0.0;
    OmegaResult omega;
};

/// Omega as a function of the hurdle rate mu* over an increasing grid.
inline std::vector<HurdlePoint> omega_vs_hurdle(const ProjectDistribution& project,
                                                std::span<const double> mu_star_grid,
                                                const YieldCurve& curve) {
    detail::require_increasing(mu_star_grid);
    std::vector<HurdlePoint> out;
    out.reserve(mu_star_grid.size());
    for (double mu_star : mu_star_grid) {
        const HurdleOmega h = omega_at_hurdle(project, {HurdleKind::mu_star, mu_star}, curve);
        out.push_back({mu_star, h.threshold, h.omega});
    }
    return out;
}

/// Ranking flips between two projects along a mu* grid.
inline std::vector<CrossingInterval> hurdle_crossings(const ProjectDistribution& a,
                                                      const ProjectDistribution& b,
                                                      std::span<const double> mu_star_grid,
                                                      const YieldCurve& curve) {
    auto at = [&curve](const ProjectDistribution& p) {
        return [&p, &curve](double mu_star) {
            return omega_at_hurdle(p, {HurdleKind::mu_star, mu_star}, curve).omega;
        };
    };
    return crossing(at(a), at(b), mu_star_grid);
}

struct RankingEntry {
    std::string project_id;
    HurdleOmega hurdle;
    Summary summary;
    bool accept = false;    // Omega >= 1
    bool excluded = false;  // indeterminate Omega
};

struct PairCrossing {
    std::string project_a;
    std::string project_b;
    std::vector<CrossingInterval> intervals;
};

struct RankingReport {
    HurdleSpec hurdle;
    Metric metric = Metric::npv;
    std::vector<RankingEntry> entries;  // input order
    std::vector<std::string> order;     // best first; excluded projects omitted
    std::vector<std::string> excluded;
    std::vector<std::string> warnings;
    std::vector<PairCrossing> crossings;
};

/// True when `a` ranks strictly ahead of `b`: higher Omega (flagged
/// infinities first, ordered among themselves by call), then higher mean,
/// lower standard deviation, lexicographic id.
inline bool ranks_before(const RankingEntry& a, const RankingEntry& b) {
    const OmegaResult& oa = a.hurdle.omega;
    const OmegaResult& ob = b.hurdle.omega;
    if (oa.infinite() != ob.infinite()) return oa.infinite();
    if (oa.infinite()) {
        if (oa.call != ob.call) return oa.call > ob.call;
    } else if (oa.omega != ob.omega) {
        return oa.omega > ob.omega;
    }
    if (a.summary.mean != b.summary.mean) return a.summary.mean > b.summary.mean;
    if (a.summary.std_dev != b.summary.std_dev) return a.summary.std_dev < b.summary.std_dev;
    return a.project_id < b.project_id;
}

/// Orders projects by decreasing Omega at the hurdle. A non-empty
/// `mu_star_grid` also fills `crossings` for every project pair.
inline RankingReport rank(std::span<const ProjectDistribution> projects, const HurdleSpec& hurdle,
                          Metric metric, const YieldCurve& curve,
                          std::span<const double> mu_star_grid = {}) {
    if (projects.empty()) {
        throw Error(Errc::empty_set, "nothing to rank");
    }
    RankingReport report;
    report.hurdle = hurdle;
    report.metric = metric;
    for (const auto& p : projects) {
        if (p.metric != metric) {
            throw Error(Errc::metric_mismatch, "project '" + p.id + "' was evaluated on " +
                                                   std::string(to_string(p.metric)) +
                                                   ", ranking uses " +
                                                   std::string(to_string(metric)));
        }
        RankingEntry entry;
        entry.project_id = p.id;
        entry.hurdle = omega_at_hurdle(p, hurdle, curve);
        entry.summary = summarize(p.values);
        entry.excluded = entry.hurdle.omega.indeterminate();
        entry.accept = !entry.excluded && entry.hurdle.omega.omega >= 1.0;
        if (entry.excluded) {
            report.excluded.push_back(p.id);
            report.warnings.push_back("project '" + p.id +
                                      "' has indeterminate Omega (no mass off the threshold); "
                                      "excluded from the ranking");
        }
        report.entries.push_back(std::move(entry));
    }

    std::vector<const RankingEntry*> ranked;
    for (const auto& e : report.entries) {
        if (!e.excluded) ranked.push_back(&e);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const RankingEntry* a, const RankingEntry* b) { return ranks_before(*a, *b); });
    for (const auto* e : ranked) report.order.push_back(e->project_id);

    if (!mu_star_grid.empty()) {
        for (std::size_t i = 0; i < projects.size(); ++i) {
            for (std::size_t j = i + 1; j < projects.size(); ++j) {
                report.crossings.push_back(
                    {projects[i].id, projects[j].id,
                     hurdle_crossings(projects[i], projects[j], mu_star_grid, curve)});
            }
        }
    }
    return report;
}

}  // namespace icerank
