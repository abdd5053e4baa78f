#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icerank/cashflow.hpp"
#include "icerank/error.hpp"
#include "icerank/parallel.hpp"
#include "icerank/term_structure.hpp"

namespace icerank {

/// Per-scenario characteristics measured against the riskless replication.
struct EvaluationResult {
    double npv = 0.0;                  // PV(F+|R) - I0_tot
    double terminal_profit = 0.0;      // FV(F+|Rf) - I0_tot
    double terminal_return = 0.0;      // M_T
    double annualized_return = 0.0;    // mu, (1+mu)^T = 1 + M_T
    double profitability_index = 0.0;  // npv / I0_tot
    double premium_npv = 0.0;          // equals npv
    double premium_return = 0.0;       // (1+R_T) * PI
    double terminal_value = 0.0;       // FV(F+|Rf)
    ReplicationDecomposition replication;
};

inline EvaluationResult evaluate(const CashFlowScenario& scenario, const YieldCurve& curve,
                                 const ForwardCurve& forwards) {
    const int horizon = scenario.horizon();
    if (forwards.horizon() != horizon) {
        throw Error(Errc::horizon_mismatch, "forward curve horizon differs from scenario horizon");
    }
    EvaluationResult out;
    out.replication = replicate(scenario, curve);
    const double outlay = out.replication.total_outlay;
    if (!(outlay > 0.0)) {
        throw Error(Errc::zero_total_outlay,
                    "total outlay I0 + PV(F-) is zero; returns and PI are undefined");
    }
    const SplitStream parts = split(scenario);
    out.terminal_value = future_value(parts.positive, forwards);
    out.npv = out.replication.certainty_equivalent_outlay - outlay;
    out.terminal_profit = out.terminal_value - outlay;
    const double growth = out.terminal_value / outlay;
    out.terminal_return = growth - 1.0;
    // Total loss (no positive flows) gives mu = -100%, which pow handles exactly.
    out.annualized_return = std::pow(growth, 1.0 / horizon) - 1.0;
    out.profitability_index = out.npv / outlay;
    out.premium_npv = out.npv;
    out.premium_return = curve.growth(horizon) * out.profitability_index;
    return out;
}

inline EvaluationResult evaluate(const CashFlowScenario& scenario, const YieldCurve& curve) {
    detail::require_covers(curve, scenario.horizon());
    return evaluate(scenario, curve, forward_curve(curve, scenario.horizon()));
}

/// Evaluates every scenario; output order follows the set, independent of `workers`.
inline std::vector<EvaluationResult> evaluate_all(const ScenarioSet& set, const YieldCurve& curve,
                                                  unsigned workers = 1) {
    detail::require_covers(curve, set.horizon());
    const ForwardCurve forwards = forward_curve(curve, set.horizon());
    std::vector<EvaluationResult> results(set.size());
    parallel_for(set.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            results[i] = evaluate(set[i], curve, forwards);
        }
    });
    return results;
}

/// Annualized return implied by an NPV: (1+mu)^T = (1+r_T)^T (npv/basis + 1).
inline double mu_from_npv(double npv, double basis_outlay, const YieldCurve& curve, int horizon) {
    if (!(basis_outlay > 0.0)) {
        throw Error(Errc::zero_total_outlay, "basis outlay must be positive");
    }
    const double relative = 1.0 + npv / basis_outlay;
    if (!(relative > 0.0)) {
        throw Error(Errc::return_undefined, "npv/basis <= -1 leaves mu undefined");
    }
    return (1.0 + curve.rate(horizon)) * std::pow(relative, 1.0 / horizon) - 1.0;
}

/// Inverse of mu_from_npv.
inline double npv_from_mu(double mu, double basis_outlay, const YieldCurve& curve, int horizon) {
    if (!(basis_outlay > 0.0)) {
        throw Error(Errc::zero_total_outlay, "basis outlay must be positive");
    }
    if (!(mu > -1.0)) {
        throw Error(Errc::return_undefined, "mu must exceed -100%");
    }
    const double ratio = std::pow((1.0 + mu) / (1.0 + curve.rate(horizon)), horizon);
    return (ratio - 1.0) * basis_outlay;
}

enum class HurdleKind { delta_mu, mu_star, npv_star, profit_star };

inline std::string_view to_string(HurdleKind kind) {
    switch (kind) {
    case HurdleKind::delta_mu: return "delta_mu";
    case HurdleKind::mu_star: return "mu_star";
    case HurdleKind::npv_star: return "npv_star";
    case HurdleKind::profit_star: return "profit_star";
    }
    return "unknown";
}

/// Investor input: the premium over r_T, the hurdle rate itself, or a
/// currency threshold on NPV or on terminal profit.
struct HurdleSpec {
    HurdleKind kind = HurdleKind::delta_mu;
    double value = 0.0;
};

/// Mutually consistent hurdle values for one basis outlay I0 + sum I0^(t).
struct ThresholdSet {
    double delta_mu = 0.0;
    double mu_star = 0.0;
    double npv_star = 0.0;
    double basis_outlay = 0.0;
};

inline ThresholdSet thresholds(const HurdleSpec& hurdle, double basis_outlay,
                               const YieldCurve& curve, int horizon) {
    if (!std::isfinite(hurdle.value)) {
        throw Error(Errc::invalid_hurdle, "hurdle value must be finite");
    }
    if (!(basis_outlay > 0.0)) {
        throw Error(Errc::zero_total_outlay, "basis outlay must be positive");
    }
    const double riskless = curve.rate(horizon);
    ThresholdSet out;
    out.basis_outlay = basis_outlay;
    switch (hurdle.kind) {
    case HurdleKind::delta_mu:
    case HurdleKind::mu_star: {
        out.mu_star = hurdle.kind == HurdleKind::mu_star ? hurdle.value : riskless + hurdle.value;
        if (!(out.mu_star > -1.0)) {
            throw Error(Errc::invalid_hurdle, "hurdle rate must exceed -100%");
        }
        out.npv_star = npv_from_mu(out.mu_star, basis_outlay, curve, horizon);
        break;
    }
    case HurdleKind::npv_star:
    case HurdleKind::profit_star: {
        if (hurdle.kind == HurdleKind::npv_star) {
            out.npv_star = hurdle.value;
        } else {
            // Pi = (NPV + basis)(1 + R_T) - basis under riskless reinvestment.
            out.npv_star = (hurdle.value + basis_outlay) / curve.growth(horizon) - basis_outlay;
        }
        if (!(1.0 + out.npv_star / basis_outlay > 0.0)) {
            throw Error(Errc::invalid_hurdle, "threshold implies a return at or below -100%");
        }
        out.mu_star = mu_from_npv(out.npv_star, basis_outlay, curve, horizon);
        break;
    }
    }
    out.delta_mu = out.mu_star - riskless;
    return out;
}

/// Hurdle translated per scenario plus once at the weighted mean basis outlay.
struct ThresholdProfile {
    std::vector<ThresholdSet> per_scenario;
    ThresholdSet at_mean_basis;
    bool uniform_basis = true;  // every scenario shares one basis outlay
};

inline ThresholdProfile threshold_profile(const HurdleSpec& hurdle,
                                          std::span<const EvaluationResult> results,
                                          std::span<const double> weights, const YieldCurve& curve,
                                          int horizon) {
    if (results.empty() || results.size() != weights.size()) {
        throw Error(Errc::length_mismatch, "one weight per evaluation required");
    }
    ThresholdProfile out;
    out.per_scenario.reserve(results.size());
    double mean_basis = 0.0;
    double lo = results.front().replication.total_outlay;
    double hi = lo;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const double basis = results[i].replication.total_outlay;
        out.per_scenario.push_back(thresholds(hurdle, basis, curve, horizon));
        mean_basis += weights[i] * basis;
        lo = std::min(lo, basis);
        hi = std::max(hi, basis);
    }
    out.uniform_basis = (hi - lo) <= 1e-12 * hi;
    out.at_mean_basis = thresholds(hurdle, out.uniform_basis ? lo : mean_basis, curve, horizon);
    return out;
}

/// Flat-rate MIRR: (1+MIRR)^T = sum F+_t (1+k)^(T-t) / sum_{t>=0} F-_t (1+d)^(-t), F-_0 = I_0.
inline double mirr(const CashFlowScenario& scenario, double reinvest_rate, double finance_rate) {
    if (!(reinvest_rate > -1.0) || !(finance_rate > -1.0)) {
        throw Error(Errc::invalid_input, "MIRR rates must exceed -100%");
    }
    const int horizon = scenario.horizon();
    double terminal = 0.0;
    double financing = std::max(-scenario.at(0), 0.0);
    for (int t = 1; t <= horizon; ++t) {
        const double flow = scenario.at(t);
        if (flow > 0.0) {
            terminal += flow * std::pow(1.0 + reinvest_rate, horizon - t);
        } else {
            financing += -flow / std::pow(1.0 + finance_rate, t);
        }
    }
    if (!(financing > 0.0)) {
        throw Error(Errc::zero_denominator, "MIRR needs at least one outlay");
    }
    return std::pow(terminal / financing, 1.0 / horizon) - 1.0;
}

}  // namespace icerank
