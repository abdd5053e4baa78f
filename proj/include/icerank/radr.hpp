#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "icerank/cashflow.hpp"
#include "icerank/error.hpp"

namespace icerank {

/// canonical_strict rejects negative flows after t = 0. paper_table4 accepts
/// them and discounts every mean flow at the risk-adjusted rate.
enum class RadrMode { canonical_strict, paper_table4 };

inline std::string_view to_string(RadrMode mode) {
    return mode == RadrMode::canonical_strict ? "canonical-strict" : "paper-table4";
}

inline RadrMode parse_radr_mode(std::string_view text) {
    if (text == "canonical-strict") return RadrMode::canonical_strict;
    if (text == "paper-table4") return RadrMode::paper_table4;
    throw Error(Errc::config_error, "unknown RADR mode '" + std::string(text) + "'");
}

struct RadrInput {
    ScenarioSet scenarios;
    double riskless_rate = 0.0;  // flat r
    double radr_rate = 0.0;      // k >= r
    RadrMode mode = RadrMode::canonical_strict;
};

struct RadrResult {
    std::vector<double> mean_flows;  // <F_t>, t = 0..T
    double npv_at_k = 0.0;           // NPV(<F> | k)
    double mirr_at_k = 0.0;          // MIRR(<F> | k)
    double mean_npv_at_r = 0.0;      // <NPV(F | r)>
    double lambda_radr = 0.0;        // sum PV((1 - alpha^t) <F_t> | r)
    std::vector<double> alpha_factors;  // ((1+r)/(1+k))^t, t = 1..T
    bool accept = false;
    RadrMode mode = RadrMode::canonical_strict;
};

/// Probability-weighted per-tenor mean of the flows, t = 0 included.
inline std::vector<double> vertical_average(const ScenarioSet& set) {
    if (set.size() == 0) {
        throw Error(Errc::empty_set, "cannot average an empty scenario set");
    }
    std::vector<double> mean(static_cast<std::size_t>(set.horizon()) + 1, 0.0);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto flows = set[i].flows();
        for (std::size_t t = 0; t < flows.size(); ++t) {
            mean[t] += set.weights()[i] * flows[t];
        }
    }
    return mean;
}

namespace detail {

inline void require_canonical(const ScenarioSet& set) {
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto flows = set[i].flows();
        for (std::size_t t = 1; t < flows.size(); ++t) {
            if (flows[t] < 0.0) {
                throw Error(Errc::non_canonical_flows,
                            "scenario " + std::to_string(i) + " has negative flow " +
                                std::to_string(flows[t]) + " at t=" + std::to_string(t));
            }
        }
    }
}

inline void validate(const RadrInput& input) {
    if (!(input.riskless_rate > -1.0) || !(input.radr_rate > -1.0)) {
        throw Error(Errc::invalid_input, "rates must exceed -100%");
    }
    if (input.radr_rate < input.riskless_rate) {
        throw Error(Errc::invalid_input, "risk-adjusted rate k must be >= riskless rate r");
    }
}

}  // namespace detail

inline RadrResult radr_valuation(const RadrInput& input) {
    detail::validate(input);
    if (input.mode == RadrMode::canonical_strict) {
        detail::require_canonical(input.scenarios);
    }
    const double r = input.riskless_rate;
    const double k = input.radr_rate;
    const int horizon = input.scenarios.horizon();

    RadrResult out;
    out.mode = input.mode;
    out.mean_flows = vertical_average(input.scenarios);
    const double outlay = -out.mean_flows[0];

    out.npv_at_k = -outlay;
    out.mean_npv_at_r = -outlay;
    double terminal = 0.0;
    double financing = std::max(outlay, 0.0);
    out.alpha_factors.reserve(static_cast<std::size_t>(horizon));
    for (int t = 1; t <= horizon; ++t) {
        const double flow = out.mean_flows[static_cast<std::size_t>(t)];
        const double alpha = std::pow((1.0 + r) / (1.0 + k), t);
        const double pv_r = flow / std::pow(1.0 + r, t);
        const double pv_k = flow / std::pow(1.0 + k, t);
        out.alpha_factors.push_back(alpha);
        out.npv_at_k += pv_k;
        out.mean_npv_at_r += pv_r;
        out.lambda_radr += (1.0 - alpha) * pv_r;
        if (flow > 0.0) {
            terminal += flow * std::pow(1.0 + k, horizon - t);
        } else {
            financing += -pv_k;
        }
    }
    if (!(financing > 0.0)) {
        throw Error(Errc::zero_denominator, "mean flows have no outlay; MIRR undefined");
    }
    out.mirr_at_k = std::pow(terminal / financing, 1.0 / horizon) - 1.0;
    out.accept = out.npv_at_k > 0.0;
    return out;
}

/// The three RADR acceptance tests side by side with their margins.
struct EquivalenceReport {
    bool npv_positive = false;           // NPV(<F>|k) > 0
    bool mirr_above_k = false;           // MIRR(<F>|k) > k
    bool mean_npv_above_lambda = false;  // <NPV(F|r)> > Lambda_RADR
    double npv_margin = 0.0;
    double mirr_margin = 0.0;
    double lambda_margin = 0.0;
    bool at_boundary = false;  // every margin is zero up to rounding
    bool consistent = false;
    RadrResult valuation;
};

/// Evaluates the three predicates on canonical flows. Margins within
/// rounding of zero are classified as ties, so an exact boundary case
/// reports all three false together.
inline EquivalenceReport equivalence_check(const RadrInput& input) {
    detail::require_canonical(input.scenarios);
    EquivalenceReport out;
    out.valuation = radr_valuation(input);
    const RadrResult& v = out.valuation;

    out.npv_margin = v.npv_at_k;
    out.mirr_margin = v.mirr_at_k - input.radr_rate;
    out.lambda_margin = v.mean_npv_at_r - v.lambda_radr;

    double scale = 0.0;
    for (double f : v.mean_flows) scale += std::abs(f);
    const double money_tol = 1e-11 * std::max(scale, 1.0);
    const double rate_tol = 1e-11 * (1.0 + std::abs(input.radr_rate));
    auto classify = [](double margin, double tol) { return margin > tol ? 1 : (margin < -tol ? -1 : 0); };
    const int a = classify(out.npv_margin, money_tol);
    const int b = classify(out.mirr_margin, rate_tol);
    const int c = classify(out.lambda_margin, money_tol);

    out.npv_positive = a > 0;
    out.mirr_above_k = b > 0;
    out.mean_npv_above_lambda = c > 0;
    out.at_boundary = a == 0 && b == 0 && c == 0;
    out.consistent = a == b && b == c;
    return out;
}

}  // namespace icerank
