#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icerank/error.hpp"
#include "icerank/numeric.hpp"
#include "icerank/term_structure.hpp"

namespace icerank {

/// One realization F_0..F_T of a project's cash flows.
///
/// F_0 is the initial flow and must be <= 0 (an outlay). Intermediate and
/// terminal flows may have any sign.
class CashFlowScenario {
public:
    explicit CashFlowScenario(std::vector<double> flows) : flows_(std::move(flows)) {
        if (flows_.size() < 2) {
            throw Error(Errc::invalid_input, "a scenario needs F_0 and at least one future flow");
        }
        for (std::size_t t = 0; t < flows_.size(); ++t) {
            if (!std::isfinite(flows_[t])) {
                throw Error(Errc::invalid_input, "flow at t=" + std::to_string(t) + " is not finite");
            }
        }
        if (flows_[0] > 0.0) {
            throw Error(Errc::invalid_input, "F_0 must be an outlay (<= 0)");
        }
    }

    int horizon() const noexcept { return static_cast<int>(flows_.size()) - 1; }
    double at(int t) const { return flows_.at(static_cast<std::size_t>(t)); }
    double initial_outlay() const noexcept { return -flows_[0]; }

    std::span<const double> flows() const noexcept { return flows_; }
    /// F_1..F_T
    std::span<const double> future_flows() const noexcept {
        return std::span<const double>(flows_).subspan(1);
    }

    bool operator==(const CashFlowScenario&) const = default;

private:
    std::vector<double> flows_;
};

struct SplitStream {
    double initial_outlay = 0.0;    // I_0 = max(-F_0, 0)
    std::vector<double> positive;   // F+_t, t = 1..T
    std::vector<double> negative;   // F-_t, t = 1..T
};

inline SplitStream split(const CashFlowScenario& scenario) {
    SplitStream out;
    out.initial_outlay = std::max(-scenario.at(0), 0.0);
    const auto future = scenario.future_flows();
    out.positive.reserve(future.size());
    out.negative.reserve(future.size());
    for (double f : future) {
        out.positive.push_back(std::max(f, 0.0));
        out.negative.push_back(std::max(-f, 0.0));
    }
    return out;
}

/// Riskless replication of one scenario.
///
/// Future outlays F-_t are pre-funded with zero-coupon bonds bought today
/// (partial_outlays), and the inflows F+_t are matched by a bond portfolio
/// (bond_notionals) whose cost is the investment certainty equivalent.
struct ReplicationDecomposition {
    double initial_outlay = 0.0;
    double additional_outlay = 0.0;  // PV(F- | R)
    std::vector<double> partial_outlays;
    double total_outlay = 0.0;  // I_0 + PV(F- | R)
    std::vector<double> bond_notionals;
    double certainty_equivalent_outlay = 0.0;  // PV(F+ | R)
};

namespace detail {

inline void require_covers(const YieldCurve& curve, int horizon) {
    if (curve.horizon() < horizon) {
        throw Error(Errc::horizon_mismatch, "curve has no rate for tenor " +
                                                std::to_string(curve.horizon() + 1) +
                                                " (covers 1.." + std::to_string(curve.horizon()) +
                                                ", stream needs " + std::to_string(horizon) + ")");
    }
}

}  // namespace detail

inline ReplicationDecomposition replicate(const CashFlowScenario& scenario, const YieldCurve& curve) {
    const int horizon = scenario.horizon();
    detail::require_covers(curve, horizon);
    const SplitStream parts = split(scenario);

    ReplicationDecomposition out;
    out.initial_outlay = parts.initial_outlay;
    out.partial_outlays.resize(static_cast<std::size_t>(horizon));
    out.bond_notionals.resize(static_cast<std::size_t>(horizon));
    for (int t = 1; t <= horizon; ++t) {
        const auto i = static_cast<std::size_t>(t - 1);
        const double growth = curve.growth(t);
        out.partial_outlays[i] = parts.negative[i] / growth;
        out.bond_notionals[i] = parts.positive[i] / growth;
        out.additional_outlay += out.partial_outlays[i];
        out.certainty_equivalent_outlay += out.bond_notionals[i];
    }
    out.total_outlay = out.initial_outlay + out.additional_outlay;
    return out;
}

/// sum_t F_t / (1+r_t)^t over flows indexed 1..T.
inline double present_value(std::span<const double> flows, const YieldCurve& curve) {
    detail::require_covers(curve, static_cast<int>(flows.size()));
    double total = 0.0;
    for (std::size_t i = 0; i < flows.size(); ++i) {
        total += flows[i] / curve.growth(static_cast<int>(i) + 1);
    }
    return total;
}

/// N realizations of one project sharing a horizon, with probabilities.
class ScenarioSet {
public:
    ScenarioSet(std::string project_id, std::vector<CashFlowScenario> scenarios)
        : ScenarioSet(std::move(project_id), std::move(scenarios), {}) {}

    /// Empty weights means uniform 1/N.
    ScenarioSet(std::string project_id, std::vector<CashFlowScenario> scenarios,
                std::vector<double> weights)
        : project_id_(std::move(project_id)), scenarios_(std::move(scenarios)),
          weights_(std::move(weights)) {
        if (scenarios_.empty()) {
            throw Error(Errc::empty_set, "scenario set '" + project_id_ + "' has no scenarios");
        }
        const int horizon = scenarios_.front().horizon();
        for (std::size_t i = 0; i < scenarios_.size(); ++i) {
            if (scenarios_[i].horizon() != horizon) {
                throw Error(Errc::horizon_mismatch,
                            "scenario " + std::to_string(i) + " has horizon " +
                                std::to_string(scenarios_[i].horizon()) + ", expected " +
                                std::to_string(horizon));
            }
        }
        if (weights_.empty()) {
            weights_.assign(scenarios_.size(), 1.0 / static_cast<double>(scenarios_.size()));
            return;
        }
        if (weights_.size() != scenarios_.size()) {
            throw Error(Errc::length_mismatch, "one weight per scenario required");
        }
        for (double w : weights_) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw Error(Errc::weight_sum, "weights must be finite and non-negative");
            }
        }
        const double sum = compensated_sum(weights_);
        if (std::abs(sum - 1.0) > 1e-12) {
            throw Error(Errc::weight_sum, "weights sum to " + format_number(sum) + ", not 1");
        }
    }

    const std::string& project_id() const noexcept { return project_id_; }
    int horizon() const noexcept { return scenarios_.front().horizon(); }
    std::size_t size() const noexcept { return scenarios_.size(); }
    const CashFlowScenario& operator[](std::size_t i) const { return scenarios_[i]; }
    std::span<const CashFlowScenario> scenarios() const noexcept { return scenarios_; }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    std::string project_id_;
    std::vector<CashFlowScenario> scenarios_;
    std::vector<double> weights_;
};

}  // namespace icerank
