#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "icerank/cashflow.hpp"
#include "icerank/error.hpp"
#include "icerank/parallel.hpp"
#include "icerank/philox.hpp"

namespace icerank {

enum class Family { shifted_lognormal, mirrored_shifted_lognormal, normal, discrete };

inline std::string_view to_string(Family family) {
    switch (family) {
    case Family::shifted_lognormal: return "shifted_lognormal";
    case Family::mirrored_shifted_lognormal: return "mirrored_shifted_lognormal";
    case Family::normal: return "normal";
    case Family::discrete: return "discrete";
    }
    return "unknown";
}

inline Family parse_family(std::string_view text) {
    if (text == "shifted_lognormal") return Family::shifted_lognormal;
    if (text == "mirrored_shifted_lognormal") return Family::mirrored_shifted_lognormal;
    if (text == "normal") return Family::normal;
    if (text == "discrete") return Family::discrete;
    throw Error(Errc::config_error, "family: unknown distribution family '" + std::string(text) + "'");
}

/// Parameters of a three-moment match.
///
/// Lognormal families draw Y = shift + exp(log_mean + log_sigma * Z); the
/// mirrored variant returns 2*mean - Y. The discrete family is a two-point
/// law taking high_value with probability p_high and low_value otherwise.
struct MatchedDistribution {
    Family family = Family::normal;
    double mean = 0.0;
    double std_dev = 0.0;
    double skewness = 0.0;
    double shift = 0.0;
    double log_mean = 0.0;
    double log_sigma = 0.0;
    bool mirrored = false;
    double p_high = 0.5;
    double low_value = 0.0;
    double high_value = 0.0;

    /// Maps one substream draw to a sample.
    double sample(const SeededStream& stream, std::uint64_t index) const {
        switch (family) {
        case Family::normal:
            return mean + std_dev * stream.normal(index);
        case Family::discrete:
            return stream.uniforms(index).u1 < p_high ? high_value : low_value;
        case Family::shifted_lognormal:
        case Family::mirrored_shifted_lognormal: {
            const double y = shift + std::exp(log_mean + log_sigma * stream.normal(index));
            return mirrored ? 2.0 * mean - y : y;
        }
        }
        return mean;
    }
};

namespace detail {

/// (w+2) sqrt(w-1) with w = exp(sigma^2): lognormal skewness as a function of sigma.
inline double lognormal_skew(double sigma) {
    const double wm1 = std::expm1(sigma * sigma);
    return (wm1 + 3.0) * std::sqrt(wm1);
}

/// sigma > 0 solving lognormal_skew(sigma) = target by bracketed TOMS 748.
inline double solve_log_sigma(double target) {
    double hi = 1.0;
    while (lognormal_skew(hi) < target) {
        hi *= 2.0;
        if (hi > 64.0) {
            throw Error(Errc::no_solution, "skewness " + std::to_string(target) + " out of reach");
        }
    }
    auto f = [target](double s) { return lognormal_skew(s) - target; };
    std::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        f, 0.0, hi, -target, f(hi), boost::math::tools::eps_tolerance<double>(52), iterations);
    return 0.5 * (bracket.first + bracket.second);
}

}  // namespace detail

inline MatchedDistribution moment_match(Family family, double mean, double std_dev,
                                        double skewness) {
    if (!std::isfinite(mean) || !std::isfinite(skewness)) {
        throw Error(Errc::invalid_input, "target moments must be finite");
    }
    if (!(std_dev > 0.0) || !std::isfinite(std_dev)) {
        throw Error(Errc::nonpositive_std, "std must be positive");
    }
    MatchedDistribution out;
    out.family = family;
    out.mean = mean;
    out.std_dev = std_dev;
    out.skewness = skewness;

    switch (family) {
    case Family::normal:
        if (skewness != 0.0) {
            throw Error(Errc::invalid_input, "skew: the normal family has zero skewness");
        }
        return out;
    case Family::discrete: {
        // Bernoulli skewness (1-2p)/sqrt(p(1-p)) = skew solved for p.
        out.p_high = 0.5 * (1.0 - skewness / std::sqrt(skewness * skewness + 4.0));
        const double p = out.p_high;
        out.low_value = mean - std_dev * std::sqrt(p / (1.0 - p));
        out.high_value = mean + std_dev * std::sqrt((1.0 - p) / p);
        return out;
    }
    case Family::shifted_lognormal:
    case Family::mirrored_shifted_lognormal:
        break;
    }

    if (skewness == 0.0) {
        throw Error(Errc::no_solution, "skew: lognormal families need nonzero skewness");
    }
    if (family == Family::mirrored_shifted_lognormal && skewness > 0.0) {
        throw Error(Errc::invalid_input, "skew: mirrored_shifted_lognormal needs negative skewness");
    }
    out.mirrored = skewness < 0.0;
    out.log_sigma = detail::solve_log_sigma(std::abs(skewness));
    const double s2 = out.log_sigma * out.log_sigma;
    // std^2 = (w-1) w exp(2 log_mean)
    out.log_mean = std::log(std_dev) - 0.5 * (std::log(std::expm1(s2)) + s2);
    out.shift = mean - std::exp(out.log_mean + 0.5 * s2);
    return out;
}

/// Inputs for a synthetic scenario set: fixed flows with one random slot.
struct GeneratorSpec {
    Family family = Family::shifted_lognormal;
    double target_mean = 0.0;
    double target_std = 1.0;
    double target_skewness = 0.0;
    std::vector<std::optional<double>> flow_template;  // nullopt marks the stochastic slot
    std::size_t n_scenarios = 1;
    std::uint64_t seed = 0;
};

inline std::size_t stochastic_slot(const GeneratorSpec& spec) {
    std::optional<std::size_t> slot;
    for (std::size_t t = 0; t < spec.flow_template.size(); ++t) {
        if (spec.flow_template[t]) continue;
        if (slot) {
            throw Error(Errc::config_error, "template: exactly one stochastic slot allowed");
        }
        slot = t;
    }
    if (!slot) {
        throw Error(Errc::config_error, "template: no stochastic (null) slot");
    }
    if (*slot == 0) {
        throw Error(Errc::config_error, "template: the stochastic slot must be at t >= 1");
    }
    return *slot;
}

/// Draws spec.n_scenarios scenarios; scenario i uses substream i only, so
/// the output is identical for any worker count.
inline ScenarioSet generate(const GeneratorSpec& spec, std::string project_id = "generated",
                            unsigned workers = 1) {
    if (spec.flow_template.size() < 2) {
        throw Error(Errc::config_error, "template: needs at least t0 and t1");
    }
    if (spec.n_scenarios < 1) {
        throw Error(Errc::config_error, "n: at least one scenario required");
    }
    const std::size_t slot = stochastic_slot(spec);
    const MatchedDistribution dist =
        moment_match(spec.family, spec.target_mean, spec.target_std, spec.target_skewness);
    const SeededStream stream(spec.seed);

    std::vector<double> base(spec.flow_template.size(), 0.0);
    for (std::size_t t = 0; t < base.size(); ++t) base[t] = spec.flow_template[t].value_or(0.0);

    std::vector<std::optional<CashFlowScenario>> drawn(spec.n_scenarios);
    parallel_for(spec.n_scenarios, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::vector<double> flows = base;
            flows[slot] = dist.sample(stream, i);
            drawn[i].emplace(std::move(flows));
        }
    });
    std::vector<CashFlowScenario> scenarios;
    scenarios.reserve(drawn.size());
    for (auto& s : drawn) scenarios.push_back(std::move(*s));
    return ScenarioSet(std::move(project_id), std::move(scenarios));
}

}  // namespace icerank
