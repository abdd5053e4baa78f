#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icerank/error.hpp"

namespace icerank {

/// Riskless zero curve on an integer period grid.
///
/// Holds one annualized rate r_t per tenor t = 1..horizon. Cumulative rates
/// R_t = (1+r_t)^t - 1 are always derived on demand. There is no
/// interpolation and no extrapolation past the last tenor.
class YieldCurve {
public:
    explicit YieldCurve(std::vector<double> annual_rates) : rates_(std::move(annual_rates)) {
        if (rates_.empty()) {
            throw Error(Errc::invalid_input, "yield curve needs at least one tenor");
        }
        for (std::size_t i = 0; i < rates_.size(); ++i) {
            if (!std::isfinite(rates_[i]) || rates_[i] <= -1.0) {
                throw Error(Errc::invalid_input,
                            "rate at tenor " + std::to_string(i + 1) + " must be finite and > -1");
            }
        }
    }

    /// Builds a curve from explicit (tenor, rate) pairs; tenors must read 1, 2, ..., n.
    static YieldCurve from_tenors(std::span<const int> tenors, std::span<const double> rates) {
        if (tenors.size() != rates.size()) {
            throw Error(Errc::length_mismatch, "tenor and rate columns differ in length");
        }
        for (std::size_t i = 0; i < tenors.size(); ++i) {
            if (tenors[i] != static_cast<int>(i) + 1) {
                throw Error(Errc::invalid_input, "tenors must be contiguous 1..T; expected tenor " +
                                                     std::to_string(i + 1) + ", got " +
                                                     std::to_string(tenors[i]));
            }
        }
        return YieldCurve(std::vector<double>(rates.begin(), rates.end()));
    }

    static YieldCurve flat(double rate, int horizon) {
        if (horizon < 1) {
            throw Error(Errc::invalid_input, "curve horizon must be >= 1");
        }
        return YieldCurve(std::vector<double>(static_cast<std::size_t>(horizon), rate));
    }

    int horizon() const noexcept { return static_cast<int>(rates_.size()); }

    double rate(int t) const {
        check_tenor(t);
        return rates_[static_cast<std::size_t>(t - 1)];
    }

    std::span<const double> rates() const noexcept { return rates_; }

    /// (1+r_t)^t, the growth of one unit over t periods; 1 at t = 0.
    double growth(int t) const {
        if (t == 0) return 1.0;
        return std::pow(1.0 + rate(t), t);
    }

    void check_tenor(int t) const {
        if (t < 1 || t > horizon()) {
            throw Error(Errc::tenor_out_of_range, "tenor " + std::to_string(t) +
                                                      " outside curve range 1.." +
                                                      std::to_string(horizon()));
        }
    }

private:
    std::vector<double> rates_;
};

inline double cumulative_rate(const YieldCurve& curve, int t) {
    curve.check_tenor(t);
    return curve.growth(t) - 1.0;
}

/// 1/(1+r_t)^t; accepts t = 0 (returns 1).
inline double discount_factor(const YieldCurve& curve, int t) {
    if (t == 0) return 1.0;
    return 1.0 / curve.growth(t);
}

/// Riskless reinvestment rates from each period t to a fixed horizon T.
///
/// at(t) is the total (not annualized) rate R^f_{T-t} locked in at time zero
/// for carrying one unit received at t to T. at(T) is exactly zero.
class ForwardCurve {
public:
    ForwardCurve(int horizon, std::vector<double> to_horizon)
        : horizon_(horizon), rates_(std::move(to_horizon)) {
        if (horizon_ < 1 || rates_.size() != static_cast<std::size_t>(horizon_)) {
            throw Error(Errc::length_mismatch, "forward curve needs one rate per tenor 1..T");
        }
    }

    int horizon() const noexcept { return horizon_; }

    double at(int t) const {
        if (t < 1 || t > horizon_) {
            throw Error(Errc::tenor_out_of_range, "forward tenor " + std::to_string(t) +
                                                      " outside 1.." + std::to_string(horizon_));
        }
        return rates_[static_cast<std::size_t>(t - 1)];
    }

    std::span<const double> rates() const noexcept { return rates_; }

private:
    int horizon_;
    std::vector<double> rates_;
};

/// R^f_{T-t} = (1+r_T)^T / (1+r_t)^t - 1 for t = 1..T.
inline ForwardCurve forward_curve(const YieldCurve& curve, int horizon) {
    if (horizon < 1 || horizon > curve.horizon()) {
        throw Error(Errc::horizon_out_of_range, "forward horizon " + std::to_string(horizon) +
                                                    " outside curve range 1.." +
                                                    std::to_string(curve.horizon()));
    }
    const double terminal = curve.growth(horizon);
    std::vector<double> rates(static_cast<std::size_t>(horizon));
    for (int t = 1; t < horizon; ++t) {
        rates[static_cast<std::size_t>(t - 1)] = terminal / curve.growth(t) - 1.0;
    }
    rates.back() = 0.0;
    return ForwardCurve(horizon, std::move(rates));
}

/// Terminal value of non-negative flows F+_1..F+_T carried to T on the forward curve.
inline double future_value(std::span<const double> positive, const ForwardCurve& forwards) {
    if (positive.size() != static_cast<std::size_t>(forwards.horizon())) {
        throw Error(Errc::length_mismatch, "stream has " + std::to_string(positive.size()) +
                                               " flows, forward curve has " +
                                               std::to_string(forwards.horizon()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < positive.size(); ++i) {
        if (positive[i] < 0.0) {
            throw Error(Errc::invalid_input, "future_value takes non-negative amounts only");
        }
        total += positive[i] * (1.0 + forwards.rates()[i]);
    }
    return total;
}

}  // namespace icerank
