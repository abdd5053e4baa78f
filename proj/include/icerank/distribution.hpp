#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icerank/error.hpp"
#include "icerank/numeric.hpp"

namespace icerank {

/// Weighted sample of a scalar metric, immutable after construction.
///
/// The sorted view orders by value, then weight, then original index, so
/// every aggregate computed over it is bit-identical for any permutation of
/// the input.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> samples)
        : EmpiricalDistribution(samples, std::vector<double>(
                                             samples.size(),
                                             samples.empty() ? 0.0 : 1.0 / samples.size())) {}

    EmpiricalDistribution(std::vector<double> samples, std::vector<double> weights)
        : samples_(std::move(samples)), weights_(std::move(weights)) {
        if (samples_.empty()) {
            throw Error(Errc::empty_distribution, "distribution has no samples");
        }
        if (samples_.size() != weights_.size()) {
            throw Error(Errc::length_mismatch, "one weight per sample required");
        }
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            if (!std::isfinite(samples_[i])) {
                throw Error(Errc::invalid_input, "sample " + std::to_string(i) + " is not finite");
            }
            if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
                throw Error(Errc::weight_sum, "weights must be finite and non-negative");
            }
        }
        const double sum = compensated_sum(weights_);
        if (std::abs(sum - 1.0) > 1e-12) {
            throw Error(Errc::weight_sum, "weights sum to " + format_number(sum) + ", not 1");
        }

        std::vector<std::size_t> order(samples_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (samples_[a] != samples_[b]) return samples_[a] < samples_[b];
            if (weights_[a] != weights_[b]) return weights_[a] < weights_[b];
            return a < b;
        });
        sorted_values_.reserve(order.size());
        sorted_weights_.reserve(order.size());
        for (std::size_t i : order) {
            sorted_values_.push_back(samples_[i]);
            sorted_weights_.push_back(weights_[i]);
        }
        total_weight_ = 0.0;
        mean_ = 0.0;
        for (std::size_t i = 0; i < sorted_values_.size(); ++i) {
            total_weight_ += sorted_weights_[i];
            mean_ += sorted_weights_[i] * sorted_values_[i];
        }
        mean_ /= total_weight_;
    }

    std::size_t size() const noexcept { return samples_.size(); }
    std::span<const double> samples() const noexcept { return samples_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> sorted_values() const noexcept { return sorted_values_; }
    std::span<const double> sorted_weights() const noexcept { return sorted_weights_; }
    double total_weight() const noexcept { return total_weight_; }
    double mean() const noexcept { return mean_; }
    double min() const noexcept { return sorted_values_.front(); }
    double max() const noexcept { return sorted_values_.back(); }

private:
    std::vector<double> samples_;
    std::vector<double> weights_;
    std::vector<double> sorted_values_;
    std::vector<double> sorted_weights_;
    double total_weight_ = 1.0;
    double mean_ = 0.0;
};

struct Summary {
    double mean = 0.0;
    double median = 0.0;  // lower weighted median
    double std_dev = 0.0;
    std::optional<double> skewness;  // empty when the distribution has no spread
};

inline Summary summarize(const EmpiricalDistribution& dist) {
    const auto values = dist.sorted_values();
    const auto weights = dist.sorted_weights();
    Summary out;
    out.mean = dist.mean();

    const double half = 0.5 * dist.total_weight();
    double cumulative = 0.0;
    out.median = values.back();
    for (std::size_t i = 0; i < values.size(); ++i) {
        cumulative += weights[i];
        if (cumulative >= half - 1e-12) {
            out.median = values[i];
            break;
        }
    }

    double m2 = 0.0;
    double m3 = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - out.mean;
        m2 += weights[i] * d * d;
        m3 += weights[i] * d * d * d;
    }
    m2 /= dist.total_weight();
    m3 /= dist.total_weight();
    out.std_dev = std::sqrt(m2);

    // Spread below rounding noise of the values counts as a point mass.
    const double scale = std::max(std::abs(values.front()), std::abs(values.back()));
    if (out.std_dev > 1e-12 * std::max(scale, 1.0)) {
        out.skewness = m3 / (m2 * out.std_dev);
    }
    return out;
}

enum class OmegaKind { finite, infinite, indeterminate };

/// Omega at one threshold with its Bachelier call/put legs.
struct OmegaResult {
    double threshold = 0.0;
    double call = 0.0;  // E[(X - threshold)+]
    double put = 0.0;   // E[(threshold - X)+]
    double omega = 0.0; // +inf when infinite, NaN when indeterminate
    OmegaKind kind = OmegaKind::finite;

    bool finite() const noexcept { return kind == OmegaKind::finite; }
    bool infinite() const noexcept { return kind == OmegaKind::infinite; }
    bool indeterminate() const noexcept { return kind == OmegaKind::indeterminate; }
};

inline OmegaResult omega(const EmpiricalDistribution& dist, double threshold) {
    const auto values = dist.sorted_values();
    const auto weights = dist.sorted_weights();
    OmegaResult out;
    out.threshold = threshold;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = values[i];
        if (x > threshold) {
            out.call += weights[i] * (x - threshold);
        } else if (x < threshold) {
            out.put += weights[i] * (threshold - x);
        }
    }
    out.call /= dist.total_weight();
    out.put /= dist.total_weight();
    if (out.put > 0.0) {
        out.omega = out.call / out.put;
        out.kind = OmegaKind::finite;
    } else if (out.call > 0.0) {
        out.omega = std::numeric_limits<double>::infinity();
        out.kind = OmegaKind::infinite;
    } else {
        out.omega = std::numeric_limits<double>::quiet_NaN();
        out.kind = OmegaKind::indeterminate;
    }
    return out;
}

/// Right derivative dOmega/dLambda at the threshold; NaN unless Omega is finite there.
inline double omega_slope(const EmpiricalDistribution& dist, const OmegaResult& at) {
    if (!at.finite()) return std::numeric_limits<double>::quiet_NaN();
    const auto values = dist.sorted_values();
    const auto weights = dist.sorted_weights();
    double above = 0.0;  // P(X > threshold)
    double at_or_below = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        (values[i] > at.threshold ? above : at_or_below) += weights[i];
    }
    above /= dist.total_weight();
    at_or_below /= dist.total_weight();
    return (-above * at.put - at.call * at_or_below) / (at.put * at.put);
}

namespace detail {

inline void require_increasing(std::span<const double> grid) {
    if (grid.empty()) {
        throw Error(Errc::empty_grid, "threshold grid is empty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw Error(Errc::invalid_input, "threshold grid must be strictly increasing");
        }
    }
}

}  // namespace detail

inline std::vector<OmegaResult> omega_curve(const EmpiricalDistribution& dist,
                                            std::span<const double> grid) {
    detail::require_increasing(grid);
    std::vector<OmegaResult> out;
    out.reserve(grid.size());
    for (double threshold : grid) out.push_back(omega(dist, threshold));
    return out;
}

/// Evenly spaced grid lo, lo+step, ..., up to hi (inclusive within half a step).
inline std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(Errc::invalid_input, "grid needs lo <= hi and step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * step;
    return grid;
}

/// Sign of Omega_a - Omega_b using call_a*put_b - call_b*put_a, which orders
/// flagged infinities above finite values without dividing. Ties (including
/// two infinities or an indeterminate side) compare as 0.
inline int omega_order(const OmegaResult& a, const OmegaResult& b) {
    if (a.indeterminate() || b.indeterminate()) return 0;
    const double diff = a.call * b.put - b.call * a.put;
    return (diff > 0.0) - (diff < 0.0);
}

/// A threshold interval where the preferred side of an Omega comparison flips.
struct CrossingInterval {
    double lower = 0.0;
    double upper = 0.0;
    int sign_below = 0;  // omega_order at `lower`
    int sign_above = 0;  // omega_order at `upper`
};

/// Locates ranking flips between two Omega curves evaluated by callables on
/// a shared grid. Each adjacent grid pair with opposite signs is bisected on
/// the callables until narrower than step/1024. A run of exact ties between
/// opposite signs is reported as the closed run itself.
template <class OmegaA, class OmegaB>
std::vector<CrossingInterval> crossing(OmegaA&& omega_a, OmegaB&& omega_b,
                                       std::span<const double> grid) {
    detail::require_increasing(grid);
    std::vector<int> signs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        signs[i] = omega_order(omega_a(grid[i]), omega_b(grid[i]));
    }

    std::vector<CrossingInterval> out;
    std::size_t last = grid.size();  // index of last nonzero sign seen
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (signs[i] == 0) continue;
        if (last != grid.size() && signs[last] != signs[i]) {
            if (i == last + 1) {
                double lo = grid[last];
                double hi = grid[i];
                const double target = (hi - lo) / 1024.0;
                while (hi - lo > target) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi) break;
                    const int s = omega_order(omega_a(mid), omega_b(mid));
                    if (s == 0) {
                        lo = hi = mid;
                        break;
                    }
                    (s == signs[last] ? lo : hi) = mid;
                }
                out.push_back({lo, hi, signs[last], signs[i]});
            } else {
                out.push_back({grid[last + 1], grid[i - 1], signs[last], signs[i]});
            }
        }
        last = i;
    }
    return out;
}

inline std::vector<CrossingInterval> crossing(const EmpiricalDistribution& a,
                                              const EmpiricalDistribution& b,
                                              std::span<const double> grid) {
    return crossing([&](double x) { return omega(a, x); }, [&](double x) { return omega(b, x); },
                    grid);
}

/// Curve-level entry point: the precomputed curves must share thresholds; the
/// distributions behind them drive the bisection.
inline std::vector<CrossingInterval> crossing(std::span<const OmegaResult> curve_a,
                                              std::span<const OmegaResult> curve_b,
                                              const EmpiricalDistribution& dist_a,
                                              const EmpiricalDistribution& dist_b) {
    if (curve_a.size() != curve_b.size()) {
        throw Error(Errc::grid_mismatch, "Omega curves have different lengths");
    }
    std::vector<double> grid(curve_a.size());
    for (std::size_t i = 0; i < curve_a.size(); ++i) {
        if (curve_a[i].threshold != curve_b[i].threshold) {
            throw Error(Errc::grid_mismatch, "Omega curves disagree at grid point " +
                                                 std::to_string(i));
        }
        grid[i] = curve_a[i].threshold;
    }
    return crossing(dist_a, dist_b, grid);
}

}  // namespace icerank
