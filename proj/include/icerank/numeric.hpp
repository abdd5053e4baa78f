#pragma once

#include <charconv>
#include <cmath>
#include <span>
#include <string>

namespace icerank {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// Neumaier-compensated sum; error independent of the element count.
inline double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

}  // namespace icerank
