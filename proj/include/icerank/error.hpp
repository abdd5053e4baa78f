#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace icerank {

enum class Errc {
    // computation-domain errors
    tenor_out_of_range,
    horizon_out_of_range,
    length_mismatch,
    horizon_mismatch,
    zero_total_outlay,
    return_undefined,
    zero_denominator,
    empty_distribution,
    empty_grid,
    grid_mismatch,
    non_canonical_flows,
    empty_set,
    no_solution,
    metric_mismatch,
    indeterminate_omega,
    // input / configuration errors
    invalid_input,
    invalid_hurdle,
    nonpositive_std,
    weight_sum,
    parse_error,
    io_error,
    config_error,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::tenor_out_of_range: return "tenor-out-of-range";
    case Errc::horizon_out_of_range: return "horizon-out-of-range";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::horizon_mismatch: return "horizon-mismatch";
    case Errc::zero_total_outlay: return "zero-total-outlay";
    case Errc::return_undefined: return "return-undefined";
    case Errc::zero_denominator: return "zero-denominator";
    case Errc::empty_distribution: return "empty-distribution";
    case Errc::empty_grid: return "empty-grid";
    case Errc::grid_mismatch: return "grid-mismatch";
    case Errc::non_canonical_flows: return "non-canonical-flows";
    case Errc::empty_set: return "empty-set";
    case Errc::no_solution: return "no-solution";
    case Errc::metric_mismatch: return "metric-mismatch";
    case Errc::indeterminate_omega: return "indeterminate-omega";
    case Errc::invalid_input: return "invalid-input";
    case Errc::invalid_hurdle: return "invalid-hurdle";
    case Errc::nonpositive_std: return "nonpositive-std";
    case Errc::weight_sum: return "weight-sum";
    case Errc::parse_error: return "parse-error";
    case Errc::io_error: return "io-error";
    case Errc::config_error: return "config-error";
    }
    return "unknown";
}

/// True for errors caused by bad files, flags or configuration rather than
/// by the numbers themselves. The CLI maps these to exit status 2.
constexpr bool is_input_error(Errc code) noexcept {
    return code >= Errc::invalid_input;
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace icerank
