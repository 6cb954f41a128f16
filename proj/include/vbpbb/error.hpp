#pragma once

#include <stdexcept>
#include <string>

namespace vbpbb {

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class ErrorKind {
    invalid_period,
    invalid_parameter,
    parse,
    non_contiguous_time,
    series_too_short,
    insufficient_data,
    invalid_comparison,
    undefined_correlation,
    invalid_aggregation,
    scenario_infeasible,
};

[[nodiscard]] const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace vbpbb
