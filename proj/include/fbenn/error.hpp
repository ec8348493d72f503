#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fbenn {

enum class Errc {
    invalid_order,
    invalid_terminal,
    invalid_field,
    invalid_input,
    tail_violation,
    unsupported_order,
    domain_restriction,
    overflow_at_point,
    invalid_time,
    log_domain_violation,
    amplitude_too_large,
    not_a_companion_solution,
    invalid_step,
    blow_up,
    singular_point,
    domain_exceeded,
    fit_unreliable,
    degenerate,
    unknown_key,
    missing_key,
    range_violation,
    io_error,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace fbenn
