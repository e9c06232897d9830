#pragma once

#include <stdexcept>
#include <string>

namespace mpxeq {

enum class ErrorCode {
    parse_error,
    validation_error,
    degenerate_network,
    singular_layer,
    singular_h,
    singular_aggregate,
    non_positive_mu,
    non_interior_equilibrium,
    non_interior_pareto,
    non_interior_lindahl,
    parallel_no_improvement,
    line_search_failed,
    rank_deficient,
    dimension_mismatch,
    no_convergence,
    domain_error,
    io_error,
};

const char* error_code_name(ErrorCode code);

// All failures surface as Error; `location` carries the field path or the
// offending cell ("goods[1].network[0][0]", "allocation[2][3]", ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string location = {})
        : std::runtime_error(std::move(message)), code_(code), location_(std::move(location)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& location() const noexcept { return location_; }

private:
    ErrorCode code_;
    std::string location_;
};

} // namespace mpxeq
