#pragma once

#include <stdexcept>
#include <string>

namespace gfilt {

/// Machine-readable error categories, mirrored by the CLI exit codes.
enum class errc {
    invalid_argument = 1,
    invalid_generator,
    degree_zero_vertex,
    dimension_mismatch,
    size_cap,
    reciprocal_singularity,
    indefinite_filter,
    divergence,
    undefined_value,
    invalid_penalty,
    io_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

} // namespace gfilt
