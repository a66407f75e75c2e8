#pragma once

#include <stdexcept>
#include <string>

namespace klsum {

// Failure categories used across the library.  Each carries a human-readable
// message; tests match on the category.
enum class errc {
    not_invertible,      // modular inverse of a non-unit
    not_primitive,       // primitive character required
    not_coprime,         // coprimality precondition violated
    modulus_mismatch,    // modulus incompatible with a character or twist
    conductor_mismatch,  // conductor does not divide the required modulus
    linnik_range,        // sqrt(mn)/X > 1
    order_out_of_range,  // Bessel order / spectral parameter outside the supported set
    truncation_too_small,// truncated value not stable under doubling the cutoff
    range_violated,      // empty or inconsistent summation range
    config_invalid,      // malformed experiment configuration
    io_error,            // file could not be written or read
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace klsum
