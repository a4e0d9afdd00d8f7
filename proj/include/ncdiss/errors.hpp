#pragma once

#include <stdexcept>
#include <string>

namespace ncdiss {

// Thrown by gf inversion of zero.
class inversion_of_zero : public std::domain_error {
public:
    inversion_of_zero() : std::domain_error("inversion of zero in GF(2^q)") {}
};

// Coded message or packet shape does not match the buffer it is offered to.
class dimension_mismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// decode() on a buffer whose rank is below N.
class not_decodable : public std::runtime_error {
public:
    not_decodable(std::size_t rank, std::size_t n)
        : std::runtime_error("buffer not decodable: rank " + std::to_string(rank) + " < " +
                             std::to_string(n)) {}
};

// Malformed topology, positions file, channel parameters or experiment spec.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Reception matrix with no usable link, e.g. bound evaluation with sum P_uv = 0.
class disconnected_network : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace ncdiss
