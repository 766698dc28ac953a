#pragma once

#include <stdexcept>
#include <string>

namespace primeboost {

// Argument outside the mathematical domain of an operation (e.g. a sieve
// limit below 2, an instance below 2).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Query beyond the bounds of an already-built table.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A configured capacity was exceeded: not enough primes in the table,
// an unfactorizable residual, a set-size cap, an arithmetic overflow.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace primeboost
