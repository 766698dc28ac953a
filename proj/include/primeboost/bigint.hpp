#pragma once

#include <gmpxx.h>

#include <string>

namespace primeboost {

// Arbitrary-precision instances. Shattering sets outgrow 64 bits from
// four points upward.
using BigInt = mpz_class;

[[nodiscard]] inline std::string to_decimal(const BigInt& x) { return x.get_str(10); }

} // namespace primeboost
