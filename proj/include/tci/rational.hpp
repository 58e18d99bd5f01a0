#pragma once

#include <gmpxx.h>

#include <string>

namespace tci {

using Rational = mpq_class;

// Accepts "p/q", integers, and finite decimals such as "0.25".
Rational parse_rational(const std::string& text);

// Canonical form: "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& r);

}  // namespace tci
