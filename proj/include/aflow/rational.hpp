#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace aflow {

// Exact arithmetic for the threshold formulas: measured bounds enter as exact
// dyadic rationals, so the published constants are reproduced with zero
// floating-point tolerance.
using Rational = boost::multiprecision::cpp_rational;

// Exact value of the double (every finite double is dyadic).
Rational rational_from_double(double x);

// Parses "3", "-2/7", "0.125", "2.5e-3".  Decimal strings convert exactly
// (they are finite base-10 fractions).  Throws ContractError on junk.
Rational rational_from_string(const std::string& s);

std::string rational_to_string(const Rational& r);  // "num/den", or "num" for integers
double rational_to_double(const Rational& r);

}  // namespace aflow
