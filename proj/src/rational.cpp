#include "aflow/rational.hpp"

#include <cmath>

#include "aflow/common.hpp"

namespace aflow {

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ContractError("rational_from_double: value is not finite");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double mant = std::frexp(x, &exp);               // x = mant * 2^exp, |mant| in [0.5, 1)
    const long long scaled = static_cast<long long>(std::ldexp(mant, 53));  // integral: 53-bit mantissa
    Rational r(scaled);
    const int shift = exp - 53;
    boost::multiprecision::cpp_int two_pow = boost::multiprecision::pow(boost::multiprecision::cpp_int(2),
                                                                        static_cast<unsigned>(std::abs(shift)));
    if (shift >= 0) {
        r *= Rational(two_pow);
    } else {
        r /= Rational(two_pow);
    }
    return r;
}

Rational rational_from_string(const std::string& s) {
    const auto bad = [&]() { return ContractError("not a rational literal: '" + s + "'"); };
    std::string t = s;
    // trim
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    if (b == std::string::npos) throw bad();
    t = t.substr(b, e - b + 1);

    const auto slash = t.find('/');
    if (slash != std::string::npos) {
        const Rational num = rational_from_string(t.substr(0, slash));
        const Rational den = rational_from_string(t.substr(slash + 1));
        if (den == 0) throw ContractError("rational literal divides by zero: '" + s + "'");
        return num / den;
    }

    bool neg = false;
    size_t i = 0;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) {
        neg = (t[i] == '-');
        ++i;
    }
    boost::multiprecision::cpp_int mantissa = 0;
    long frac_digits = 0;
    long exponent = 0;
    bool any_digit = false;
    bool seen_dot = false;
    for (; i < t.size(); ++i) {
        const char c = t[i];
        if (c >= '0' && c <= '9') {
            mantissa = mantissa * 10 + (c - '0');
            if (seen_dot) ++frac_digits;
            any_digit = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && any_digit) {
            const std::string tail = t.substr(i + 1);
            if (tail.empty()) throw bad();
            size_t pos = 0;
            try {
                exponent = std::stol(tail, &pos);
            } catch (...) {
                throw bad();
            }
            if (pos != tail.size()) throw bad();
            break;
        } else {
            throw bad();
        }
    }
    if (!any_digit) throw bad();

    Rational r(mantissa);
    const long net = exponent - frac_digits;
    boost::multiprecision::cpp_int ten_pow = boost::multiprecision::pow(boost::multiprecision::cpp_int(10),
                                                                       static_cast<unsigned>(std::abs(net)));
    if (net >= 0) {
        r *= Rational(ten_pow);
    } else {
        r /= Rational(ten_pow);
    }
    return neg ? -r : r;
}

std::string rational_to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double rational_to_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace aflow
