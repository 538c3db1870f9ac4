#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace simlab {

// Exact arbitrary-precision rational. All metric and weight arithmetic in the
// library goes through this type; there is no floating point anywhere.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat make_rat(long long num, long long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    return Rat(BigInt(num), BigInt(den));
}

// Renders as "p/q", or just "p" when the denominator is 1.
inline std::string rat_to_string(const Rat& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Accepts "p", "p/q", and an optional leading minus sign.
inline Rat parse_rat(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rat(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::domain_error("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse rational: '" + text + "'");
    }
}

// 2^-k as an exact rational, k >= 0.
inline Rat pow2_inv(int k) {
    BigInt den = 1;
    den <<= k;
    return Rat(BigInt(1), den);
}

}  // namespace simlab
