#pragma once

// Exact rational scalars for the whole library.
//
// Every number in the engine is a bignum rational; there are no floating
// point values anywhere.  The backing type keeps fractions reduced with a
// positive denominator, so equality is plain structural equality.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace loopw {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool rat_is_integer(const Rat& r) { return rat_den(r) == 1; }

/// Render as "p/q", or just "p" when the denominator is 1.
inline std::string rat_str(const Rat& r) {
    std::string s = rat_num(r).str();
    if (!rat_is_integer(r)) s += "/" + rat_den(r).str();
    return s;
}

/// Parse "p", "-p", or "p/q" exactly.  Throws std::invalid_argument on junk.
inline Rat rat_parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    auto check_int = [&](const std::string& part) {
        if (part.empty()) throw std::invalid_argument("bad rational literal: " + text);
        std::size_t k = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (k == part.size()) throw std::invalid_argument("bad rational literal: " + text);
        for (; k < part.size(); ++k)
            if (part[k] < '0' || part[k] > '9')
                throw std::invalid_argument("bad rational literal: " + text);
    };
    if (slash == std::string::npos) {
        check_int(text);
        return Rat(Int(text));
    }
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    check_int(num);
    check_int(den);
    Int d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rat(Int(num)) / Rat(d);
}

/// r^e for integer e of either sign; 0^0 = 1, negative powers of 0 throw.
inline Rat rat_pow(const Rat& r, long e) {
    if (e == 0) return Rat(1);
    if (r == 0) {
        if (e < 0) throw std::domain_error("negative power of zero");
        return Rat(0);
    }
    Rat base = r;
    bool invert = e < 0;
    unsigned long n = invert ? static_cast<unsigned long>(-(e + 1)) + 1UL
                             : static_cast<unsigned long>(e);
    Rat acc(1);
    while (n) {
        if (n & 1UL) acc *= base;
        base *= base;
        n >>= 1UL;
    }
    return invert ? Rat(1) / acc : acc;
}

/// n! as an exact integer-valued rational.
inline Rat rat_factorial(long n) {
    Rat acc(1);
    for (long k = 2; k <= n; ++k) acc *= Rat(k);
    return acc;
}

/// Binomial coefficient for integer upper index (may be negative in other
/// conventions; here we only need n >= 0).
inline Rat rat_binom(long n, long k) {
    if (k < 0 || k > n) return Rat(0);
    Rat acc(1);
    for (long t = 0; t < k; ++t) acc *= Rat(n - t, t + 1);
    return acc;
}

} // namespace loopw
