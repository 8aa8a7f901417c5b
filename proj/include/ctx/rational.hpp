#pragma once

// Exact rational scalar used for the ExactRational solver mode and for
// authoritative storage of probability data. Doubles convert to rationals
// exactly (every finite double is dyadic), so float-mode and exact-mode
// always see consistent inputs.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace ctx {

using Rational = boost::multiprecision::cpp_rational;
using BigInt   = boost::multiprecision::cpp_int;

inline Rational rational_from_double(double v) {
    if (!std::isfinite(v))
        throw std::invalid_argument("rational_from_double: value is not finite");
    return Rational(v);  // exact: doubles are dyadic rationals
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

// Parses "3/4", "-1/8", "0.25", "1e-3" or plain integers. Fractions are kept
// exact; decimal/scientific forms go through strtod and keep the double's
// exact dyadic value.
inline Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_rational: cannot parse \"" + s + "\"");
        }
        if (pos != s.size())
            throw std::invalid_argument("parse_rational: trailing characters in \"" + s + "\"");
        return rational_from_double(v);
    }
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (num.empty() || den.empty())
        throw std::invalid_argument("parse_rational: malformed fraction \"" + s + "\"");
    BigInt n, d;
    try {
        n = BigInt(num);
        d = BigInt(den);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_rational: malformed fraction \"" + s + "\"");
    }
    if (d == 0)
        throw std::invalid_argument("parse_rational: zero denominator in \"" + s + "\"");
    return Rational(n, d);
}

// Scalar adapters so LP/builder code can be written once and instantiated for
// double (tolerance-based) and Rational (exact) arithmetic.
template <typename T>
inline T scalar_from(const Rational& r);

template <>
inline double scalar_from<double>(const Rational& r) { return to_double(r); }

template <>
inline Rational scalar_from<Rational>(const Rational& r) { return r; }

template <typename T>
inline double as_double(const T& v);

template <>
inline double as_double<double>(const double& v) { return v; }

template <>
inline double as_double<Rational>(const Rational& v) { return to_double(v); }

}  // namespace ctx
