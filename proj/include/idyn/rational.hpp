#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace idyn {

// Exact rational arithmetic underpins every set-level computation in the
// toolkit; results are certificates, not floating-point estimates.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw InputError("rational with zero denominator");
    return Rational(num, den);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
std::string rat_str(const Rational& r);

// Parses "p", "p/q" or a plain decimal like "0.6" (exactly, as 6/10).
// Returns nullopt on malformed input.
std::optional<Rational> rat_parse(const std::string& text);

}  // namespace idyn
