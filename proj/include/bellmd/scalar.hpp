#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "bellmd/rational.hpp"

namespace bellmd {

// Numeric policy for the two scalar modes: exact rationals (default) and
// doubles (opt-in fast path). Algorithms compare against feas_eps() so the
// rational instantiation stays tolerance-free.
template <class T>
struct num_traits;

template <>
struct num_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(); }
    static Rational one() { return Rational(1); }
    static Rational feas_eps() { return Rational(); }
    static bool is_zero(const Rational& v) { return v.is_zero(); }
    static double to_double(const Rational& v) { return v.to_double(); }
    static Rational from_fraction(long long n, long long d) { return Rational(n, d); }
    static Rational parse(std::string_view s) { return Rational::parse(s); }
    static double log2(const Rational& v) { return v.log2(); }
};

template <>
struct num_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double feas_eps() { return 1e-9; }
    static bool is_zero(double v) { return std::abs(v) <= 1e-9; }
    static double to_double(double v) { return v; }
    static double from_fraction(long long n, long long d) {
        return static_cast<double>(n) / static_cast<double>(d);
    }
    static double parse(std::string_view s) { return std::stod(std::string(s)); }
    static double log2(double v) { return std::log2(v); }
};

template <class T>
double to_double(const T& v) {
    return num_traits<T>::to_double(v);
}

template <class T>
T scalar_abs(const T& v) {
    if constexpr (num_traits<T>::exact) return v.abs();
    else return std::abs(v);
}

} // namespace bellmd
