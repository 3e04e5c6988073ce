#pragma once

#include <cmath>
#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bellmd/bigint.hpp"

namespace bellmd {

// Exact rational number. Always normalized: positive denominator, reduced,
// zero stored as 0/1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    // accepts "n/d", integers and plain decimals ("0.29", "-3", "1/3")
    static Rational parse(std::string_view s) {
        if (auto pos = s.find('/'); pos != std::string_view::npos) {
            BigInt n = BigInt::from_decimal(s.substr(0, pos));
            BigInt d = BigInt::from_decimal(s.substr(pos + 1));
            return Rational(std::move(n), std::move(d));
        }
        if (auto pos = s.find('.'); pos != std::string_view::npos) {
            std::string digits(s.substr(0, pos));
            std::string_view frac = s.substr(pos + 1);
            if (frac.find_first_not_of("0123456789") != std::string_view::npos)
                throw std::invalid_argument("Rational: bad decimal");
            digits.append(frac);
            BigInt n = BigInt::from_decimal(digits);
            BigInt d = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) d *= BigInt(10);
            return Rational(std::move(n), std::move(d));
        }
        return Rational(BigInt::from_decimal(s), BigInt(1));
    }

    // exact value of the binary double (not a decimal re-interpretation)
    static Rational from_double(double x) {
        if (!std::isfinite(x)) throw std::invalid_argument("Rational: non-finite double");
        if (x == 0.0) return Rational();
        int e = 0;
        double m = std::frexp(x, &e); // x = m * 2^e, |m| in [0.5, 1)
        long long mant = static_cast<long long>(std::ldexp(m, 53));
        e -= 53;
        Rational r(mant);
        if (e >= 0) return Rational(r.num_ * BigInt::pow2(static_cast<unsigned>(e)), BigInt(1));
        return Rational(r.num_, BigInt::pow2(static_cast<unsigned>(-e)));
    }

    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    std::strong_ordering operator<=>(const Rational& o) const {
        return (num_ * o.den_) <=> (o.num_ * den_);
    }
    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    BigInt floor() const {
        BigInt q, r;
        BigInt::divmod(num_, den_, q, r);
        if (num_.sign() < 0 && !r.is_zero()) q -= BigInt(1);
        return q;
    }

    double to_double() const {
        if (is_zero()) return 0.0;
        std::size_t bn = num_.bit_length(), bd = den_.bit_length();
        if (bn < 1000 && bd < 1000) return num_.to_double() / den_.to_double();
        // exponent-aware path for very large operands
        double l = num_.log2_abs() - den_.log2_abs();
        double frac = std::exp2(l - std::floor(l));
        double v = std::ldexp(frac, static_cast<int>(std::floor(l)));
        return sign() < 0 ? -v : v;
    }

    // requires a strictly positive value
    double log2() const {
        if (sign() <= 0) throw std::domain_error("Rational: log2 of non-positive value");
        return num_.log2_abs() - den_.log2_abs();
    }

    std::string to_string() const {
        if (den_ == BigInt(1)) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    BigInt num_, den_;

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        BigInt g = BigInt::gcd(num_, den_);
        if (!(g == BigInt(1))) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
};

} // namespace bellmd
