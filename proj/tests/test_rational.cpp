#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bellmd/rational.hpp"
#include "bellmd/scalar.hpp"

using bellmd::BigInt;
using bellmd::Rational;

TEST_CASE("bigint basic arithmetic") {
    CHECK(BigInt(0).to_string() == "0");
    CHECK(BigInt(-42).to_string() == "-42");
    CHECK((BigInt(1000000007LL) * BigInt(998244353LL)).to_string() == "998244359987710471");
    CHECK((BigInt(7) - BigInt(10)).to_string() == "-3");
    CHECK((BigInt(-7) + BigInt(10)).to_string() == "3");

    BigInt q, r;
    BigInt::divmod(BigInt(17), BigInt(5), q, r);
    CHECK(q == BigInt(3));
    CHECK(r == BigInt(2));
    BigInt::divmod(BigInt(-17), BigInt(5), q, r);
    CHECK(q == BigInt(-3));
    CHECK(r == BigInt(-2));

    CHECK(BigInt::gcd(BigInt(12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::gcd(BigInt(0), BigInt(-5)) == BigInt(5));
}

TEST_CASE("bigint agrees with int128 oracle on random operands") {
    std::mt19937_64 rng(20240817);
    for (int iter = 0; iter < 4000; ++iter) {
        long long a = static_cast<long long>(rng() >> 16) - (1LL << 47);
        long long b = static_cast<long long>(rng() >> 16) - (1LL << 47);
        BigInt A(a), B(b);
        CHECK((A + B).to_string() == std::to_string(a + b));
        CHECK((A - B).to_string() == std::to_string(a - b));
        __int128 p = static_cast<__int128>(a) * b;
        // render int128 via two halves
        auto i128_str = [](__int128 v) {
            if (v == 0) return std::string("0");
            bool neg = v < 0;
            unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
            std::string s;
            while (u) {
                s.insert(s.begin(), char('0' + int(u % 10)));
                u /= 10;
            }
            return neg ? "-" + s : s;
        };
        CHECK((A * B).to_string() == i128_str(p));
        if (b != 0) {
            BigInt q, r;
            BigInt::divmod(A, B, q, r);
            CHECK(q.to_string() == std::to_string(a / b));
            CHECK(r.to_string() == std::to_string(a % b));
        }
    }
}

TEST_CASE("bigint large multiply/divide round trip") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        BigInt a = BigInt::from_u64(rng()) * BigInt::from_u64(rng()) + BigInt::from_u64(rng());
        BigInt b = BigInt::from_u64(rng() | 1);
        BigInt prod = a * b;
        BigInt q, r;
        BigInt::divmod(prod, b, q, r);
        CHECK(q == a);
        CHECK(r.is_zero());
        BigInt::divmod(prod + BigInt(1), b, q, r);
        CHECK(q == a);
        CHECK(r == BigInt(1));
    }
}

TEST_CASE("bigint decimal parse and pow2") {
    CHECK(BigInt::from_decimal("123456789012345678901234567890").to_string() ==
          "123456789012345678901234567890");
    CHECK(BigInt::from_decimal("-000123").to_string() == "-123");
    CHECK(BigInt::pow2(64).to_string() == "18446744073709551616");
    CHECK(BigInt::pow2(0) == BigInt(1));
    CHECK(BigInt::pow2(10) == BigInt(1024));
    CHECK(BigInt::from_decimal("987654321987654321").bit_length() == 60);
}

TEST_CASE("rational normalization and arithmetic") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7).to_string() == "0");
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(1, 3) - Rational(1, 2)) == Rational(-1, 6));
    CHECK((Rational(3, 7) * Rational(14, 9)) == Rational(2, 3));
    CHECK((Rational(3, 7) / Rational(6, 7)) == Rational(1, 2));
    CHECK(Rational(5, 3).floor() == BigInt(1));
    CHECK(Rational(-5, 3).floor() == BigInt(-2));
    CHECK(Rational(6, 3).floor() == BigInt(2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 3) > Rational(-1, 2));
}

TEST_CASE("rational parse and print") {
    CHECK(Rational::parse("29/100") == Rational(29, 100));
    CHECK(Rational::parse("0.29") == Rational(29, 100));
    CHECK(Rational::parse("-0.125") == Rational(-1, 8));
    CHECK(Rational::parse("4") == Rational(4));
    CHECK(Rational::parse("1.5") == Rational(3, 2));
    CHECK(Rational(29, 100).to_string() == "29/100");
    CHECK(Rational(4).to_string() == "4");
    CHECK_THROWS(Rational::parse("1/0"));
    CHECK_THROWS(Rational::parse("abc"));
}

TEST_CASE("rational double conversions") {
    CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(Rational(29, 100).to_double() == doctest::Approx(0.29).epsilon(1e-15));
    CHECK(Rational::from_double(0.5) == Rational(1, 2));
    CHECK(Rational::from_double(-0.75) == Rational(-3, 4));
    // 0.1 is not exactly representable; the exact binary value round-trips
    CHECK(Rational::from_double(0.1).to_double() == 0.1);
    CHECK(Rational(3).log2() == doctest::Approx(1.5849625007211562).epsilon(1e-12));
    CHECK(Rational(1, 8).log2() == doctest::Approx(-3.0).epsilon(1e-12));
    // huge operands go through the exponent-aware path
    Rational huge(BigInt::pow2(4000) + BigInt(12345), BigInt::pow2(4001));
    CHECK(huge.to_double() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rational random field properties") {
    std::mt19937_64 rng(99);
    auto rand_rat = [&] {
        long long n = static_cast<long long>(rng() % 2001) - 1000;
        long long d = static_cast<long long>(rng() % 999) + 1;
        return Rational(n, d);
    };
    for (int iter = 0; iter < 2000; ++iter) {
        Rational a = rand_rat(), b = rand_rat(), c = rand_rat();
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a + b == b + a);
        CHECK((a - b) + b == a);
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}
