#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>
#include <cmath>
#include <compare>

namespace bellmd {

// Arbitrary-precision signed integer, sign-magnitude with base-2^32 limbs.
// Canonical form: no leading zero limbs, zero has sign 0 and no limbs.
// Sized for exact simplex pivoting at desk scale, not for cryptography.
class BigInt {
public:
    BigInt() = default;

    BigInt(long long v) {
        if (v == 0) return;
        sign_ = v < 0 ? -1 : 1;
        // careful with LLONG_MIN
        std::uint64_t mag = v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
        push_u64(mag);
    }

    BigInt(int v) : BigInt(static_cast<long long>(v)) {}

    static BigInt from_u64(std::uint64_t v) {
        BigInt r;
        if (v) {
            r.sign_ = 1;
            r.push_u64(v);
        }
        return r;
    }

    static BigInt pow2(unsigned bits) {
        BigInt r;
        r.sign_ = 1;
        r.limbs_.assign(bits / 32 + 1, 0);
        r.limbs_.back() = std::uint32_t(1) << (bits % 32);
        return r;
    }

    static BigInt from_decimal(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("BigInt: empty string");
        int sign = 1;
        std::size_t i = 0;
        if (s[0] == '+' || s[0] == '-') {
            sign = s[0] == '-' ? -1 : 1;
            i = 1;
        }
        if (i == s.size()) throw std::invalid_argument("BigInt: no digits");
        BigInt r;
        // consume 9 decimal digits at a time
        while (i < s.size()) {
            std::uint32_t chunk = 0, scale = 1;
            std::size_t take = 0;
            while (take < 9 && i < s.size()) {
                char c = s[i];
                if (c < '0' || c > '9') throw std::invalid_argument("BigInt: bad digit");
                chunk = chunk * 10 + std::uint32_t(c - '0');
                scale *= 10;
                ++i;
                ++take;
            }
            r.mul_small(scale);
            r.add_small(chunk);
        }
        if (!r.limbs_.empty()) r.sign_ = sign;
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    int sign() const { return sign_; }

    BigInt operator-() const {
        BigInt r = *this;
        r.sign_ = -r.sign_;
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        if (r.sign_ < 0) r.sign_ = 1;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        BigInt r;
        if (a.sign_ == b.sign_) {
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.sign_ = a.sign_;
        } else {
            int c = cmp_mag(a.limbs_, b.limbs_);
            if (c == 0) return r;
            if (c > 0) {
                r.limbs_ = sub_mag(a.limbs_, b.limbs_);
                r.sign_ = a.sign_;
            } else {
                r.limbs_ = sub_mag(b.limbs_, a.limbs_);
                r.sign_ = b.sign_;
            }
        }
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        BigInt r;
        r.limbs_ = mul_mag(a.limbs_, b.limbs_);
        r.sign_ = a.sign_ * b.sign_;
        return r;
    }

    // Truncated toward zero; remainder carries the dividend's sign.
    static void divmod(const BigInt& num, const BigInt& den, BigInt& q, BigInt& r) {
        if (den.is_zero()) throw std::domain_error("BigInt: division by zero");
        q = BigInt();
        r = BigInt();
        if (num.is_zero()) return;
        divmod_mag(num.limbs_, den.limbs_, q.limbs_, r.limbs_);
        if (!q.limbs_.empty()) q.sign_ = num.sign_ * den.sign_;
        if (!r.limbs_.empty()) r.sign_ = num.sign_;
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }

    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    static BigInt gcd(BigInt a, BigInt b) {
        a.sign_ = a.is_zero() ? 0 : 1;
        b.sign_ = b.is_zero() ? 0 : 1;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = b;
            b = r;
        }
        return a;
    }

    std::strong_ordering operator<=>(const BigInt& o) const {
        if (sign_ != o.sign_) return sign_ <=> o.sign_;
        int c = cmp_mag(limbs_, o.limbs_);
        if (sign_ < 0) c = -c;
        return c <=> 0;
    }

    bool operator==(const BigInt& o) const { return sign_ == o.sign_ && limbs_ == o.limbs_; }

    std::size_t bit_length() const {
        if (limbs_.empty()) return 0;
        std::uint32_t top = limbs_.back();
        std::size_t bits = (limbs_.size() - 1) * 32;
        while (top) {
            ++bits;
            top >>= 1;
        }
        return bits;
    }

    bool fits_int64() const { return bit_length() <= 62; }

    long long to_int64() const {
        std::uint64_t v = 0;
        if (limbs_.size() > 2) throw std::overflow_error("BigInt: does not fit int64");
        for (std::size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
        if (v > (std::uint64_t(1) << 62)) throw std::overflow_error("BigInt: does not fit int64");
        long long s = static_cast<long long>(v);
        return sign_ < 0 ? -s : s;
    }

    double to_double() const {
        if (limbs_.empty()) return 0.0;
        std::size_t bl = bit_length();
        double mag;
        if (bl <= 63) {
            std::uint64_t v = 0;
            for (std::size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
            mag = static_cast<double>(v);
        } else {
            mag = std::ldexp(static_cast<double>(top_bits_64()), static_cast<int>(bl) - 64);
        }
        return sign_ < 0 ? -mag : mag;
    }

    // log2 of the magnitude; requires nonzero
    double log2_abs() const {
        if (limbs_.empty()) throw std::domain_error("BigInt: log2 of zero");
        std::size_t bl = bit_length();
        if (bl <= 63) return std::log2(std::abs(to_double()));
        return std::log2(static_cast<double>(top_bits_64())) + static_cast<double>(bl - 64);
    }

    std::string to_string() const {
        if (limbs_.empty()) return "0";
        std::vector<std::uint32_t> tmp = limbs_;
        std::string out;
        while (!tmp.empty()) {
            std::uint64_t rem = 0;
            for (std::size_t i = tmp.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | tmp[i];
                tmp[i] = static_cast<std::uint32_t>(cur / 1000000000u);
                rem = cur % 1000000000u;
            }
            while (!tmp.empty() && tmp.back() == 0) tmp.pop_back();
            char buf[16];
            if (tmp.empty())
                std::snprintf(buf, sizeof buf, "%u", static_cast<std::uint32_t>(rem));
            else
                std::snprintf(buf, sizeof buf, "%09u", static_cast<std::uint32_t>(rem));
            out.insert(0, buf);
        }
        if (sign_ < 0) out.insert(0, "-");
        return out;
    }

private:
    int sign_ = 0;
    std::vector<std::uint32_t> limbs_;

    void push_u64(std::uint64_t v) {
        limbs_.push_back(static_cast<std::uint32_t>(v));
        if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    }

    // top 64 bits of the magnitude, highest set bit at position 63; requires bit_length() >= 64
    std::uint64_t top_bits_64() const {
        std::size_t bl = bit_length();
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < 64; ++k) {
            std::size_t pos = bl - 64 + k;
            acc |= std::uint64_t((limbs_[pos / 32] >> (pos % 32)) & 1u) << k;
        }
        return acc;
    }

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) sign_ = 0;
    }

    void mul_small(std::uint32_t m) {
        std::uint64_t carry = 0;
        for (auto& l : limbs_) {
            std::uint64_t cur = std::uint64_t(l) * m + carry;
            l = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
        trim();
    }

    void add_small(std::uint32_t a) {
        std::uint64_t carry = a;
        for (std::size_t i = 0; carry && i < limbs_.size(); ++i) {
            std::uint64_t cur = std::uint64_t(limbs_[i]) + carry;
            limbs_[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
        if (!limbs_.empty() && sign_ == 0) sign_ = 1;
    }

    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        const auto& big = a.size() >= b.size() ? a : b;
        const auto& small = a.size() >= b.size() ? b : a;
        std::vector<std::uint32_t> r(big.size() + 1, 0);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < big.size(); ++i) {
            std::uint64_t cur = std::uint64_t(big[i]) + (i < small.size() ? small[i] : 0) + carry;
            r[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        r[big.size()] = static_cast<std::uint32_t>(carry);
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // requires |a| >= |b|
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r(a.size(), 0);
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::int64_t cur = std::int64_t(a[i]) - (i < b.size() ? std::int64_t(b[i]) : 0) - borrow;
            if (cur < 0) {
                cur += std::int64_t(1) << 32;
                borrow = 1;
            } else {
                borrow = 0;
            }
            r[i] = static_cast<std::uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    static std::vector<std::uint32_t> mul_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r(a.size() + b.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.size(); ++j) {
                std::uint64_t cur = std::uint64_t(a[i]) * b[j] + r[i + j] + carry;
                r[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            std::size_t k = i + b.size();
            while (carry) {
                std::uint64_t cur = std::uint64_t(r[k]) + carry;
                r[k] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    static bool get_bit(const std::vector<std::uint32_t>& v, std::size_t i) {
        return (v[i / 32] >> (i % 32)) & 1u;
    }

    static void set_bit(std::vector<std::uint32_t>& v, std::size_t i) {
        if (v.size() <= i / 32) v.resize(i / 32 + 1, 0);
        v[i / 32] |= std::uint32_t(1) << (i % 32);
    }

    // shift-subtract long division on magnitudes, with a short-division fast
    // path for single-limb divisors
    static void divmod_mag(const std::vector<std::uint32_t>& num,
                           const std::vector<std::uint32_t>& den,
                           std::vector<std::uint32_t>& q,
                           std::vector<std::uint32_t>& r) {
        q.clear();
        r.clear();
        if (cmp_mag(num, den) < 0) {
            r = num;
            return;
        }
        if (den.size() == 1) {
            // short division
            std::uint64_t d = den[0], rem = 0;
            q.assign(num.size(), 0);
            for (std::size_t i = num.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | num[i];
                q[i] = static_cast<std::uint32_t>(cur / d);
                rem = cur % d;
            }
            while (!q.empty() && q.back() == 0) q.pop_back();
            if (rem) r.push_back(static_cast<std::uint32_t>(rem));
            return;
        }
        std::size_t nbits = 32 * (num.size() - 1);
        {
            std::uint32_t top = num.back();
            while (top) {
                ++nbits;
                top >>= 1;
            }
        }
        for (std::size_t i = nbits; i-- > 0;) {
            // r = (r << 1) | bit_i(num)
            std::uint32_t carry = get_bit(num, i) ? 1u : 0u;
            for (std::size_t k = 0; k < r.size(); ++k) {
                std::uint32_t nxt = r[k] >> 31;
                r[k] = (r[k] << 1) | carry;
                carry = nxt;
            }
            if (carry) r.push_back(carry);
            if (cmp_mag(r, den) >= 0) {
                r = sub_mag(r, den);
                set_bit(q, i);
            }
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
    }
};

} // namespace bellmd
