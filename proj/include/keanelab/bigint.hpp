#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "keanelab/errors.hpp"

namespace keanelab {

/// Arbitrary-precision signed integer. All arithmetic is exact at any
/// magnitude the tool produces (Theorem-4 style checks reach ~10^60000).
class BigInteger {
public:
    BigInteger() : v_(0) {}
    BigInteger(long long x) : v_(static_cast<long>(x)) {}
    BigInteger(int x) : v_(x) {}

    /// Parses an optionally negative decimal string; rejects anything else.
    explicit BigInteger(const std::string& decimal) {
        if (!looks_like_decimal(decimal) || mpz_set_str(v_.get_mpz_t(), decimal.c_str(), 10) != 0) {
            throw DomainError("not a decimal integer: \"" + decimal + "\"");
        }
    }

    static BigInteger from_mpz(mpz_class v) {
        BigInteger b;
        b.v_ = std::move(v);
        return b;
    }

    const mpz_class& mpz() const { return v_; }
    mpz_class& mpz() { return v_; }

    std::string to_string() const { return v_.get_str(); }

    int sign() const { return mpz_sgn(v_.get_mpz_t()); }
    bool is_zero() const { return sign() == 0; }
    bool fits_uint64() const {
        return sign() >= 0 && mpz_sizeinbase(v_.get_mpz_t(), 2) <= 63;
    }
    std::uint64_t to_uint64() const {
        if (!fits_uint64()) throw DomainError("value does not fit in uint64: " + to_string());
        return mpz_get_ui(v_.get_mpz_t());
    }

    std::size_t bit_length() const { return is_zero() ? 0 : mpz_sizeinbase(v_.get_mpz_t(), 2); }
    std::size_t decimal_digits() const { return mpz_sizeinbase(v_.get_mpz_t(), 10); }

    BigInteger operator-() const { return from_mpz(-v_); }
    BigInteger& operator+=(const BigInteger& o) { v_ += o.v_; return *this; }
    BigInteger& operator-=(const BigInteger& o) { v_ -= o.v_; return *this; }
    BigInteger& operator*=(const BigInteger& o) { v_ *= o.v_; return *this; }

    friend BigInteger operator+(BigInteger a, const BigInteger& b) { a += b; return a; }
    friend BigInteger operator-(BigInteger a, const BigInteger& b) { a -= b; return a; }
    friend BigInteger operator*(BigInteger a, const BigInteger& b) { a *= b; return a; }

    friend bool operator==(const BigInteger& a, const BigInteger& b) { return mpz_cmp(a.v_.get_mpz_t(), b.v_.get_mpz_t()) == 0; }
    friend std::strong_ordering operator<=>(const BigInteger& a, const BigInteger& b) {
        const int c = mpz_cmp(a.v_.get_mpz_t(), b.v_.get_mpz_t());
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const BigInteger& b) { return os << b.to_string(); }

private:
    static bool looks_like_decimal(const std::string& s) {
        std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (i >= s.size()) return false;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') return false;
        }
        return true;
    }

    mpz_class v_;
};

inline BigInteger abs(const BigInteger& a) { return BigInteger::from_mpz(::abs(a.mpz())); }

inline BigInteger gcd(const BigInteger& a, const BigInteger& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.mpz().get_mpz_t(), b.mpz().get_mpz_t());
    return BigInteger::from_mpz(std::move(g));
}

inline BigInteger lcm(const BigInteger& a, const BigInteger& b) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), a.mpz().get_mpz_t(), b.mpz().get_mpz_t());
    return BigInteger::from_mpz(std::move(l));
}

inline BigInteger pow(const BigInteger& base, unsigned long exp) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.mpz().get_mpz_t(), exp);
    return BigInteger::from_mpz(std::move(r));
}

inline BigInteger pow2(unsigned long exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, exp);
    return BigInteger::from_mpz(std::move(r));
}

/// Floor of the n-th root.
inline BigInteger nth_root(const BigInteger& a, unsigned long n) {
    if (a.sign() < 0) throw DomainError("nth_root of negative value");
    mpz_class r;
    mpz_root(r.get_mpz_t(), a.mpz().get_mpz_t(), n);
    return BigInteger::from_mpz(std::move(r));
}

/// Truncated quotient and remainder, |r| < |b|, sign(r) == sign(a).
inline std::pair<BigInteger, BigInteger> divmod(const BigInteger& a, const BigInteger& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.mpz().get_mpz_t(), b.mpz().get_mpz_t());
    return {BigInteger::from_mpz(std::move(q)), BigInteger::from_mpz(std::move(r))};
}

}  // namespace keanelab
