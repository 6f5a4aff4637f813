#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <utility>

#include "keanelab/bigint.hpp"
#include "keanelab/errors.hpp"

namespace keanelab {

/// Exact rational, always in lowest terms with positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}
    explicit Rational(BigInteger n) : num_(std::move(n)), den_(1) {}

    Rational(BigInteger num, BigInteger den) : num_(std::move(num)), den_(std::move(den)) {
        canonicalize();
    }

    /// Parses "p/q" or a plain decimal integer.
    static Rational parse(const std::string& text) {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(BigInteger(text));
        return Rational(BigInteger(text.substr(0, slash)), BigInteger(text.substr(slash + 1)));
    }

    const BigInteger& num() const { return num_; }
    const BigInteger& den() const { return den_; }

    int sign() const { return num_.sign(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_ == BigInteger(1); }

    /// Serialized as "p/q" in lowest terms, denominator always present.
    std::string to_string() const { return num_.to_string() + "/" + den_.to_string(); }

    Rational operator-() const { return unchecked(-num_, den_); }

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
        if (b.is_zero()) throw DomainError("rational division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return (a.num_ * b.den_) <=> (b.num_ * a.den_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    static Rational unchecked(BigInteger n, BigInteger d) {
        Rational r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }

    void canonicalize() {
        if (den_.is_zero()) throw DomainError("rational with zero denominator");
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        BigInteger g = gcd(num_, den_);
        if (g > BigInteger(1)) {
            num_ = divmod(num_, g).first;
            den_ = divmod(den_, g).first;
        }
        if (num_.is_zero()) den_ = BigInteger(1);
    }

    BigInteger num_;
    BigInteger den_;
};

inline Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

inline Rational pow(const Rational& base, unsigned long exp) {
    return Rational(pow(base.num(), exp), pow(base.den(), exp));
}

/// Decimal approximation with `sig` significant digits, scientific notation
/// ("6.92234346858e-01"); exact zero renders as "0".
std::string decimal_approx(const Rational& value, int sig = 12);

/// Decimal approximation of value^(1/root) for value >= 0 (report rendering
/// of fractional-exponent quantities; may be one ulp off in the last digit).
std::string decimal_approx_root(const Rational& value, unsigned long root, int sig = 12);

}  // namespace keanelab
