#include "keanelab/rational.hpp"

#include <cstdio>

namespace keanelab {
namespace {

BigInteger pow10(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return BigInteger::from_mpz(std::move(r));
}

// floor(log10(p/q)) for p, q > 0: the unique e with 10^e <= p/q < 10^(e+1).
long floor_log10(const BigInteger& p, const BigInteger& q) {
    long e = static_cast<long>(p.decimal_digits()) - static_cast<long>(q.decimal_digits());
    auto too_low = [&](long cand) {  // p/q >= 10^(cand+1)?
        return cand + 1 >= 0 ? p >= q * pow10(cand + 1) : p * pow10(-(cand + 1)) >= q;
    };
    auto too_high = [&](long cand) {  // p/q < 10^cand?
        return cand >= 0 ? p < q * pow10(cand) : p * pow10(-cand) < q;
    };
    while (too_low(e)) ++e;
    while (too_high(e)) --e;
    return e;
}

// round(p/q) for p >= 0, q > 0, half away from zero.
BigInteger div_round(const BigInteger& p, const BigInteger& q) {
    return divmod(p * BigInteger(2) + q, q * BigInteger(2)).first;
}

std::string format_sci(const BigInteger& mantissa, long exponent, int sig) {
    std::string digits = mantissa.to_string();
    std::string out;
    out += digits[0];
    if (sig > 1) {
        out += '.';
        out += digits.substr(1);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "e%+03ld", exponent);
    return out + buf;
}

}  // namespace

std::string decimal_approx(const Rational& value, int sig) {
    if (sig < 1) throw DomainError("decimal_approx needs at least one digit");
    if (value.is_zero()) return "0";
    if (value.sign() < 0) return "-" + decimal_approx(-value, sig);

    const BigInteger& p = value.num();
    const BigInteger& q = value.den();
    long e = floor_log10(p, q);
    const long shift = sig - 1 - e;
    BigInteger m = shift >= 0 ? div_round(p * pow10(shift), q) : div_round(p, q * pow10(-shift));
    if (m >= pow10(sig)) {  // rounding carried into a new digit
        m = divmod(m, BigInteger(10)).first;
        ++e;
    }
    return format_sci(m, e, sig);
}

std::string decimal_approx_root(const Rational& value, unsigned long root, int sig) {
    if (root == 0) throw DomainError("zeroth root");
    if (value.sign() < 0) throw DomainError("decimal_approx_root of negative value");
    if (root == 1) return decimal_approx(value, sig);
    if (value.is_zero()) return "0";

    const BigInteger& p = value.num();
    const BigInteger& q = value.den();
    // e = floor(log10 v) where v = (p/q)^(1/root): 10^(e*root) <= p/q < 10^((e+1)*root)
    long e = floor_log10(p, q);
    e = e >= 0 ? e / static_cast<long>(root) : -((-e + static_cast<long>(root) - 1) / static_cast<long>(root));
    auto cmp_pow = [&](long cand) {  // sign of p/q - 10^(cand*root)
        const long ex = cand * static_cast<long>(root);
        const BigInteger lhs = ex >= 0 ? p : p * pow10(-ex);
        const BigInteger rhs = ex >= 0 ? q * pow10(ex) : q;
        return lhs <=> rhs;
    };
    while (cmp_pow(e + 1) >= 0) ++e;
    while (cmp_pow(e) < 0) --e;

    // one guard digit, then round
    const long shift = sig - e;  // v * 10^shift has sig+1 digits
    const unsigned long r = root;
    BigInteger scaled = shift >= 0 ? divmod(p * pow(pow10(shift), r), q).first
                                   : divmod(p, q * pow(pow10(-shift), r)).first;
    BigInteger t = nth_root(scaled, r);
    BigInteger m = div_round(t, BigInteger(10));
    long out_e = e;
    if (m >= pow10(sig)) {
        m = divmod(m, BigInteger(10)).first;
        ++out_e;
    }
    return format_sci(m, out_e, sig);
}

}  // namespace keanelab
