#pragma once

// Test-side oracles, deliberately independent of the library code paths they
// cross-check: plain long long matrix arithmetic, and first-return data
// recovered by iterating single points instead of propagating segments.

#include <array>
#include <cstdint>
#include <vector>

#include "keanelab/iet.hpp"

namespace testoracle {

struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 11;
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

using M44 = std::array<std::array<long long, 4>, 4>;
using V4 = std::array<long long, 4>;

inline M44 mul(const M44& a, const M44& b) {
    M44 out{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            long long s = 0;
            for (int k = 0; k < 4; ++k) s += a[i][k] * b[k][j];
            out[i][j] = s;
        }
    }
    return out;
}

inline V4 mulv(const M44& a, const V4& v) {
    V4 out{};
    for (int i = 0; i < 4; ++i) {
        long long s = 0;
        for (int k = 0; k < 4; ++k) s += a[i][k] * v[k];
        out[i] = s;
    }
    return out;
}

inline M44 keane44(long long m, long long n) {
    return M44{{{0, 0, 1, 1}, {m - 1, m, 0, 0}, {n, n, n - 1, n}, {1, 1, 1, 1}}};
}

struct OracleCell {
    keanelab::Rational lo, hi;
    std::uint64_t return_time = 0;
    std::array<std::uint64_t, 4> visits{};
    keanelab::Rational translation;
};

// First-return partition recovered by iterating every lattice point of [a,b)
// with the rational-arithmetic apply. Only sensible for small denominators.
inline std::vector<OracleCell> lattice_induce(const keanelab::IetMap& t, const keanelab::Rational& a,
                                              const keanelab::Rational& b, std::uint64_t cap = 100000) {
    using keanelab::BigInteger;
    using keanelab::Rational;
    const BigInteger den = lcm(t.denominator(), lcm(a.den(), b.den()));
    const std::uint64_t d = den.to_uint64();
    const std::uint64_t ia = (a.num() * divmod(den, a.den()).first).to_uint64();
    const std::uint64_t ib = b == Rational(1) ? d : (b.num() * divmod(den, b.den()).first).to_uint64();

    std::vector<OracleCell> cells;
    for (std::uint64_t u = ia; u < ib; ++u) {
        Rational x(BigInteger(static_cast<long long>(u)), den);
        const Rational x0 = x;
        std::array<std::uint64_t, 4> visits{};
        std::uint64_t steps = 0;
        while (true) {
            const int j = t.interval_index(x);
            ++visits[static_cast<std::size_t>(j - 1)];
            x = t.apply(x);
            ++steps;
            if (steps > cap) throw keanelab::Error("oracle cap exceeded");
            if (x >= a && x < b) break;
        }
        const Rational trans = x - x0;
        const Rational hi(BigInteger(static_cast<long long>(u + 1)), den);
        if (!cells.empty() && cells.back().return_time == steps && cells.back().visits == visits &&
            cells.back().translation == trans && cells.back().hi == x0) {
            cells.back().hi = hi;
        } else {
            cells.push_back(OracleCell{x0, hi, steps, visits, trans});
        }
    }
    return cells;
}

}  // namespace testoracle
