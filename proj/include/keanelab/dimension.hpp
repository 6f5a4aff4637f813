#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "keanelab/analysis.hpp"

namespace keanelab {

/// One cover-sum term t_k(s) = b_{k,2} * lambda3(I_2^(k))^s, carried exactly
/// as t_k(s)^q for s = p/q (no logarithms or floats in any comparison).
struct CoverTerm {
    int k = 0;
    BigInteger b_k2;
    Rational lambda3_I2k;       // ambient depth-K truncated length
    Rational term_pow;          // t_k(s)^q, exact
    std::string term_approx;    // decimal rendering of t_k(s)
    bool le_one = false;        // t_k(s) <= 1
    bool le_pow2 = false;       // t_k(s) <= 2^{-k}
};

struct CoverSumSeries {
    Rational s;
    int L = 0;
    int K = 0;
    std::vector<CoverTerm> terms;                  // k = L .. K-2
    bool decay_flag = false;                       // t_{k+1} <= t_k / 2 for all computed k
    std::vector<std::string> partial_sum_approx;   // running sums (approximate, for plotting)
};

/// Requires 0 < s <= 1, 1 <= L <= K-2, K <= depth.
CoverSumSeries cover_terms(const ParamSeq& seq, int K, const Rational& s, int L);

/// Bisection bracket for the smallest exponent whose cover terms halve level
/// to level. Monotonicity: larger s decays more. Returns [1,1] when even s=1
/// does not decay (dimension-1 behaviour) and [0,0] when every tested s
/// decays down to the tolerance.
struct CriticalExponent {
    Rational lo;
    Rational hi;
    std::string flag;  // "bracketed", "none_decay" or "all_decay"
    int evaluations = 0;
};

CriticalExponent critical_exponent(const ParamSeq& seq, int K, const Rational& tolerance);

/// n_{k+1} >= (b_{k,2})^r 2^{rk} m_k, compared as integer powers for r = p/q.
VerificationReport check_theorem2_condition(const ParamSeq& seq, const Rational& r, int k);

struct Theorem3Condition {
    VerificationReport ratio;   // b_{k+1,2} <= (b_{k,2})^r
    VerificationReport growth;  // m_k >= k^2 n_k
};

Theorem3Condition check_theorem3_condition(const ParamSeq& seq, const Rational& r, int k);

/// Condition check paired with the cover consequence t_k(1/r) <= 2^{-k}
/// (computed when k <= K-2; the implication must hold wherever the
/// hypothesis does).
struct Theorem2ChainEntry {
    VerificationReport condition;
    std::optional<bool> cover_le_pow2;
    std::optional<bool> implication_ok;
};

std::vector<Theorem2ChainEntry> theorem2_chain(const ParamSeq& seq, int K, const Rational& r);

/// The growth inequality from the Theorem-4 argument with both sides built
/// from exact powers: (2^k 9^{(4^k-1)/3 + k(k+1)/2})^2 2^{2k} 9^{4^(k-1)+k} < 9^{4^k}.
struct Theorem4ProofCheck {
    int k = 0;
    bool holds = false;
};

std::vector<Theorem4ProofCheck> theorem4_proof_inequality(int kmax);

/// Smallest k <= kmax where the proof inequality holds, 0 if none.
int theorem4_proof_threshold(int kmax);

/// Running minima of n^beta |T^n x - x| over 1 <= n <= N, all comparisons via
/// q-th powers for beta = p/q.
struct RecurrenceSample {
    std::uint64_t n = 0;
    Rational distance;        // |T^n x - x|
    Rational stat_pow;        // (n^beta |T^n x - x|)^q, exact
    std::string stat_approx;  // decimal rendering of n^beta |T^n x - x|
};

struct RecurrenceSeries {
    Rational x0;
    std::uint64_t horizon = 0;
    Rational beta;
    std::vector<RecurrenceSample> records;  // strictly decreasing statistic
    RecurrenceSample minimum;
    std::uint64_t breakpoint_hits = 0;      // orbit points landing exactly on a breakpoint
    std::uint64_t first_breakpoint_hit = 0;
};

RecurrenceSeries recurrence_statistic(const IetMap& t, const Rational& x, std::uint64_t horizon, const Rational& beta);

/// For x the midpoint of I_2^(k): |T^s x - x| >= min_{i != 2} lambda3(I_i^(k))
/// for all 1 <= s < b_{k,2}, checked exactly. k = 0 is vacuous.
VerificationReport separation_check(const ParamSeq& seq, int K, int k, std::uint64_t step_budget = 50'000'000);

}  // namespace keanelab
