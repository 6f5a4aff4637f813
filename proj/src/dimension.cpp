#include "keanelab/dimension.hpp"

#include <algorithm>

namespace keanelab {

namespace {

unsigned long to_exp(const BigInteger& v, const char* what) {
    if (v.sign() <= 0 || !v.fits_uint64()) throw DomainError(std::string(what) + " exponent out of range");
    return static_cast<unsigned long>(v.to_uint64());
}

// ambient lambda3(I_2^(k)) at truncation K, via the tail-product form
Rational lambda3_I2(const ParamSeq& seq, int k, int K) {
    const Vec4Z tail = mat_vec(tail_matrix(seq, k, K), Vec4Z::basis(3));
    const BigInteger total = l1_norm(mat_vec(product_matrix(seq, K), Vec4Z::basis(3)));
    return Rational(tail[1], total);
}

CoverTerm make_term(const ParamSeq& seq, int K, int k, unsigned long p, unsigned long q) {
    CoverTerm t;
    t.k = k;
    t.b_k2 = column_mass(seq, k, 2);
    t.lambda3_I2k = lambda3_I2(seq, k, K);
    t.term_pow = pow(Rational(t.b_k2), q) * pow(t.lambda3_I2k, p);
    t.term_approx = decimal_approx_root(t.term_pow, q);
    t.le_one = t.term_pow <= Rational(1);
    t.le_pow2 = t.term_pow <= Rational(BigInteger(1), pow2(static_cast<unsigned long>(k) * q));
    return t;
}

}  // namespace

CoverSumSeries cover_terms(const ParamSeq& seq, int K, const Rational& s, int L) {
    if (s.sign() <= 0 || s > Rational(1)) {
        throw DomainError("cover exponent must satisfy 0 < s <= 1, got " + s.to_string() +
                          " (s = 0 diverges: t_k(0) = b_{k,2})");
    }
    if (L < 1 || L > K - 2) throw DomainError("cover start level must satisfy 1 <= L <= K-2");
    if (K > seq.depth()) throw DomainError("truncation depth K exceeds sequence depth");

    const unsigned long p = to_exp(s.num(), "cover");
    const unsigned long q = to_exp(s.den(), "cover");

    CoverSumSeries series;
    series.s = s;
    series.L = L;
    series.K = K;
    // accumulate partial sums from fixed-precision snapshots of each term
    const BigInteger snap_scale = pow(BigInteger(10), 18);
    Rational running(0);
    for (int k = L; k <= K - 2; ++k) {
        CoverTerm t = make_term(seq, K, k, p, q);
        const BigInteger scaled =
            nth_root(divmod(t.term_pow.num() * pow(snap_scale, q), t.term_pow.den()).first, q);
        running += Rational(scaled, snap_scale);
        series.partial_sum_approx.push_back(decimal_approx(running));
        series.terms.push_back(std::move(t));
    }
    series.decay_flag = true;
    for (std::size_t i = 1; i < series.terms.size(); ++i) {
        // t_{k+1} <= t_k / 2  <=>  t_{k+1}^q * 2^q <= t_k^q
        if (series.terms[i].term_pow * Rational(pow2(q)) > series.terms[i - 1].term_pow) {
            series.decay_flag = false;
            break;
        }
    }
    return series;
}

CriticalExponent critical_exponent(const ParamSeq& seq, int K, const Rational& tolerance) {
    if (K < 4) throw DomainError("critical_exponent needs K >= 4");
    if (tolerance.sign() <= 0) throw DomainError("tolerance must be positive");

    CriticalExponent ce;
    auto decaying = [&](const Rational& s) {
        ++ce.evaluations;
        return cover_terms(seq, K, s, 1).decay_flag;
    };

    if (!decaying(Rational(1))) {
        ce.lo = Rational(1);
        ce.hi = Rational(1);
        ce.flag = "none_decay";
        return ce;
    }
    Rational lo(0), hi(1);
    while (hi - lo > tolerance) {
        const Rational mid = (lo + hi) / Rational(2);
        if (decaying(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if (lo.is_zero()) {
        ce.lo = Rational(0);
        ce.hi = Rational(0);
        ce.flag = "all_decay";
        return ce;
    }
    ce.lo = lo;
    ce.hi = hi;
    ce.flag = "bracketed";
    return ce;
}

VerificationReport check_theorem2_condition(const ParamSeq& seq, const Rational& r, int k) {
    if (r.sign() <= 0) throw DomainError("theorem2 exponent r must be positive");
    if (k < 1 || k >= seq.depth()) throw DomainError("theorem2 condition needs 1 <= k < depth");
    const unsigned long p = to_exp(r.num(), "theorem2");
    const unsigned long q = to_exp(r.den(), "theorem2");

    VerificationReport rep;
    rep.claim = "TH2";
    rep.sequence = to_string(seq.kind);
    rep.k = k;
    rep.K = -1;
    // n_{k+1}^q >= b_{k,2}^p 2^{pk} m_k^q
    rep.lhs = Rational(pow(seq.pair(k + 1).n, q));
    rep.rhs = Rational(pow(column_mass(seq, k, 2), p) * pow2(p * static_cast<unsigned long>(k)) * pow(seq.pair(k).m, q));
    rep.relation = "lhs >= rhs";
    rep.holds = rep.lhs >= rep.rhs;
    rep.margin = rep.lhs - rep.rhs;
    rep.note = "n_{k+1} >= (b_{k,2})^r 2^{rk} m_k with r = " + r.to_string() + ", both sides raised to the power " +
               std::to_string(q);
    return rep;
}

Theorem3Condition check_theorem3_condition(const ParamSeq& seq, const Rational& r, int k) {
    if (r.sign() <= 0) throw DomainError("theorem3 exponent r must be positive");
    if (k < 1 || k >= seq.depth()) throw DomainError("theorem3 condition needs 1 <= k < depth");
    const unsigned long p = to_exp(r.num(), "theorem3");
    const unsigned long q = to_exp(r.den(), "theorem3");

    Theorem3Condition out;
    out.ratio.claim = "TH3R";
    out.ratio.sequence = to_string(seq.kind);
    out.ratio.k = k;
    out.ratio.K = -1;
    out.ratio.lhs = Rational(pow(column_mass(seq, k + 1, 2), q));
    out.ratio.rhs = Rational(pow(column_mass(seq, k, 2), p));
    out.ratio.relation = "lhs <= rhs";
    out.ratio.holds = out.ratio.lhs <= out.ratio.rhs;
    out.ratio.margin = out.ratio.rhs - out.ratio.lhs;
    out.ratio.note = "b_{k+1,2} <= (b_{k,2})^r with r = " + r.to_string();

    out.growth.claim = "TH3G";
    out.growth.sequence = to_string(seq.kind);
    out.growth.k = k;
    out.growth.K = -1;
    out.growth.lhs = Rational(seq.pair(k).m);
    out.growth.rhs = Rational(BigInteger(static_cast<long long>(k) * k) * seq.pair(k).n);
    out.growth.relation = "lhs >= rhs";
    out.growth.holds = out.growth.lhs >= out.growth.rhs;
    out.growth.margin = out.growth.lhs - out.growth.rhs;
    out.growth.note = "m_k >= k^2 n_k";
    return out;
}

std::vector<Theorem2ChainEntry> theorem2_chain(const ParamSeq& seq, int K, const Rational& r) {
    std::vector<Theorem2ChainEntry> out;
    const Rational s = Rational(1) / r;  // cover exponent 1/r
    const unsigned long p = to_exp(s.num(), "cover");
    const unsigned long q = to_exp(s.den(), "cover");
    for (int k = 1; k < seq.depth(); ++k) {
        Theorem2ChainEntry e;
        e.condition = check_theorem2_condition(seq, r, k);
        if (k + 2 <= K) {
            const CoverTerm t = make_term(seq, K, k, p, q);
            e.cover_le_pow2 = t.le_pow2;
            e.implication_ok = !e.condition.holds || t.le_pow2;
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<Theorem4ProofCheck> theorem4_proof_inequality(int kmax) {
    if (kmax < 1 || kmax > 12) throw DomainError("theorem4 proof inequality supported for 1 <= kmax <= 12");
    std::vector<Theorem4ProofCheck> out;
    const BigInteger nine(9);
    for (int k = 1; k <= kmax; ++k) {
        const unsigned long uk = static_cast<unsigned long>(k);
        const unsigned long four_k = to_exp(pow(BigInteger(4), uk), "theorem4");            // 4^k
        const unsigned long four_km1 = four_k / 4;                                          // 4^(k-1)
        const unsigned long upper_exp = (four_k - 1) / 3 + uk * (uk + 1) / 2;               // Lemma-10 exponent
        const BigInteger upper = pow2(uk) * pow(nine, upper_exp);                           // 2^k 9^(...)
        const BigInteger lhs = upper * upper * pow2(2 * uk) * pow(nine, four_km1 + uk);
        const BigInteger rhs = pow(nine, four_k);
        out.push_back({k, lhs < rhs});
    }
    return out;
}

int theorem4_proof_threshold(int kmax) {
    for (const auto& c : theorem4_proof_inequality(kmax)) {
        if (c.holds) return c.k;
    }
    return 0;
}

RecurrenceSeries recurrence_statistic(const IetMap& t, const Rational& x, std::uint64_t horizon, const Rational& beta) {
    if (horizon < 1) throw DomainError("recurrence horizon must be >= 1");
    if (beta.sign() < 0) throw DomainError("recurrence exponent beta must be >= 0");
    const unsigned long p = beta.is_zero() ? 0 : to_exp(beta.num(), "beta");
    const unsigned long q = beta.is_zero() ? 1 : to_exp(beta.den(), "beta");

    RecurrenceSeries series;
    series.x0 = x;
    series.horizon = horizon;
    series.beta = beta;

    Walker w(t, x.den());
    const Point origin = w.point(x);
    Point cur = origin;
    const BigInteger& W = w.denominator();
    const Rational wq(pow(W, q));

    BigInteger best_key;  // n^p * d_num^q of the current minimum
    bool have_best = false;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        w.step(cur);
        if (w.on_breakpoint(cur)) {
            ++series.breakpoint_hits;
            if (series.first_breakpoint_hit == 0) series.first_breakpoint_hit = n;
        }
        const BigInteger d_num = abs(cur.num - origin.num);
        const BigInteger key = pow(BigInteger(static_cast<long long>(n)), p) * pow(d_num, q);
        if (!have_best || key < best_key) {
            best_key = key;
            have_best = true;
            RecurrenceSample smp;
            smp.n = n;
            smp.distance = Rational(d_num, W);
            smp.stat_pow = Rational(key) / wq;
            smp.stat_approx = decimal_approx_root(smp.stat_pow, q);
            series.records.push_back(std::move(smp));
            if (d_num.is_zero()) break;  // exact return: the statistic is 0 from here on
        }
    }
    series.minimum = series.records.back();
    return series;
}

VerificationReport separation_check(const ParamSeq& seq, int K, int k, std::uint64_t step_budget) {
    if (k < 0 || k + 2 > K) throw DomainError("separation_check needs 0 <= k <= K-2");
    VerificationReport rep;
    rep.claim = "SEP";
    rep.sequence = to_string(seq.kind);
    rep.k = k;
    rep.K = K;
    rep.relation = "lhs >= rhs";

    const BigInteger b2 = column_mass(seq, k, 2);
    if (k == 0) {
        rep.holds = true;
        rep.applicable = true;
        rep.lhs = Rational(0);
        rep.rhs = Rational(0);
        rep.note = "vacuous: b_{0,2} = 1 leaves no 1 <= s < b_{k,2}";
        return rep;
    }
    if (BigInteger(static_cast<long long>(step_budget)) < b2) {
        throw BudgetError("separation_check needs b_{k,2} = " + b2.to_string() + " steps, budget is " +
                              std::to_string(step_budget),
                          0);
    }

    const std::vector<LandingLevel> chain = landing_chain(seq, K, k, InduceOptions{step_budget, 16});
    const Rational mid = (chain.back().cell_lo[1] + chain.back().cell_hi[1]) / Rational(2);

    const Vec4Z tails = mat_vec(tail_matrix(seq, k, K), Vec4Z::basis(3));
    const BigInteger total = l1_norm(mat_vec(product_matrix(seq, K), Vec4Z::basis(3)));
    Rational min_other(tails[0], total);
    min_other = std::min(min_other, Rational(tails[2], total));
    min_other = std::min(min_other, Rational(tails[3], total));
    rep.rhs = min_other;

    const IetMap t = build_keane_iet(seq, K);
    Walker w(t, total * BigInteger(2));
    const Point origin = w.point(mid);
    Point cur = origin;
    const BigInteger bound_num = w.point(min_other).num;  // min_other scaled to the walker lattice

    const std::uint64_t steps = b2.to_uint64() - 1;
    BigInteger min_dist;
    bool have_min = false;
    rep.holds = true;
    for (std::uint64_t s = 1; s <= steps; ++s) {
        w.step(cur);
        const BigInteger d = abs(cur.num - origin.num);
        if (!have_min || d < min_dist) {
            min_dist = d;
            have_min = true;
        }
        if (d < bound_num) {
            rep.holds = false;
            rep.note = "violated at s = " + std::to_string(s);
            break;
        }
    }
    rep.lhs = have_min ? Rational(min_dist, w.denominator()) : Rational(0);
    rep.margin = rep.lhs - rep.rhs;
    return rep;
}

}  // namespace keanelab
