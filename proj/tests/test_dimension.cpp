#include <doctest.h>

#include "keanelab/dimension.hpp"
#include "oracles.hpp"

using namespace keanelab;

namespace {

Rational rat(const char* s) { return Rational::parse(s); }

const ParamSeq& minimal6() {
    static const ParamSeq seq = generate(SequenceKind::Minimal, 6);
    return seq;
}

const ParamSeq& corollary5() {
    static const ParamSeq seq = generate(SequenceKind::Corollary1, 5);
    return seq;
}

}  // namespace

TEST_CASE("cover terms at s = 1 are orbit measures, all at most 1") {
    const CoverSumSeries series = cover_terms(minimal6(), 6, Rational(1), 1);
    REQUIRE(series.terms.size() == 4);  // k = 1..4
    for (const auto& t : series.terms) {
        CHECK(t.le_one);
        CHECK(t.term_pow.sign() > 0);
        CHECK(t.term_pow == Rational(t.b_k2) * t.lambda3_I2k);
    }
    // minimal growth: terms do not halve level to level even at s = 1
    CHECK_FALSE(series.decay_flag);
    CHECK(series.partial_sum_approx.size() == series.terms.size());
}

TEST_CASE("cover precondition: s = 0 and bad L rejected") {
    CHECK_THROWS_AS(cover_terms(minimal6(), 6, Rational(0), 1), DomainError);
    CHECK_THROWS_AS(cover_terms(minimal6(), 6, rat("-1/2"), 1), DomainError);
    CHECK_THROWS_AS(cover_terms(minimal6(), 6, Rational(1), 5), DomainError);
}

TEST_CASE("corollary1 chain: condition holds from k = 2 and forces the cover bound") {
    const std::vector<Theorem2ChainEntry> chain = theorem2_chain(corollary5(), 5, Rational(2));
    REQUIRE(chain.size() == 4);  // k = 1..4
    CHECK_FALSE(chain[0].condition.holds);
    for (int k = 2; k <= 4; ++k) CHECK(chain[static_cast<std::size_t>(k - 1)].condition.holds);
    for (const auto& e : chain) {
        if (e.implication_ok) CHECK(*e.implication_ok);
        if (e.condition.holds && e.cover_le_pow2) CHECK(*e.cover_le_pow2);
    }
    // cover terms computable at k = 2, 3 for K = 5
    CHECK(chain[1].cover_le_pow2.has_value());
    CHECK(chain[2].cover_le_pow2.has_value());
    CHECK_FALSE(chain[3].cover_le_pow2.has_value());
}

TEST_CASE("theorem2 condition spot value on the theorem4 sequence") {
    const ParamSeq t4 = generate(SequenceKind::Theorem4, 3);
    const VerificationReport r = check_theorem2_condition(t4, Rational(2), 1);
    CHECK_FALSE(r.holds);
    CHECK(r.lhs == Rational(6561));                      // n_2
    CHECK(r.rhs == Rational(91LL * 91 * 4 * 81));        // b_{1,2}^2 2^2 m_1 = 2683044
    CHECK(r.rhs == Rational(2683044));
    CHECK_THROWS_AS(check_theorem2_condition(t4, Rational(2), 3), DomainError);  // needs k < depth
}

TEST_CASE("theorem3 conditions") {
    const ParamSeq t4 = generate(SequenceKind::Theorem4, 4);
    for (int k = 1; k <= 3; ++k) {
        const Theorem3Condition c = check_theorem3_condition(t4, rat("9/2"), k);
        CHECK(c.ratio.holds);   // b_{k+1,2}^2 <= b_{k,2}^9
        CHECK(c.growth.holds);  // m_k / n_k = 9^k >= k^2
    }
    const Theorem3Condition m = check_theorem3_condition(minimal6(), Rational(2), 2);
    CHECK(m.ratio.holds);
    CHECK(m.ratio.lhs == Rational(11514107));   // b_{3,2}
    CHECK(m.ratio.rhs == Rational(89094721));   // b_{2,2}^2 = 9439^2
}

TEST_CASE("theorem4 proof inequality threshold sits at k = 5") {
    // frozen from the exponent-count oracle: the inequality compares
    // 2^{4k} 9^{2(4^k-1)/3 + k(k+1) + 4^{k-1} + k} against 9^{4^k}
    const auto checks = theorem4_proof_inequality(8);
    REQUIRE(checks.size() == 8);
    for (const auto& c : checks) CHECK(c.holds == (c.k >= 5));
    CHECK(theorem4_proof_threshold(8) == 5);
    CHECK_THROWS_AS(theorem4_proof_inequality(40), DomainError);
}

TEST_CASE("critical exponent: minimal shows dimension-1 behaviour, theorem4 decays") {
    const CriticalExponent none = critical_exponent(minimal6(), 6, rat("1/4"));
    CHECK(none.flag == "none_decay");
    CHECK(none.lo == Rational(1));
    CHECK(none.hi == Rational(1));

    const ParamSeq t4 = generate(SequenceKind::Theorem4, 5);
    const CriticalExponent ce = critical_exponent(t4, 5, rat("1/64"));
    CHECK(ce.flag == "bracketed");
    CHECK(ce.lo == rat("7/64"));
    CHECK(ce.hi == rat("1/8"));  // far below 1 already at finite depth

    // tolerance 1/2 needs at most two decay evaluations
    const CriticalExponent coarse = critical_exponent(t4, 5, rat("1/2"));
    CHECK(coarse.evaluations <= 2);

    CHECK_THROWS_AS(critical_exponent(minimal6(), 3, rat("1/4")), DomainError);
}

TEST_CASE("recurrence statistic basics") {
    const IetMap t = IetMap::build(Vec4Q(rat("1/10"), rat("1/5"), rat("3/10"), rat("2/5")), Permutation4(4, 2, 1, 3));
    const RecurrenceSeries one = recurrence_statistic(t, rat("1/20"), 1, Rational(0));
    REQUIRE(one.records.size() == 1);
    CHECK(one.minimum.n == 1);
    CHECK(one.minimum.distance == abs(t.apply(rat("1/20")) - rat("1/20")));

    const IetMap id = IetMap::build(Vec4Q(rat("1/10"), rat("1/5"), rat("3/10"), rat("2/5")), Permutation4());
    const RecurrenceSeries fixed = recurrence_statistic(id, rat("1/7"), 10, Rational(2));
    CHECK(fixed.minimum.n == 1);
    CHECK(fixed.minimum.distance == Rational(0));
    CHECK(fixed.minimum.stat_pow == Rational(0));

    CHECK_THROWS_AS(recurrence_statistic(t, rat("1/20"), 0, Rational(0)), DomainError);
}

TEST_CASE("recurrence records are the running minima (beta = 0 non-increasing in N)") {
    const IetMap t = build_keane_iet(minimal6(), 4);
    const RecurrenceSeries series = recurrence_statistic(t, rat("1/97"), 2000, Rational(0));
    for (std::size_t i = 1; i < series.records.size(); ++i) {
        CHECK(series.records[i].stat_pow < series.records[i - 1].stat_pow);
        CHECK(series.records[i].n > series.records[i - 1].n);
    }
    CHECK(series.minimum.stat_pow == series.records.back().stat_pow);
}

TEST_CASE("fractional beta statistics compare through q-th powers") {
    const IetMap t = build_keane_iet(minimal6(), 4);
    const RecurrenceSeries series = recurrence_statistic(t, rat("1/97"), 500, rat("1/2"));
    REQUIRE(!series.records.empty());
    for (std::size_t i = 0; i < series.records.size(); ++i) {
        const auto& smp = series.records[i];
        // stat_pow is (n^(1/2) d)^2 = n d^2 exactly
        CHECK(smp.stat_pow == Rational(BigInteger(static_cast<long long>(smp.n))) * smp.distance * smp.distance);
        if (i > 0) CHECK(smp.stat_pow < series.records[i - 1].stat_pow);
    }
}

TEST_CASE("orbit landing exactly on a breakpoint is flagged") {
    const IetMap t = IetMap::build(Vec4Q(rat("1/10"), rat("1/5"), rat("3/10"), rat("2/5")), Permutation4(4, 2, 1, 3));
    // T(1/10) = 1/10 + 1/5 = 3/10, the second breakpoint
    const RecurrenceSeries series = recurrence_statistic(t, rat("1/10"), 1, Rational(0));
    CHECK(series.breakpoint_hits == 1);
    CHECK(series.first_breakpoint_hit == 1);
}

TEST_CASE("separation check") {
    const VerificationReport vac = separation_check(minimal6(), 4, 0);
    CHECK(vac.holds);

    const VerificationReport s1 = separation_check(minimal6(), 4, 1);
    CHECK(s1.holds);
    CHECK(s1.rhs == rat("36097/28687752"));
    CHECK(s1.lhs >= s1.rhs);

    const VerificationReport s2 = separation_check(minimal6(), 4, 2);
    CHECK(s2.holds);
    CHECK(s2.rhs == rat("2375/745881552"));  // lambda3(I_1^(2)) at K = 4

    CHECK_THROWS_AS(separation_check(minimal6(), 4, 2, 100), BudgetError);
    CHECK_THROWS_AS(separation_check(minimal6(), 4, 3), DomainError);
}

TEST_CASE("separation holds at level 3 (11.5M exact orbit steps)") {
    const VerificationReport s3 = separation_check(minimal6(), 5, 3);
    CHECK(s3.holds);
    CHECK(column_mass(minimal6(), 3, 2) == BigInteger(11514107));
}

TEST_CASE("separation implies the beta = 0 recurrence bound (cross-check)") {
    const int k = 2, K = 4;
    const VerificationReport sep = separation_check(minimal6(), K, k);
    REQUIRE(sep.holds);
    const std::vector<LandingLevel> chain = landing_chain(minimal6(), K, k);
    const Rational mid = (chain.back().cell_lo[1] + chain.back().cell_hi[1]) / Rational(2);
    const IetMap t = build_keane_iet(minimal6(), K);
    const std::uint64_t horizon = column_mass(minimal6(), k, 2).to_uint64() - 1;
    const RecurrenceSeries series = recurrence_statistic(t, mid, horizon, Rational(0));
    CHECK(series.minimum.distance >= sep.rhs);
    CHECK(series.minimum.distance == sep.lhs);
}
