#include <doctest.h>

#include <algorithm>

#include "keanelab/keane.hpp"
#include "oracles.hpp"

using namespace keanelab;

namespace {

Vec4Z vz(long long a, long long b, long long c, long long d) {
    return Vec4Z(BigInteger(a), BigInteger(b), BigInteger(c), BigInteger(d));
}

Rational rat(const char* s) { return Rational::parse(s); }

}  // namespace

TEST_CASE("keane_matrix rows") {
    const Mat4Z a11 = keane_matrix(BigInteger(1), BigInteger(1));
    const long long rows11[4][4] = {{0, 0, 1, 1}, {0, 1, 0, 0}, {1, 1, 0, 1}, {1, 1, 1, 1}};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) CHECK(a11(i, j) == BigInteger(rows11[i][j]));
    }
    const Mat4Z a = keane_matrix(BigInteger(33), BigInteger(10));
    const long long rows[4][4] = {{0, 0, 1, 1}, {32, 33, 0, 0}, {10, 10, 9, 10}, {1, 1, 1, 1}};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) CHECK(a(i, j) == BigInteger(rows[i][j]));
    }
    CHECK_THROWS_AS(keane_matrix(BigInteger(0), BigInteger(5)), DomainError);
    CHECK_THROWS_AS(keane_matrix(BigInteger(3), BigInteger(-1)), DomainError);
}

TEST_CASE("generators") {
    const ParamSeq m3 = generate(SequenceKind::Minimal, 3);
    REQUIRE(m3.depth() == 3);
    CHECK(m3.pair(1).m == BigInteger(33));
    CHECK(m3.pair(1).n == BigInteger(10));
    CHECK(m3.pair(2).m == BigInteger(198));
    CHECK(m3.pair(2).n == BigInteger(65));
    CHECK(m3.pair(3).m == BigInteger(1188));
    CHECK(m3.pair(3).n == BigInteger(395));

    const ParamSeq t4 = generate(SequenceKind::Theorem4, 2);
    CHECK(t4.pair(1).m == BigInteger(81));
    CHECK(t4.pair(1).n == BigInteger(9));
    CHECK(t4.pair(2).m == BigInteger(531441));
    CHECK(t4.pair(2).n == BigInteger(6561));

    const ParamSeq t3 = generate(SequenceKind::Theorem3, 6, Rational(2));
    for (int k = 1; k <= 6; ++k) {
        CHECK(t3.pair(k).m >= BigInteger(static_cast<long long>(k) * k) * t3.pair(k).n);
    }
    CHECK(t3.pair(2).m == BigInteger(260));  // k^2 n_k beats 3(n_k+1) from k=2 on

    CHECK_THROWS_AS(generate(SequenceKind::Minimal, 0), DomainError);
}

TEST_CASE("generate respects the bit budget") {
    try {
        generate(SequenceKind::Theorem4, 12);
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(e.steps_done() == 11);  // first offending k is named
    }
}

TEST_CASE("corollary1 generator satisfies Theorem 1 at every k") {
    const ParamSeq c1 = generate(SequenceKind::Corollary1, 5);
    const ValidationReport rep = validate_sequence(c1);
    CHECK(rep.fully_valid());
    CHECK(c1.pair(2).n == BigInteger(2904));  // max(2*33-1, (44*2)^1 * 33)
    CHECK(c1.pair(2).m == BigInteger(8715));
}

TEST_CASE("validate_sequence") {
    const ValidationReport good = validate_sequence(generate(SequenceKind::Minimal, 3));
    CHECK(good.fully_valid());
    // the minimal sequence binds both sides at every applicable k
    for (const auto& c : good.checks) {
        CHECK(c.lower_binding);
        if (c.upper_ok) CHECK(c.upper_binding);
    }

    const ValidationReport t4 = validate_sequence(generate(SequenceKind::Theorem4, 3));
    CHECK_FALSE(t4.n1_ok);  // n_1 = 9 contradicts n_1 >= 10; reported, not resolved
    CHECK(t4.ratios_ok());
    CHECK_FALSE(t4.fully_valid());

    ParamSeq bad;
    bad.pairs.push_back({BigInteger(10), BigInteger(10)});
    const ValidationReport b = validate_sequence(bad);
    CHECK(b.n1_ok);
    CHECK_FALSE(b.checks[0].lower_ok);  // 3*11 = 33 > 10
}

TEST_CASE("product_matrix") {
    const ParamSeq seq = generate(SequenceKind::Minimal, 3);
    CHECK(product_matrix(seq, 0) == Mat4Z::identity());
    CHECK(product_matrix(seq, 1) == keane_matrix(BigInteger(33), BigInteger(10)));
    CHECK(product_matrix(seq, 2).col(1) == vz(66, 6534, 2575, 264));
    CHECK_THROWS_AS(product_matrix(seq, 4), DomainError);
    CHECK_THROWS_AS(product_matrix(seq, -1), DomainError);
}

TEST_CASE("column_mass") {
    const ParamSeq seq = generate(SequenceKind::Minimal, 3);
    CHECK(column_mass(seq, 1, 1) == BigInteger(43));
    CHECK(column_mass(seq, 1, 2) == BigInteger(44));
    CHECK(column_mass(seq, 1, 3) == BigInteger(11));
    CHECK(column_mass(seq, 1, 4) == BigInteger(12));
    CHECK(column_mass(seq, 2, 2) == BigInteger(9439));
    for (int i = 1; i <= 4; ++i) CHECK(column_mass(seq, 0, i) == BigInteger(1));
    CHECK_THROWS_AS(column_mass(seq, 1, 5), DomainError);
}

TEST_CASE("mass_bounds sandwich") {
    const ParamSeq seq = generate(SequenceKind::Minimal, 4);
    const auto [lo2, hi2] = mass_bounds(seq, 2);
    CHECK(lo2 == BigInteger(6534));
    CHECK(hi2 == BigInteger(11616));
    CHECK(lo2 <= column_mass(seq, 2, 2));
    CHECK(column_mass(seq, 2, 2) <= hi2);

    const auto [lo1, hi1] = mass_bounds(seq, 1);
    CHECK(hi1 == column_mass(seq, 1, 2));  // upper bound attained at k=1

    const ParamSeq t4 = generate(SequenceKind::Theorem4, 2);
    const auto [tlo, thi] = mass_bounds(t4, 2);
    CHECK(tlo == pow(BigInteger(9), 8));
    CHECK(thi == BigInteger(91) * (pow(BigInteger(9), 6) + pow(BigInteger(9), 4) + BigInteger(1)));
    const BigInteger b22 = column_mass(t4, 2, 2);
    CHECK(b22 == BigInteger(48426752));
    CHECK(tlo <= b22);
    CHECK(b22 <= thi);
}

TEST_CASE("column dominance invariant") {
    for (const ParamSeq& seq : {generate(SequenceKind::Minimal, 4), generate(SequenceKind::Theorem4, 3),
                                generate(SequenceKind::Theorem3, 4, Rational(2))}) {
        for (int k = 0; k <= seq.depth(); ++k) {
            const BigInteger b2 = column_mass(seq, k, 2);
            for (int i : {1, 3, 4}) CHECK(b2 >= column_mass(seq, k, i));
        }
    }
}

TEST_CASE("length_vector") {
    const ParamSeq seq = generate(SequenceKind::Minimal, 3);
    const Vec4Q lens = length_vector(seq, 2);
    CHECK(lens[0] == rat("65/759"));
    CHECK(lens[1] == rat("32/759"));
    CHECK(lens[2] == rat("596/759"));
    CHECK(lens[3] == rat("66/759"));
    CHECK(l1_norm(lens) == Rational(1));
    CHECK_THROWS_AS(length_vector(seq, 1), DomainError);  // second entry would vanish
    CHECK_THROWS_AS(length_vector(seq, 4), DomainError);

    // strictly positive entries for K >= 2
    for (int K = 2; K <= 3; ++K) {
        const Vec4Q v = length_vector(seq, K);
        for (int i = 0; i < 4; ++i) CHECK(v[i].sign() > 0);
    }
}

TEST_CASE("level_weights") {
    const ParamSeq seq = generate(SequenceKind::Minimal, 3);
    const Vec4Q w2 = level_weights(seq, 1, 3, 2);
    CHECK(w2[0] == rat("396/339769"));
    CHECK(w2[1] == rat("235224/339769"));
    CHECK(w2[2] == rat("102565/339769"));
    CHECK(w2[3] == rat("1584/339769"));

    const Vec4Q w3 = level_weights(seq, 1, 3, 3);
    CHECK(w3[1] == rat("197/26334"));

    // single-factor tail: normalize(A_{m_K,n_K} e_3) = (1, 0, n_K - 1, 1) / (n_K + 1)
    const Vec4Q tailw = level_weights(seq, 2, 3, 3);
    CHECK(tailw == Vec4Q(rat("1/396"), Rational(0), rat("394/396"), rat("1/396")));

    // consistency with the length vector at k = 0
    for (int K = 2; K <= 3; ++K) CHECK(level_weights(seq, 0, K, 3) == length_vector(seq, K));

    CHECK_THROWS_AS(level_weights(seq, 3, 3, 3), DomainError);
    CHECK_THROWS_AS(level_weights(seq, 0, 2, 5), DomainError);
}

TEST_CASE("level_weights truncation distances shrink as K grows") {
    const ParamSeq seq = generate(SequenceKind::Minimal, 7);
    for (int basis : {2, 3}) {
        Rational prev_dist(-1);
        Vec4Q prev = level_weights(seq, 1, 3, basis);
        for (int K = 4; K <= 7; ++K) {
            const Vec4Q cur = level_weights(seq, 1, K, basis);
            Rational dist(0);
            for (int i = 0; i < 4; ++i) dist = std::max(dist, abs(cur[i] - prev[i]));
            if (prev_dist.sign() >= 0) CHECK(dist < prev_dist);
            prev_dist = dist;
            prev = cur;
        }
    }
}

TEST_CASE("level_data bundles masses and weights") {
    const ParamSeq seq = generate(SequenceKind::Minimal, 3);
    const LevelData d = level_data(seq, 1, 3);
    CHECK(d.column_masses[1] == BigInteger(44));
    CHECK(l1_norm(d.lambda2_weights) == Rational(1));
    CHECK(l1_norm(d.lambda3_weights) == Rational(1));
}

TEST_CASE("paramseq JSON uses decimal strings") {
    const ParamSeq seq = generate(SequenceKind::Theorem4, 2);
    const std::string js = seq.to_json_string();
    CHECK(js.find("\"531441\"") != std::string::npos);
    CHECK(js.find("\"theorem4\"") != std::string::npos);
}
