#include "keanelab/keane.hpp"

#include <algorithm>

#include <json.hpp>

namespace keanelab {

std::string to_string(SequenceKind k) {
    switch (k) {
        case SequenceKind::Minimal: return "minimal";
        case SequenceKind::Theorem4: return "theorem4";
        case SequenceKind::Theorem3: return "theorem3";
        case SequenceKind::Corollary1: return "corollary1";
        case SequenceKind::Explicit: return "explicit";
    }
    return "explicit";
}

SequenceKind sequence_kind_from_string(const std::string& s) {
    if (s == "minimal") return SequenceKind::Minimal;
    if (s == "theorem4") return SequenceKind::Theorem4;
    if (s == "theorem3") return SequenceKind::Theorem3;
    if (s == "corollary1") return SequenceKind::Corollary1;
    if (s == "explicit") return SequenceKind::Explicit;
    throw DomainError("unknown sequence kind: \"" + s + "\"");
}

const ParamPair& ParamSeq::pair(int k) const {
    if (k < 1 || k > depth()) {
        throw DomainError("level k=" + std::to_string(k) + " out of range 1.." + std::to_string(depth()));
    }
    return pairs[static_cast<std::size_t>(k - 1)];
}

std::string ParamSeq::to_json_string() const {
    nlohmann::json j;
    j["kind"] = to_string(kind);
    j["depth"] = depth();
    j["pairs"] = nlohmann::json::array();
    for (const auto& p : pairs) j["pairs"].push_back({p.m.to_string(), p.n.to_string()});
    if (theorem3_r) j["r"] = theorem3_r->to_string();
    return j.dump(2) + "\n";
}

bool ValidationReport::ratios_ok() const {
    for (const auto& c : checks) {
        if (!c.lower_ok || (c.upper_ok && !*c.upper_ok)) return false;
    }
    return true;
}

Mat4Z keane_matrix(const BigInteger& m, const BigInteger& n) {
    if (m < BigInteger(1) || n < BigInteger(1)) {
        throw DomainError("keane_matrix needs m, n >= 1, got m=" + m.to_string() + " n=" + n.to_string());
    }
    const BigInteger one(1), zero(0);
    Mat4Z a;
    // rows: (0 0 1 1), (m-1 m 0 0), (n n n-1 n), (1 1 1 1)
    a(0, 0) = zero;    a(0, 1) = zero;  a(0, 2) = one;              a(0, 3) = one;
    a(1, 0) = m - one; a(1, 1) = m;     a(1, 2) = zero;             a(1, 3) = zero;
    a(2, 0) = n;       a(2, 1) = n;     a(2, 2) = n - one;          a(2, 3) = n;
    a(3, 0) = one;     a(3, 1) = one;   a(3, 2) = one;              a(3, 3) = one;
    return a;
}

ValidationReport validate_sequence(const ParamSeq& seq) {
    ValidationReport rep;
    if (seq.depth() == 0) return rep;
    rep.n1_ok = seq.pair(1).n >= BigInteger(10);
    const BigInteger three(3), two(2), one(1);
    for (int k = 1; k <= seq.depth(); ++k) {
        PairCheck c;
        c.k = k;
        const BigInteger lower = three * (seq.pair(k).n + one);
        c.lower_ok = lower <= seq.pair(k).m;
        c.lower_binding = lower == seq.pair(k).m;
        if (k < seq.depth()) {
            // m_k <= (n_{k+1} + 1)/2 compared without rounding
            const BigInteger lhs = two * seq.pair(k).m;
            const BigInteger rhs = seq.pair(k + 1).n + one;
            c.upper_ok = lhs <= rhs;
            c.upper_binding = lhs == rhs;
        }
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

Mat4Z product_matrix(const ParamSeq& seq, int k) {
    if (k < 0 || k > seq.depth()) {
        throw DomainError("product level k=" + std::to_string(k) + " out of range 0.." + std::to_string(seq.depth()));
    }
    Mat4Z b = Mat4Z::identity();
    for (int j = 1; j <= k; ++j) b = mat_mul(b, keane_matrix(seq.pair(j).m, seq.pair(j).n));
    return b;
}

Mat4Z tail_matrix(const ParamSeq& seq, int k, int K) {
    if (k < 0 || K < k || K > seq.depth()) {
        throw DomainError("tail range k=" + std::to_string(k) + " K=" + std::to_string(K) + " invalid for depth " +
                          std::to_string(seq.depth()));
    }
    Mat4Z m = Mat4Z::identity();
    for (int j = k + 1; j <= K; ++j) m = mat_mul(m, keane_matrix(seq.pair(j).m, seq.pair(j).n));
    return m;
}

BigInteger column_mass(const ParamSeq& seq, int k, int i) {
    if (i < 1 || i > 4) throw DomainError("basis index i=" + std::to_string(i) + " out of range 1..4");
    return l1_norm(product_matrix(seq, k).col(i - 1));
}

std::pair<BigInteger, BigInteger> mass_bounds(const ParamSeq& seq, int k) {
    if (k < 1 || k > seq.depth()) {
        throw DomainError("mass_bounds level k=" + std::to_string(k) + " out of range 1.." + std::to_string(seq.depth()));
    }
    BigInteger lower(1), upper(1);
    for (int j = 1; j <= k; ++j) {
        lower *= seq.pair(j).m;
        upper *= seq.pair(j).m + seq.pair(j).n + BigInteger(1);
    }
    return {lower, upper};
}

Vec4Q length_vector(const ParamSeq& seq, int K) {
    if (K < 2) throw DomainError("length_vector needs K >= 2 (K=1 leaves the second interval empty)");
    if (K > seq.depth()) {
        throw DomainError("truncation depth K=" + std::to_string(K) + " exceeds sequence depth " + std::to_string(seq.depth()));
    }
    return normalize(to_rational(mat_vec(product_matrix(seq, K), Vec4Z::basis(3))));
}

Vec4Q level_weights(const ParamSeq& seq, int k, int K, int basis) {
    if (basis != 2 && basis != 3) throw DomainError("basis must be 2 or 3");
    if (k < 0 || k >= K) throw DomainError("level_weights needs 0 <= k < K");
    return normalize(to_rational(mat_vec(tail_matrix(seq, k, K), Vec4Z::basis(basis))));
}

LevelData level_data(const ParamSeq& seq, int k, int K) {
    LevelData d;
    d.k = k;
    d.K = K;
    const Mat4Z b = product_matrix(seq, k);
    for (int i = 0; i < 4; ++i) d.column_masses[static_cast<std::size_t>(i)] = l1_norm(b.col(i));
    d.lambda3_weights = level_weights(seq, k, K, 3);
    d.lambda2_weights = level_weights(seq, k, K, 2);
    return d;
}

IetMap build_keane_iet(const ParamSeq& seq, int K) {
    return IetMap::build(length_vector(seq, K), keane_permutation());
}

namespace {

void check_bits(const BigInteger& v, int k, const GenerateOptions& opts) {
    if (v.bit_length() > opts.bit_budget) {
        throw BudgetError("generated parameter at k=" + std::to_string(k) + " exceeds bit budget (" +
                              std::to_string(v.bit_length()) + " > " + std::to_string(opts.bit_budget) + " bits)",
                          static_cast<std::uint64_t>(k));
    }
}

}  // namespace

ParamSeq generate(SequenceKind kind, int depth, std::optional<Rational> r, const GenerateOptions& opts) {
    if (depth < 1) throw DomainError("generate needs depth >= 1");
    ParamSeq seq;
    seq.kind = kind;
    const BigInteger one(1), two(2), three(3);
    switch (kind) {
        case SequenceKind::Minimal: {
            // tightest sequence meeting Theorem 1: binding on both sides
            BigInteger n(10);
            for (int k = 1; k <= depth; ++k) {
                BigInteger m = three * (n + one);
                check_bits(m, k, opts);
                seq.pairs.push_back({m, n});
                n = two * m - one;
            }
            break;
        }
        case SequenceKind::Theorem4: {
            // n_k = 9^(4^(k-1)), m_k = 9^(4^(k-1)+k)
            for (int k = 1; k <= depth; ++k) {
                // bits(9^x) ~ 3.17 x; refuse before materializing anything huge
                const BigInteger exp4 = pow(BigInteger(4), static_cast<unsigned long>(k - 1));
                if ((exp4 + BigInteger(k)) * BigInteger(317) >
                    BigInteger(100) * BigInteger(static_cast<long long>(opts.bit_budget))) {
                    throw BudgetError("generated parameter at k=" + std::to_string(k) + " exceeds bit budget",
                                      static_cast<std::uint64_t>(k));
                }
                const unsigned long e = static_cast<unsigned long>(exp4.to_uint64());
                BigInteger n = pow(BigInteger(9), e);
                BigInteger m = pow(BigInteger(9), e + static_cast<unsigned long>(k));
                check_bits(m, k, opts);
                seq.pairs.push_back({std::move(m), std::move(n)});
            }
            break;
        }
        case SequenceKind::Theorem3: {
            BigInteger n(10);
            for (int k = 1; k <= depth; ++k) {
                const BigInteger kk(static_cast<long long>(k) * k);
                BigInteger m = std::max(three * (n + one), kk * n);
                check_bits(m, k, opts);
                seq.pairs.push_back({m, n});
                n = two * m - one;
            }
            seq.theorem3_r = r;
            break;
        }
        case SequenceKind::Corollary1: {
            // m_k = 3(n_k+1); n_{k+1} = max(2 m_k - 1, (b_{k,2} 2^k)^k m_k) so the
            // Theorem-2 hypothesis holds for every r once k >= r, without breaking
            // Theorem 1's upper inequality at small k.
            BigInteger n(10);
            for (int k = 1; k <= depth; ++k) {
                BigInteger m = three * (n + one);
                check_bits(m, k, opts);
                seq.pairs.push_back({m, n});
                const BigInteger b = column_mass(seq, k, 2);
                n = std::max(two * m - one, pow(b * pow2(static_cast<unsigned long>(k)), static_cast<unsigned long>(k)) * m);
                check_bits(n, k, opts);
            }
            break;
        }
        case SequenceKind::Explicit:
            throw DomainError("generate: explicit sequences are provided, not generated");
    }
    return seq;
}

}  // namespace keanelab
