#include "keanelab/analysis.hpp"

#include <algorithm>

namespace keanelab {

std::string to_string(Claim c) {
    switch (c) {
        case Claim::L1: return "L1";
        case Claim::L2: return "L2";
        case Claim::L5: return "L5";
        case Claim::L7: return "L7";
        case Claim::L7S: return "L7S";
        case Claim::DOM: return "DOM";
        case Claim::MASS: return "MASS";
    }
    return "?";
}

Claim claim_from_string(const std::string& s) {
    if (s == "L1") return Claim::L1;
    if (s == "L2") return Claim::L2;
    if (s == "L5") return Claim::L5;
    if (s == "L7") return Claim::L7;
    if (s == "L7S") return Claim::L7S;
    if (s == "DOM") return Claim::DOM;
    if (s == "MASS") return Claim::MASS;
    throw DomainError("unknown claim: \"" + s + "\"");
}

namespace {

void require_level_window(Claim c, const ParamSeq& seq, int k, int K) {
    const int kmin = (c == Claim::L1) ? 1 : 0;
    if (k < kmin) throw DomainError(to_string(c) + " needs k >= " + std::to_string(kmin));
    if (c == Claim::DOM) {
        if (k > seq.depth()) throw DomainError("DOM needs k <= depth");
        return;
    }
    if (k + 2 > K) throw DomainError(to_string(c) + " needs k+2 <= K for positive sub-lengths");
    if (K > seq.depth()) throw DomainError("truncation depth K exceeds sequence depth");
}

VerificationReport base_report(Claim c, const ParamSeq& seq, int k, int K) {
    VerificationReport r;
    r.claim = to_string(c);
    r.sequence = to_string(seq.kind);
    r.k = k;
    r.K = K;
    return r;
}

bool theorem3_growth_holds(const ParamSeq& seq) {
    for (int j = 1; j <= seq.depth(); ++j) {
        if (seq.pair(j).m < BigInteger(static_cast<long long>(j) * j) * seq.pair(j).n) return false;
    }
    return true;
}

}  // namespace

VerificationReport verify_claim(Claim c, const ParamSeq& seq, int k, int K) {
    require_level_window(c, seq, k, K);
    VerificationReport r = base_report(c, seq, k, K);
    switch (c) {
        case Claim::L1: {
            const Vec4Q w3 = level_weights(seq, k, K, 3);
            r.lhs = w3[1];
            r.rhs = Rational(BigInteger(2) * seq.pair(k).m,
                             (seq.pair(k + 1).n + BigInteger(1)) * (seq.pair(k).n + BigInteger(1)));
            r.relation = "lhs <= rhs";
            r.holds = r.lhs <= r.rhs;
            r.margin = r.rhs - r.lhs;
            break;
        }
        case Claim::L2: {
            r.lhs = level_weights(seq, k, K, 2)[1];
            r.rhs = Rational(1, 3);
            r.relation = "lhs >= rhs";
            r.holds = r.lhs >= r.rhs;
            r.margin = r.lhs - r.rhs;
            break;
        }
        case Claim::L5: {
            r.applicable = theorem3_growth_holds(seq);
            r.lhs = level_weights(seq, k, K, 2)[1];
            r.rhs = Rational(static_cast<long long>(k) * k, static_cast<long long>(k) * k + 4);
            r.relation = "lhs > rhs";
            r.holds = r.lhs > r.rhs;
            r.margin = r.lhs - r.rhs;
            if (!r.applicable) r.note = "sequence does not satisfy m_k >= k^2 n_k at every k; claim not applicable";
            break;
        }
        case Claim::L7: {
            const Vec4Z t_k = mat_vec(tail_matrix(seq, k, K), Vec4Z::basis(3));
            const Vec4Z t_k1 = mat_vec(tail_matrix(seq, k + 1, K), Vec4Z::basis(3));
            const BigInteger total = l1_norm(mat_vec(product_matrix(seq, K), Vec4Z::basis(3)));
            r.lhs = Rational(t_k[0], total);
            r.rhs = Rational(t_k1[2], total);
            r.relation = "lhs >= rhs";
            r.holds = r.lhs >= r.rhs;
            r.margin = r.lhs - r.rhs;
            r.note = "literal simplification of the displayed inequality; see claim L7S for the proof-side scale bound";
            break;
        }
        case Claim::L7S: {
            const Vec4Z t_k = mat_vec(tail_matrix(seq, k, K), Vec4Z::basis(3));
            const BigInteger total = l1_norm(mat_vec(product_matrix(seq, K), Vec4Z::basis(3)));
            r.lhs = Rational(l1_norm(t_k), total);
            r.rhs = Rational(BigInteger(1), column_mass(seq, k, 2));
            r.relation = "lhs >= rhs";
            r.holds = r.lhs >= r.rhs;
            r.margin = r.lhs - r.rhs;
            break;
        }
        case Claim::DOM: {
            const Mat4Z b = product_matrix(seq, k);
            const BigInteger b2 = l1_norm(b.col(1));
            BigInteger other = l1_norm(b.col(0));
            other = std::max(other, l1_norm(b.col(2)));
            other = std::max(other, l1_norm(b.col(3)));
            r.lhs = Rational(b2);
            r.rhs = Rational(other);
            r.relation = "lhs >= rhs";
            r.holds = b2 >= other;
            r.margin = r.lhs - r.rhs;
            r.note = "b_{k,i}: " + l1_norm(b.col(0)).to_string() + ", " + b2.to_string() + ", " +
                     l1_norm(b.col(2)).to_string() + ", " + l1_norm(b.col(3)).to_string();
            break;
        }
        case Claim::MASS: {
            const Vec4Z t_k = mat_vec(tail_matrix(seq, k, K), Vec4Z::basis(2));
            const BigInteger total = l1_norm(mat_vec(product_matrix(seq, K), Vec4Z::basis(2)));
            r.lhs = Rational(column_mass(seq, k, 2) * t_k[1], total);
            r.rhs = Rational(1, 3);
            r.relation = "lhs >= rhs";
            r.holds = r.lhs >= r.rhs;
            r.margin = r.lhs - r.rhs;
            break;
        }
    }
    return r;
}

std::vector<LandingLevel> landing_chain(const ParamSeq& seq, int K, int kmax, const InduceOptions& opts) {
    if (kmax < 1) throw DomainError("landing_chain needs kmax >= 1");
    if (kmax + 2 > K) throw DomainError("landing_chain needs kmax+2 <= K (positive sub-lengths)");

    std::vector<LandingLevel> out;
    IetMap cur = build_keane_iet(seq, K);
    Rational offset(0), scale(1);  // current local [0,1) is ambient offset + scale*x; scale alternates sign

    for (int level = 1; level <= kmax; ++level) {
        const Rational a = cur.breaks()[3];
        const InducedMap ind = induce(cur, a, Rational(1), opts);
        if (ind.cells.size() != 4) {
            throw DomainError("level " + std::to_string(level) + " induction produced " +
                              std::to_string(ind.cells.size()) + " cells; not a Keane configuration");
        }

        LandingLevel lv;
        lv.level = level;
        // renamed cell j is spatial cell 5-j; rows are already the previous
        // level's renamed subintervals
        for (int j = 0; j < 4; ++j) {
            const InducedCell& cell = ind.cells[static_cast<std::size_t>(3 - j)];
            for (int i = 0; i < 4; ++i) {
                lv.visit_matrix(i, j) = BigInteger(static_cast<long long>(cell.visits[static_cast<std::size_t>(i)]));
            }
            lv.return_times[static_cast<std::size_t>(j)] = BigInteger(static_cast<long long>(cell.return_time));
        }
        lv.spatial_perm = ind.induced_permutation();
        std::array<int, 4> rp{};
        for (int j = 1; j <= 4; ++j) rp[static_cast<std::size_t>(j - 1)] = 5 - lv.spatial_perm(5 - j);
        lv.renamed_perm = Permutation4(rp);

        auto ambient = [&](const Rational& local_lo, const Rational& local_hi) {
            const Rational x = offset + scale * local_lo;
            const Rational y = offset + scale * local_hi;
            return x < y ? std::pair<Rational, Rational>{x, y} : std::pair<Rational, Rational>{y, x};
        };
        auto [blo, bhi] = ambient(a, Rational(1));
        lv.base_lo = blo;
        lv.base_hi = bhi;
        for (int j = 0; j < 4; ++j) {
            const InducedCell& cell = ind.cells[static_cast<std::size_t>(3 - j)];
            auto [clo, chi] = ambient(cell.lo, cell.hi);
            lv.cell_lo[static_cast<std::size_t>(j)] = clo;
            lv.cell_hi[static_cast<std::size_t>(j)] = chi;
        }
        out.push_back(std::move(lv));
        if (level == kmax) break;

        // reflect and rescale so renamed cells read left-to-right again
        const Rational blen = Rational(1) - a;
        Vec4Q newlens;
        for (int j = 0; j < 4; ++j) {
            const InducedCell& cell = ind.cells[static_cast<std::size_t>(3 - j)];
            newlens[j] = (cell.hi - cell.lo) / blen;
        }
        offset = offset + scale;  // ambient position of local 1
        scale = -scale * blen;
        cur = IetMap::build(newlens, out.back().renamed_perm);
    }
    return out;
}

LandingReport verify_landing_pattern(const ParamSeq& seq, int K, int k, const InduceOptions& opts) {
    if (k < 1 || k + 2 > K) throw DomainError("verify_landing_pattern needs 1 <= k <= K-2");
    const std::vector<LandingLevel> chain = landing_chain(seq, K, k, opts);
    const LandingLevel& lv = chain.back();

    LandingReport rep;
    rep.k = k;
    rep.K = K;
    rep.expected = keane_matrix(seq.pair(k).m, seq.pair(k).n);
    rep.actual = lv.visit_matrix;
    rep.spatial_perm = lv.spatial_perm;
    rep.renamed_perm = lv.renamed_perm;
    rep.holds = true;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (rep.actual(i, j) == rep.expected(i, j)) continue;
            rep.holds = false;
            rep.mismatches.push_back("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): got " +
                                     rep.actual(i, j).to_string() + ", expected " + rep.expected(i, j).to_string());
        }
    }
    return rep;
}

OrbitGeometry orbit_geometry(const ParamSeq& seq, int K, int k, std::uint64_t step_budget) {
    if (k < 0 || k + 2 > K) throw DomainError("orbit_geometry needs 0 <= k <= K-2");
    OrbitGeometry g;
    g.k = k;
    g.K = K;
    g.images = column_mass(seq, k, 2);
    if (BigInteger(static_cast<long long>(step_budget)) < g.images) {
        throw BudgetError("orbit_geometry needs b_{k,2} = " + g.images.to_string() + " steps, budget is " +
                              std::to_string(step_budget),
                          0);
    }

    const IetMap t = build_keane_iet(seq, K);
    Rational base_lo(0), base_hi(1);
    if (k == 0) {
        g.seg_lo = t.breaks()[1];
        g.seg_hi = t.breaks()[2];
    } else {
        const std::vector<LandingLevel> chain = landing_chain(seq, K, k, InduceOptions{step_budget, 16});
        g.seg_lo = chain.back().cell_lo[1];
        g.seg_hi = chain.back().cell_hi[1];
        base_lo = chain.back().base_lo;
        base_hi = chain.back().base_hi;
    }

    // lambda3 sub-lengths from the tail products: independent route,
    // cross-checked against the induced-cell geometry
    const Vec4Z tails = mat_vec(tail_matrix(seq, k, K), Vec4Z::basis(3));
    const BigInteger total = l1_norm(mat_vec(product_matrix(seq, K), Vec4Z::basis(3)));
    if (g.seg_hi - g.seg_lo != Rational(tails[1], total)) {
        throw Error("induced-cell length disagrees with the tail-product length at level " + std::to_string(k));
    }
    g.min_other_length = Rational(tails[0], total);
    g.min_other_length = std::min(g.min_other_length, Rational(tails[2], total));
    g.min_other_length = std::min(g.min_other_length, Rational(tails[3], total));

    Walker w(t, total * BigInteger(2));
    g.den = w.denominator();
    const std::uint64_t n_images = g.images.to_uint64();
    g.positions.reserve(n_images);

    BigInteger lo = w.point(g.seg_lo).num;
    const BigInteger seg_len = w.point(g.seg_hi).num - lo;
    BigInteger hi_excl = lo + seg_len;
    g.positions.push_back(lo);
    for (std::uint64_t s = 1; s < n_images; ++s) {
        int piece = 0;
        for (int j = 1; j <= 4; ++j) {
            if (lo >= w.scaled_break(j - 1) && hi_excl <= w.scaled_break(j)) {
                piece = j;
                break;
            }
        }
        if (piece == 0) throw Error("segment split at step " + std::to_string(s) + "; construction falsified");
        lo += w.scaled_translation(piece);
        hi_excl = lo + seg_len;
        g.positions.push_back(lo);
    }
    {
        // one more step must land the segment back inside I^(k)
        int piece = 0;
        for (int j = 1; j <= 4; ++j) {
            if (lo >= w.scaled_break(j - 1) && hi_excl <= w.scaled_break(j)) {
                piece = j;
                break;
            }
        }
        if (piece != 0) {
            const BigInteger rlo = lo + w.scaled_translation(piece);
            const Rational back_lo(rlo, g.den);
            const Rational back_hi(rlo + seg_len, g.den);
            g.returned = base_lo <= back_lo && back_hi <= base_hi;
        }
    }

    std::sort(g.positions.begin(), g.positions.end());
    g.disjoint = true;
    bool first_gap = true;
    for (std::size_t i = 0; i + 1 < g.positions.size(); ++i) {
        const BigInteger gap_num = g.positions[i + 1] - (g.positions[i] + seg_len);
        if (gap_num.sign() < 0) g.disjoint = false;
        const Rational gap(gap_num, g.den);
        if (first_gap || gap < g.min_gap) {
            g.min_gap = gap;
            first_gap = false;
        }
    }
    if (first_gap) g.min_gap = Rational(0);  // fewer than two images: no gaps
    g.gaps_ok = g.positions.size() < 2 || (g.disjoint && g.min_gap >= g.min_other_length);
    return g;
}

ErgodicityGap ergodicity_gap(const ParamSeq& seq, int K) {
    if (K < 1 || K > seq.depth()) throw DomainError("ergodicity_gap needs 1 <= K <= depth");
    ErgodicityGap e;
    e.K = K;
    const Mat4Z b = product_matrix(seq, K);
    e.freq2 = Rational(b(1, 1), l1_norm(b.col(1)));
    e.freq3 = Rational(b(1, 2), l1_norm(b.col(2)));
    e.gap = e.freq2 - e.freq3;
    e.freq2_ok = e.freq2 >= Rational(1, 3);
    if (seq.depth() >= 2) {
        e.freq3_bound = Rational(BigInteger(2) * seq.pair(1).m,
                                 (seq.pair(2).n + BigInteger(1)) * (seq.pair(1).n + BigInteger(1)));
        e.freq3_ok = e.freq3 <= e.freq3_bound;
    }
    return e;
}

}  // namespace keanelab
