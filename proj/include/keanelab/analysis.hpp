#pragma once

#include <optional>
#include <string>
#include <vector>

#include "keanelab/keane.hpp"

namespace keanelab {

/// Checkable claims. L1/L2/L5/L7 are the ratio inequalities, L7S the
/// separately-reported scale inequality lambda3(I^(k)) >= 1/b_{k,2}, DOM the
/// column dominance b_{k,2} >= b_{k,i}, MASS the orbit-mass bound
/// b_{k,2} * lambda2(I_2^(k)) >= 1/3.
enum class Claim { L1, L2, L5, L7, L7S, DOM, MASS };

std::string to_string(Claim c);
Claim claim_from_string(const std::string& s);

/// Exact verdict on one inequality instance. margin is oriented so that
/// margin >= 0 exactly when the claim holds (strict claims: margin > 0).
struct VerificationReport {
    std::string claim;
    std::string sequence;
    int k = -1;
    int K = -1;
    std::string relation;  // "lhs <= rhs", "lhs >= rhs" or "lhs > rhs"
    Rational lhs;
    Rational rhs;
    bool holds = false;
    bool applicable = true;
    Rational margin;
    std::string note;
};

VerificationReport verify_claim(Claim c, const ParamSeq& seq, int k, int K);

/// One level of the iterated-induction chain. Each level induces the current
/// map on its fourth interval, renames the cells in reverse order, and
/// reflects/rescales so the renamed map reads left-to-right again; the
/// renamed visit matrix of level k is expected to equal A_{m_k,n_k}.
/// Ambient positions are tracked through the reflections.
struct LandingLevel {
    int level = 0;
    Mat4Z visit_matrix;                        // renamed rows and columns
    Permutation4 spatial_perm;                 // induced map, spatial naming
    Permutation4 renamed_perm;                 // after reversal; (3241) for the Keane family
    std::array<BigInteger, 4> return_times;    // renamed, in current-level steps
    Rational base_lo, base_hi;                 // ambient I^(k)
    std::array<Rational, 4> cell_lo, cell_hi;  // ambient I_j^(k), renamed j = index+1
};

std::vector<LandingLevel> landing_chain(const ParamSeq& seq, int K, int kmax, const InduceOptions& opts = {});

struct LandingReport {
    int k = 0;
    int K = 0;
    bool holds = false;
    Mat4Z expected;
    Mat4Z actual;
    std::vector<std::string> mismatches;
    Permutation4 spatial_perm;
    Permutation4 renamed_perm;
};

/// Builds the depth-K IET, applies induction k times and compares the step-k
/// renamed visit matrix against keane_matrix(m_k, n_k) exactly.
/// Requires 1 <= k <= K-2.
LandingReport verify_landing_pattern(const ParamSeq& seq, int K, int k, const InduceOptions& opts = {});

/// Positions of all b_{k,2} forward images of I_2^(k), with gap statistics.
struct OrbitGeometry {
    int k = 0;
    int K = 0;
    BigInteger images;             // b_{k,2}
    Rational seg_lo, seg_hi;       // ambient I_2^(k)
    Rational min_other_length;     // min_{i != 2} lambda3(I_i^(k))
    Rational min_gap;              // smallest gap between consecutive images
    bool disjoint = false;
    bool gaps_ok = false;          // every gap >= min_other_length
    bool returned = false;         // step b_{k,2} lands back inside I^(k)
    BigInteger den;                // lattice denominator of positions
    std::vector<BigInteger> positions;  // sorted image left endpoints over den
};

/// Simulates T^s(I_2^(k)) for 0 <= s < b_{k,2} by exact segment propagation;
/// the segment must never split (an error if it does). Requires k+2 <= K and
/// b_{k,2} within the step budget.
OrbitGeometry orbit_geometry(const ParamSeq& seq, int K, int k, std::uint64_t step_budget = 50'000'000);

/// Finite-orbit Birkhoff averages of the indicator of I_2 along the return
/// cycles of I_2^(K) and I_3^(K): ((B_K e_2)_2 / b_{K,2}, (B_K e_3)_2 / b_{K,3}).
struct ErgodicityGap {
    int K = 0;
    Rational freq2;
    Rational freq3;
    Rational gap;          // freq2 - freq3
    Rational freq3_bound;  // 2 m_1 / ((n_2+1)(n_1+1))
    bool freq2_ok = false;   // freq2 >= 1/3
    bool freq3_ok = false;   // freq3 <= freq3_bound
};

ErgodicityGap ergodicity_gap(const ParamSeq& seq, int K);

}  // namespace keanelab
