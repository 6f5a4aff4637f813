#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "keanelab/iet.hpp"
#include "keanelab/linalg.hpp"

namespace keanelab {

/// One-line permutation fed into the IET formula for the whole family. This
/// is the image-order reading of "(4213)": the images are ordered
/// T(I_4), T(I_2), T(I_1), T(I_3). Validated decisively by the requirement
/// that induction on I_4 reproduce the matrix A_{m_1,n_1} exactly.
inline const Permutation4& keane_permutation() {
    static const Permutation4 p(3, 2, 4, 1);
    return p;
}

enum class SequenceKind { Minimal, Theorem4, Theorem3, Corollary1, Explicit };

std::string to_string(SequenceKind k);
SequenceKind sequence_kind_from_string(const std::string& s);

struct ParamPair {
    BigInteger m, n;
};

/// Finite sequence of (m_k, n_k) pairs, 1-indexed via pair(k).
struct ParamSeq {
    std::vector<ParamPair> pairs;
    SequenceKind kind = SequenceKind::Explicit;
    std::optional<Rational> theorem3_r;  // growth exponent reported for the theorem3 kind

    int depth() const { return static_cast<int>(pairs.size()); }
    const ParamPair& pair(int k) const;  // k in 1..depth

    std::string to_json_string() const;
};

/// Per-k outcome of Theorem 1's inequalities.
struct PairCheck {
    int k = 0;
    bool lower_ok = false;                 // 3(n_k + 1) <= m_k
    std::optional<bool> upper_ok;          // 2 m_k <= n_{k+1} + 1 (absent for the last k)
    bool lower_binding = false;            // equality attained
    bool upper_binding = false;
};

struct ValidationReport {
    bool n1_ok = false;  // n_1 >= 10
    std::vector<PairCheck> checks;

    bool ratios_ok() const;
    bool fully_valid() const { return n1_ok && ratios_ok(); }
};

/// The displayed matrix A_{m,n}; throws for m or n < 1.
Mat4Z keane_matrix(const BigInteger& m, const BigInteger& n);

ValidationReport validate_sequence(const ParamSeq& seq);

/// B_k = A_{m_1,n_1} ... A_{m_k,n_k}; B_0 is the identity. k in 0..depth.
Mat4Z product_matrix(const ParamSeq& seq, int k);

/// A_{m_{k+1},n_{k+1}} ... A_{m_K,n_K}; identity when k == K. 0 <= k <= K <= depth.
Mat4Z tail_matrix(const ParamSeq& seq, int k, int K);

/// b_{k,i} = |B_k e_i|_1, i in 1..4.
BigInteger column_mass(const ParamSeq& seq, int k, int i);

/// (prod m_j, prod (m_j + n_j + 1)) for j <= k; bounds b_{k,2} from both sides.
std::pair<BigInteger, BigInteger> mass_bounds(const ParamSeq& seq, int k);

/// Depth-K truncated length vector: normalize(B_K e_3). Requires K >= 2
/// (K = 1 leaves the second interval empty).
Vec4Q length_vector(const ParamSeq& seq, int K);

/// Depth-K truncated lambda_basis proportions of I_1^(k)..I_4^(k) within
/// I^(k): normalize(A_{m_{k+1}} ... A_{m_K} e_basis). basis is 2 or 3.
Vec4Q level_weights(const ParamSeq& seq, int k, int K, int basis);

/// Per-level summary: column masses and both truncated weight vectors.
struct LevelData {
    int k = 0;
    int K = 0;
    std::array<BigInteger, 4> column_masses;  // b_{k,1}..b_{k,4}
    Vec4Q lambda3_weights;
    Vec4Q lambda2_weights;
};

LevelData level_data(const ParamSeq& seq, int k, int K);

/// The depth-K truncated Keane IET: length_vector(seq, K) with the family
/// permutation.
IetMap build_keane_iet(const ParamSeq& seq, int K);

struct GenerateOptions {
    std::uint64_t bit_budget = 1'000'000;  // max bits of any generated integer
};

/// Named parameter generators. `r` is stored for reporting on the theorem3
/// kind and ignored otherwise. Throws BudgetError (naming the offending k)
/// when an entry would exceed the bit budget.
ParamSeq generate(SequenceKind kind, int depth, std::optional<Rational> r = std::nullopt,
                  const GenerateOptions& opts = {});

}  // namespace keanelab
