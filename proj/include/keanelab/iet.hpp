#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "keanelab/linalg.hpp"

namespace keanelab {

/// Permutation of {1,2,3,4} in one-line notation: images[j-1] = pi(j).
class Permutation4 {
public:
    Permutation4() : images_{1, 2, 3, 4} {}
    Permutation4(int p1, int p2, int p3, int p4);
    explicit Permutation4(const std::array<int, 4>& images);

    int operator()(int j) const { return images_[static_cast<std::size_t>(j - 1)]; }
    const std::array<int, 4>& images() const { return images_; }

    Permutation4 inverse() const;
    bool is_identity() const { return images_ == std::array<int, 4>{1, 2, 3, 4}; }

    std::string to_string() const;  // "(4213)"

    friend bool operator==(const Permutation4&, const Permutation4&) = default;

private:
    std::array<int, 4> images_;
};

/// 4-interval exchange transformation of [0,1): four positive exact-rational
/// lengths summing to 1, exchanged by a permutation. T(x) = x - sum_{k<j} l_k
/// + sum_{pi(k') < pi(j)} l_{k'} for x in I_j. Immutable after construction.
class IetMap {
public:
    static IetMap build(const Vec4Q& lengths, const Permutation4& perm);

    const Vec4Q& lengths() const { return lengths_; }
    const Permutation4& permutation() const { return perm_; }

    /// Left endpoints of I_1..I_4 plus the right end: breaks()[0]=0 .. breaks()[4]=1.
    const std::array<Rational, 5>& breaks() const { return breaks_; }
    /// Left endpoint of the image interval T(I_j), j in 1..4.
    const Rational& image_left(int j) const { return image_left_[static_cast<std::size_t>(j - 1)]; }
    /// T restricted to I_j is x -> x + translation(j).
    const Rational& translation(int j) const { return trans_[static_cast<std::size_t>(j - 1)]; }
    /// Common denominator of all breakpoints and translations.
    const BigInteger& denominator() const { return den_; }

    /// Index j in 1..4 with x in I_j; throws outside [0,1).
    int interval_index(const Rational& x) const;

    Rational apply(const Rational& x) const;
    Rational apply_inverse(const Rational& y) const;

    /// (j_0, x_0), ..., (j_{n-1}, x_{n-1}) with x_0 = x, x_{s+1} = T(x_s).
    std::vector<std::pair<int, Rational>> itinerary(const Rational& x, std::uint64_t n) const;

private:
    IetMap() = default;

    Vec4Q lengths_;
    Permutation4 perm_;
    std::array<Rational, 5> breaks_;
    std::array<Rational, 4> image_left_;
    std::array<Rational, 4> trans_;
    BigInteger den_;
};

/// A point of [0,1) as a numerator over the owning Walker's fixed denominator.
struct Point {
    BigInteger num;
};

/// Integer-only orbit engine: breakpoints and translations scaled to a fixed
/// common denominator so that stepping is addition and comparison. The
/// denominator never changes under step/step_inverse.
class Walker {
public:
    Walker(const IetMap& map, const BigInteger& extra_denominator);
    explicit Walker(const IetMap& map) : Walker(map, BigInteger(1)) {}

    const BigInteger& denominator() const { return den_; }

    Point point(const Rational& x) const;
    Rational rational(const Point& p) const { return Rational(p.num, den_); }

    int interval_index(const Point& p) const;  // 1..4
    void step(Point& p) const;
    void step_inverse(Point& p) const;

    /// True when p sits exactly on an interior breakpoint of the map.
    bool on_breakpoint(const Point& p) const;

    const BigInteger& scaled_break(int j) const { return breaks_[static_cast<std::size_t>(j)]; }          // j in 0..4
    const BigInteger& scaled_translation(int j) const { return trans_[static_cast<std::size_t>(j - 1)]; }  // j in 1..4

private:
    BigInteger den_;
    std::array<BigInteger, 5> breaks_;
    std::array<BigInteger, 4> trans_;
    std::array<BigInteger, 5> image_breaks_;  // sorted image-interval endpoints
    std::array<int, 4> image_piece_;          // which I_j maps onto the i-th sorted image slot
};

struct InduceOptions {
    std::uint64_t step_budget = 50'000'000;
    int max_cells = 16;
};

/// One cell of a first-return partition: T^return_time translates [lo,hi) by
/// `translation` back into the base; visits[i] counts the cell's landings in
/// ambient interval I_{i+1} at times 0..return_time-1.
struct InducedCell {
    Rational lo, hi;
    std::uint64_t return_time = 0;
    std::array<std::uint64_t, 4> visits{};
    Rational translation;
};

/// Exact first-return map of an IET on [a,b), cells in spatial order.
struct InducedMap {
    Rational base_lo, base_hi;
    std::vector<InducedCell> cells;
    std::vector<int> image_ranks;  // rank (1-based, left to right) of each cell's image

    /// Visit matrix with entry (i,j) = visits of the j-th cell to ambient I_i.
    /// Defined only for exactly four cells.
    Mat4Z visit_matrix() const;

    /// Spatial permutation of the induced map (four cells only).
    Permutation4 induced_permutation() const;

    std::string to_json_string() const;
};

/// First-return map of `t` on [a,b) by exact segment propagation: the full
/// base is pushed forward, splitting at discontinuity preimages, until every
/// piece has returned. Throws BudgetError when step_budget is exhausted and
/// DomainError when more than max_cells cells appear.
InducedMap induce(const IetMap& t, const Rational& a, const Rational& b, const InduceOptions& opts = {});

}  // namespace keanelab
