#include "keanelab/iet.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

namespace keanelab {

Permutation4::Permutation4(int p1, int p2, int p3, int p4) : Permutation4(std::array<int, 4>{p1, p2, p3, p4}) {}

Permutation4::Permutation4(const std::array<int, 4>& images) : images_(images) {
    std::array<bool, 4> seen{};
    for (int v : images_) {
        if (v < 1 || v > 4 || seen[static_cast<std::size_t>(v - 1)]) {
            throw DomainError("not a permutation of {1,2,3,4}: " + to_string());
        }
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
}

Permutation4 Permutation4::inverse() const {
    std::array<int, 4> inv{};
    for (int j = 1; j <= 4; ++j) inv[static_cast<std::size_t>((*this)(j)-1)] = j;
    return Permutation4(inv);
}

std::string Permutation4::to_string() const {
    std::string s = "(";
    for (int v : images_) s += static_cast<char>('0' + v);
    return s + ")";
}

IetMap IetMap::build(const Vec4Q& lengths, const Permutation4& perm) {
    Rational sum;
    for (int j = 0; j < 4; ++j) {
        if (lengths[j].sign() <= 0) {
            throw DomainError("IET length " + std::to_string(j + 1) + " is not positive: " + lengths[j].to_string());
        }
        sum += lengths[j];
    }
    if (sum != Rational(1)) {
        throw DomainError("IET lengths sum to " + sum.to_string() + ", expected 1/1");
    }

    IetMap t;
    t.lengths_ = lengths;
    t.perm_ = perm;
    t.breaks_[0] = Rational(0);
    for (int j = 0; j < 4; ++j) t.breaks_[static_cast<std::size_t>(j + 1)] = t.breaks_[static_cast<std::size_t>(j)] + lengths[j];
    for (int j = 1; j <= 4; ++j) {
        Rational img;
        for (int k = 1; k <= 4; ++k) {
            if (perm(k) < perm(j)) img += lengths[k - 1];
        }
        t.image_left_[static_cast<std::size_t>(j - 1)] = img;
        t.trans_[static_cast<std::size_t>(j - 1)] = img - t.breaks_[static_cast<std::size_t>(j - 1)];
    }
    t.den_ = BigInteger(1);
    for (int j = 0; j < 4; ++j) t.den_ = lcm(t.den_, lengths[j].den());
    return t;
}

int IetMap::interval_index(const Rational& x) const {
    if (x.sign() < 0 || x >= Rational(1)) throw DomainError("point outside [0,1): " + x.to_string());
    for (int j = 1; j <= 3; ++j) {
        if (x < breaks_[static_cast<std::size_t>(j)]) return j;
    }
    return 4;
}

Rational IetMap::apply(const Rational& x) const {
    return x + trans_[static_cast<std::size_t>(interval_index(x) - 1)];
}

Rational IetMap::apply_inverse(const Rational& y) const {
    if (y.sign() < 0 || y >= Rational(1)) throw DomainError("point outside [0,1): " + y.to_string());
    for (int j = 1; j <= 4; ++j) {
        const Rational& lo = image_left_[static_cast<std::size_t>(j - 1)];
        if (y >= lo && y < lo + lengths_[j - 1]) return y - trans_[static_cast<std::size_t>(j - 1)];
    }
    throw Error("image intervals do not cover [0,1)");  // unreachable on a valid map
}

std::vector<std::pair<int, Rational>> IetMap::itinerary(const Rational& x, std::uint64_t n) const {
    std::vector<std::pair<int, Rational>> out;
    out.reserve(n);
    if (n == 0) return out;
    Walker w(*this, x.den());
    Point p = w.point(x);
    for (std::uint64_t s = 0; s < n; ++s) {
        out.emplace_back(w.interval_index(p), w.rational(p));
        w.step(p);
    }
    return out;
}

Walker::Walker(const IetMap& map, const BigInteger& extra_denominator) {
    den_ = lcm(map.denominator(), extra_denominator);
    auto scale = [&](const Rational& r) {
        auto [q, rem] = divmod(den_, r.den());
        if (!rem.is_zero()) throw Error("walker denominator not a common denominator");
        return r.num() * q;
    };
    for (int j = 0; j <= 4; ++j) breaks_[static_cast<std::size_t>(j)] = scale(map.breaks()[static_cast<std::size_t>(j)]);
    for (int j = 1; j <= 4; ++j) trans_[static_cast<std::size_t>(j - 1)] = scale(map.translation(j));
    // sorted image-interval endpoints for the inverse direction
    std::array<std::pair<BigInteger, int>, 4> imgs;
    for (int j = 1; j <= 4; ++j) imgs[static_cast<std::size_t>(j - 1)] = {scale(map.image_left(j)), j};
    std::sort(imgs.begin(), imgs.end());
    for (int i = 0; i < 4; ++i) {
        image_breaks_[static_cast<std::size_t>(i)] = imgs[static_cast<std::size_t>(i)].first;
        image_piece_[static_cast<std::size_t>(i)] = imgs[static_cast<std::size_t>(i)].second;
    }
    image_breaks_[4] = den_;
}

Point Walker::point(const Rational& x) const {
    if (x.sign() < 0 || x >= Rational(1)) throw DomainError("point outside [0,1): " + x.to_string());
    auto [q, rem] = divmod(den_, x.den());
    if (!rem.is_zero()) throw DomainError("point denominator incompatible with walker: " + x.to_string());
    return Point{x.num() * q};
}

int Walker::interval_index(const Point& p) const {
    if (p.num.sign() < 0 || p.num >= den_) throw DomainError("point outside [0,1)");
    for (int j = 1; j <= 3; ++j) {
        if (p.num < breaks_[static_cast<std::size_t>(j)]) return j;
    }
    return 4;
}

void Walker::step(Point& p) const {
    p.num += trans_[static_cast<std::size_t>(interval_index(p) - 1)];
}

void Walker::step_inverse(Point& p) const {
    if (p.num.sign() < 0 || p.num >= den_) throw DomainError("point outside [0,1)");
    for (int i = 0; i < 4; ++i) {
        if (i == 3 || p.num < image_breaks_[static_cast<std::size_t>(i + 1)]) {
            p.num -= trans_[static_cast<std::size_t>(image_piece_[static_cast<std::size_t>(i)] - 1)];
            return;
        }
    }
}

bool Walker::on_breakpoint(const Point& p) const {
    for (int j = 1; j <= 3; ++j) {
        if (p.num == breaks_[static_cast<std::size_t>(j)]) return true;
    }
    return false;
}

Mat4Z InducedMap::visit_matrix() const {
    if (cells.size() != 4) {
        throw DomainError("visit_matrix requires exactly 4 cells, have " + std::to_string(cells.size()));
    }
    Mat4Z m;
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
            m(i, j) = BigInteger(static_cast<long long>(cells[static_cast<std::size_t>(j)].visits[static_cast<std::size_t>(i)]));
        }
    }
    return m;
}

Permutation4 InducedMap::induced_permutation() const {
    if (cells.size() != 4) {
        throw DomainError("induced_permutation requires exactly 4 cells, have " + std::to_string(cells.size()));
    }
    return Permutation4(image_ranks[0], image_ranks[1], image_ranks[2], image_ranks[3]);
}

std::string InducedMap::to_json_string() const {
    nlohmann::json j;
    j["base"] = {base_lo.to_string(), base_hi.to_string()};
    j["cells"] = nlohmann::json::array();
    for (const auto& c : cells) {
        nlohmann::json cj;
        cj["endpoints"] = {c.lo.to_string(), c.hi.to_string()};
        cj["length"] = (c.hi - c.lo).to_string();
        cj["return_time"] = c.return_time;
        cj["visits"] = {c.visits[0], c.visits[1], c.visits[2], c.visits[3]};
        cj["translation"] = c.translation.to_string();
        j["cells"].push_back(cj);
    }
    j["image_ranks"] = image_ranks;
    if (cells.size() == 4) {
        nlohmann::json vm = nlohmann::json::array();
        const Mat4Z m = visit_matrix();
        for (int i = 0; i < 4; ++i) {
            vm.push_back({m(i, 0).to_uint64(), m(i, 1).to_uint64(), m(i, 2).to_uint64(), m(i, 3).to_uint64()});
        }
        j["visit_matrix"] = vm;
    }
    return j.dump(2) + "\n";
}

namespace {

struct Segment {
    BigInteger lo, hi;      // current position, scaled integers
    BigInteger offset;      // current = origin + offset
    std::uint64_t steps = 0;
    std::array<std::uint64_t, 4> visits{};
};

}  // namespace

InducedMap induce(const IetMap& t, const Rational& a, const Rational& b, const InduceOptions& opts) {
    if (a.sign() < 0 || !(a < b) || b > Rational(1)) {
        throw DomainError("induce needs 0 <= a < b <= 1, got [" + a.to_string() + ", " + b.to_string() + ")");
    }
    Walker w(t, lcm(a.den(), b.den()));
    const BigInteger ia = w.point(a).num;
    const BigInteger ib = b == Rational(1) ? w.denominator() : w.point(b).num;

    std::deque<Segment> work;
    work.push_back(Segment{ia, ib, BigInteger(0), 0, {}});
    std::vector<InducedCell> cells;
    std::uint64_t used = 0;

    auto emit_cell = [&](const Segment& s, const BigInteger& lo, const BigInteger& hi) {
        InducedCell c;
        c.lo = Rational(lo - s.offset, w.denominator());
        c.hi = Rational(hi - s.offset, w.denominator());
        c.return_time = s.steps;
        c.visits = s.visits;
        c.translation = Rational(s.offset, w.denominator());
        cells.push_back(std::move(c));
    };

    while (!work.empty()) {
        Segment seg = std::move(work.front());
        work.pop_front();
        // split at the map's breakpoints, advance each piece one step
        for (int j = 1; j <= 4; ++j) {
            const BigInteger& plo = w.scaled_break(j - 1);
            const BigInteger& phi = w.scaled_break(j);
            if (phi <= seg.lo || plo >= seg.hi) continue;
            if (++used > opts.step_budget) {
                throw BudgetError("induce step budget exhausted after " + std::to_string(used - 1) +
                                      " segment steps (" + std::to_string(cells.size()) + " cells found)",
                                  used - 1);
            }
            Segment piece;
            piece.lo = std::max(seg.lo, plo);
            piece.hi = std::min(seg.hi, phi);
            piece.offset = seg.offset;
            piece.steps = seg.steps;
            piece.visits = seg.visits;
            ++piece.visits[static_cast<std::size_t>(j - 1)];
            const BigInteger& tr = w.scaled_translation(j);
            piece.lo += tr;
            piece.hi += tr;
            piece.offset += tr;
            ++piece.steps;
            if (piece.hi <= ia || piece.lo >= ib) {
                work.push_back(std::move(piece));
            } else {
                const BigInteger rlo = std::max(piece.lo, ia);
                const BigInteger rhi = std::min(piece.hi, ib);
                if (piece.lo < rlo) {
                    Segment left = piece;
                    left.hi = rlo;
                    work.push_back(std::move(left));
                }
                if (rhi < piece.hi) {
                    Segment right = piece;
                    right.lo = rhi;
                    work.push_back(std::move(right));
                }
                emit_cell(piece, rlo, rhi);
            }
        }
    }

    std::sort(cells.begin(), cells.end(), [](const InducedCell& x, const InducedCell& y) { return x.lo < y.lo; });
    // the cells must tile [a,b) exactly
    if (cells.empty() || cells.front().lo != a || cells.back().hi != b) {
        throw Error("induced partition does not tile the base");
    }
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        if (cells[i].hi != cells[i + 1].lo) throw Error("induced partition has a gap");
    }
    // adjacent pieces can carry the same return data when their return words
    // differ only in order; the canonical partition merges them
    std::vector<InducedCell> merged;
    for (InducedCell& c : cells) {
        if (!merged.empty() && merged.back().return_time == c.return_time && merged.back().visits == c.visits &&
            merged.back().translation == c.translation) {
            merged.back().hi = c.hi;
        } else {
            merged.push_back(std::move(c));
        }
    }
    cells = std::move(merged);
    if (static_cast<int>(cells.size()) > opts.max_cells) {
        throw DomainError("induced map has " + std::to_string(cells.size()) + " subintervals, more than the configured " +
                          std::to_string(opts.max_cells) + "; non-Keane configuration or convention mismatch");
    }

    InducedMap out;
    out.base_lo = a;
    out.base_hi = b;
    out.cells = std::move(cells);
    // rank cell images left-to-right
    std::vector<std::size_t> order(out.cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return out.cells[x].lo + out.cells[x].translation < out.cells[y].lo + out.cells[y].translation;
    });
    out.image_ranks.assign(out.cells.size(), 0);
    for (std::size_t r = 0; r < order.size(); ++r) out.image_ranks[order[r]] = static_cast<int>(r) + 1;
    return out;
}

}  // namespace keanelab
