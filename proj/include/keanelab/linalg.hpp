#pragma once

#include <array>
#include <ostream>
#include <string>

#include "keanelab/bigint.hpp"
#include "keanelab/rational.hpp"

namespace keanelab {

/// Fixed length-4 vector over an exact scalar.
template <typename T>
struct Vec4 {
    std::array<T, 4> e{};

    Vec4() = default;
    Vec4(T a, T b, T c, T d) : e{std::move(a), std::move(b), std::move(c), std::move(d)} {}

    T& operator[](int i) { return e[static_cast<std::size_t>(i)]; }
    const T& operator[](int i) const { return e[static_cast<std::size_t>(i)]; }

    friend bool operator==(const Vec4&, const Vec4&) = default;

    /// Standard basis vector e_i, i in 1..4.
    static Vec4 basis(int i) {
        Vec4 v;
        v[i - 1] = T(1);
        return v;
    }
};

/// 4x4 matrix stored column-major: col(j) is the image of basis vector e_j.
template <typename T>
struct Mat4 {
    std::array<Vec4<T>, 4> cols{};

    const T& operator()(int i, int j) const { return cols[static_cast<std::size_t>(j)].e[static_cast<std::size_t>(i)]; }
    T& operator()(int i, int j) { return cols[static_cast<std::size_t>(j)].e[static_cast<std::size_t>(i)]; }

    const Vec4<T>& col(int j) const { return cols[static_cast<std::size_t>(j)]; }

    friend bool operator==(const Mat4&, const Mat4&) = default;

    static Mat4 identity() {
        Mat4 m;
        for (int i = 0; i < 4; ++i) m(i, i) = T(1);
        return m;
    }

    /// Rows as a display string, for logs and mismatch reports.
    std::string to_string() const {
        std::string out;
        for (int i = 0; i < 4; ++i) {
            out += i == 0 ? "[" : " ";
            for (int j = 0; j < 4; ++j) {
                out += (*this)(i, j).to_string();
                out += j < 3 ? ", " : (i < 3 ? ";\n" : "]");
            }
        }
        return out;
    }
};

using Vec4Z = Vec4<BigInteger>;
using Vec4Q = Vec4<Rational>;
using Mat4Z = Mat4<BigInteger>;
using Mat4Q = Mat4<Rational>;

template <typename T>
T l1_norm(const Vec4<T>& v) {
    T s{};
    for (int i = 0; i < 4; ++i) s += abs(v[i]);
    return s;
}

template <typename T>
Vec4<T> mat_vec(const Mat4<T>& m, const Vec4<T>& v) {
    Vec4<T> out;
    for (int i = 0; i < 4; ++i) {
        T s{};
        for (int k = 0; k < 4; ++k) s += m(i, k) * v[k];
        out[i] = std::move(s);
    }
    return out;
}

template <typename T>
Mat4<T> mat_mul(const Mat4<T>& a, const Mat4<T>& b) {
    Mat4<T> out;
    for (int j = 0; j < 4; ++j) out.cols[static_cast<std::size_t>(j)] = mat_vec(a, b.col(j));
    return out;
}

/// v / |v|_1; the result sums to exactly 1. Throws on the zero vector.
inline Vec4Q normalize(const Vec4Q& v) {
    const Rational norm = l1_norm(v);
    if (norm.is_zero()) throw DomainError("normalize: zero vector");
    Vec4Q out;
    for (int i = 0; i < 4; ++i) out[i] = v[i] / norm;
    return out;
}

inline Vec4Q to_rational(const Vec4Z& v) {
    Vec4Q out;
    for (int i = 0; i < 4; ++i) out[i] = Rational(v[i]);
    return out;
}

}  // namespace keanelab
