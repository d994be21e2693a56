#pragma once

#include <cmath>

#include "pasieve/common.hpp"

namespace pasieve {

// Row-major integer matrix, just enough for exact basis bookkeeping.
struct IMat {
    int rows = 0, cols = 0;
    std::vector<i64> a;

    IMat() = default;
    IMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    i64& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    i64 at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static IMat identity(int n) {
        IMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    IVec col(int j) const {
        IVec v(rows);
        for (int i = 0; i < rows; ++i) v[i] = at(i, j);
        return v;
    }

    bool operator==(const IMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

inline IMat imat_mul(const IMat& x, const IMat& y) {
    if (x.cols != y.rows) throw Error("matrix dimension mismatch");
    IMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            i64 v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) {
                i128 acc = static_cast<i128>(z.at(i, j)) + checked_mul128(v, y.at(k, j));
                if (acc > INT64_MAX || acc < INT64_MIN) throw Error("integer overflow");
                z.at(i, j) = static_cast<i64>(acc);
            }
        }
    return z;
}

inline IVec imat_mul_vec(const IMat& x, const IVec& v) {
    if (x.cols != static_cast<int>(v.size())) throw Error("matrix dimension mismatch");
    IVec r(x.rows, 0);
    for (int i = 0; i < x.rows; ++i) {
        i128 acc = 0;
        for (int j = 0; j < x.cols; ++j) acc += checked_mul128(x.at(i, j), v[j]);
        if (acc > INT64_MAX || acc < INT64_MIN) throw Error("integer overflow");
        r[i] = static_cast<i64>(acc);
    }
    return r;
}

// Fraction-free Gaussian elimination. Exact for anything desk scale; throws
// on 128-bit overflow instead of silently wrapping.
inline i128 bareiss_det(IMat m) {
    if (m.rows != m.cols) throw Error("determinant of non-square matrix");
    int n = m.rows;
    if (n == 0) return 1;
    std::vector<i128> w(m.a.begin(), m.a.end());
    auto at = [&](int r, int c) -> i128& { return w[static_cast<size_t>(r) * n + c]; };
    i128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (at(k, k) == 0) {
            int p = -1;
            for (int r = k + 1; r < n; ++r)
                if (at(r, k) != 0) {
                    p = r;
                    break;
                }
            if (p < 0) return 0;
            for (int c = 0; c < n; ++c) std::swap(at(k, c), at(p, c));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                i128 t = checked_mul128(at(i, j), at(k, k)) - checked_mul128(at(i, k), at(k, j));
                at(i, j) = t / prev;  // divides exactly (Bareiss)
            }
        prev = at(k, k);
    }
    return sign * at(n - 1, n - 1);
}

// Exact column rank over the rationals (denominators do not change rank).
inline int exact_rank(const IMat& m) {
    int rows = m.rows, cols = m.cols;
    std::vector<i128> w(m.a.begin(), m.a.end());
    auto at = [&](int r, int c) -> i128& { return w[static_cast<size_t>(r) * cols + c]; };
    int rank = 0;
    i128 prev = 1;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int p = -1;
        for (int r = rank; r < rows; ++r)
            if (at(r, c) != 0) {
                p = r;
                break;
            }
        if (p < 0) continue;
        for (int j = 0; j < cols; ++j) std::swap(at(rank, j), at(p, j));
        for (int i = rank + 1; i < rows; ++i)
            for (int j = c + 1; j < cols; ++j)
                at(i, j) = (checked_mul128(at(i, j), at(rank, c)) -
                            checked_mul128(at(i, c), at(rank, j))) /
                           prev;
        for (int i = rank + 1; i < rows; ++i) at(i, c) = 0;
        prev = at(rank, c);
        ++rank;
    }
    return rank;
}

inline bool is_unimodular(const IMat& u) {
    if (u.rows != u.cols) return false;
    i128 d = bareiss_det(u);
    return d == 1 || d == -1;
}

}  // namespace pasieve
