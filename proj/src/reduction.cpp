#include "pasieve/reduction.hpp"

#include <cmath>

#include "pasieve/enumerate.hpp"

namespace pasieve {

namespace {

// Gram-Schmidt over integer columns (denominator cancels in mu and only
// rescales norms, which is irrelevant to reduction decisions).
struct Gs {
    int m, k;
    RVec bstar;   // m x k
    RVec mu;      // k x k
    RVec bnorm2;  // k

    void compute(const IMat& b) {
        m = b.rows;
        k = b.cols;
        bstar.assign(static_cast<size_t>(m) * k, 0);
        mu.assign(static_cast<size_t>(k) * k, 0);
        bnorm2.assign(k, 0);
        for (int j = 0; j < k; ++j) {
            RVec v(m);
            for (int i = 0; i < m; ++i) v[i] = static_cast<Real>(b.at(i, j));
            for (int i = 0; i < j; ++i) {
                Real dot = 0;
                for (int r = 0; r < m; ++r) dot += static_cast<Real>(b.at(r, j)) * bstar[static_cast<size_t>(r) * k + i];
                Real c = dot / bnorm2[i];
                mu[static_cast<size_t>(j) * k + i] = c;
                for (int r = 0; r < m; ++r) v[r] -= c * bstar[static_cast<size_t>(r) * k + i];
            }
            mu[static_cast<size_t>(j) * k + j] = 1;
            Real n2 = 0;
            for (int r = 0; r < m; ++r) {
                bstar[static_cast<size_t>(r) * k + j] = v[r];
                n2 += v[r] * v[r];
            }
            bnorm2[j] = n2;
        }
    }

    Real getmu(int j, int i) const { return mu[static_cast<size_t>(j) * k + i]; }
};

void add_col(IMat& b, int dst, int src, i64 factor) {
    for (int r = 0; r < b.rows; ++r) {
        i128 v = static_cast<i128>(b.at(r, dst)) + checked_mul128(factor, b.at(r, src));
        if (v > INT64_MAX || v < INT64_MIN) throw Error("integer overflow in reduction");
        b.at(r, dst) = static_cast<i64>(v);
    }
}

void swap_cols(IMat& b, int i, int j) {
    for (int r = 0; r < b.rows; ++r) std::swap(b.at(r, i), b.at(r, j));
}

void size_reduce_col(IMat& b, IMat& u, Gs& gs, int kk) {
    for (int j = kk - 1; j >= 0; --j) {
        Real c = gs.getmu(kk, j);
        i64 q = static_cast<i64>(llroundl(c));
        if (q != 0) {
            add_col(b, kk, j, -q);
            add_col(u, kk, j, -q);
            for (int i = 0; i <= j; ++i)
                gs.mu[static_cast<size_t>(kk) * gs.k + i] -= static_cast<Real>(q) * gs.getmu(j, i);
        }
    }
}

// Unimodular column ops turning sum_j a[j] * col_j (gcd of a = g) into
// +-g * col_lo; coefficients are consumed left to right from the top.
void insert_combination(IMat& b, IMat& u, int lo, IVec a) {
    int k = b.cols;
    for (int j = k - 1; j > lo; --j) {
        if (a[j] == 0) continue;
        if (a[j - 1] == 0) {
            swap_cols(b, j - 1, j);
            swap_cols(u, j - 1, j);
            std::swap(a[j - 1], a[j]);
            continue;
        }
        // extended gcd: p*a[j-1] + q*a[j] = g
        i64 x = a[j - 1], y = a[j];
        i64 old_r = x, r = y, old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            i64 qq = old_r / r;
            i64 tmp = old_r - qq * r;
            old_r = r;
            r = tmp;
            tmp = old_s - qq * s;
            old_s = s;
            s = tmp;
            tmp = old_t - qq * t;
            old_t = t;
            t = tmp;
        }
        i64 g = old_r, p = old_s, q = old_t;
        if (g < 0) {
            g = -g;
            p = -p;
            q = -q;
        }
        i64 xg = x / g, yg = y / g;
        // new col_{j-1} = xg*col_{j-1} + yg*col_j ; new col_j = -q*col_{j-1} + p*col_j
        for (IMat* mat : {&b, &u}) {
            for (int rI = 0; rI < mat->rows; ++rI) {
                i128 c1 = checked_mul128(xg, mat->at(rI, j - 1)) + checked_mul128(yg, mat->at(rI, j));
                i128 c2 = checked_mul128(-q, mat->at(rI, j - 1)) + checked_mul128(p, mat->at(rI, j));
                if (c1 > INT64_MAX || c1 < INT64_MIN || c2 > INT64_MAX || c2 < INT64_MIN)
                    throw Error("integer overflow in reduction");
                mat->at(rI, j - 1) = static_cast<i64>(c1);
                mat->at(rI, j) = static_cast<i64>(c2);
            }
        }
        a[j - 1] = g;
        a[j] = 0;
    }
    if (a[lo] < 0) {
        for (int r = 0; r < b.rows; ++r) {
            b.at(r, lo) = -b.at(r, lo);
            u.at(r, lo) = -u.at(r, lo);
        }
        a[lo] = -a[lo];
    }
    if (a[lo] != 1) throw Error("insertion coefficients not primitive");
}

struct RawReduction {
    IMat b;
    IMat u;
};

RawReduction lll_raw(const IMat& start, Real delta) {
    RawReduction r{start, IMat::identity(start.cols)};
    int k = start.cols;
    Gs gs;
    gs.compute(r.b);
    int kk = 1;
    while (kk < k) {
        size_reduce_col(r.b, r.u, gs, kk);
        Real lhs = gs.bnorm2[kk];
        Real m = gs.getmu(kk, kk - 1);
        if (lhs >= (delta - m * m) * gs.bnorm2[kk - 1]) {
            ++kk;
        } else {
            swap_cols(r.b, kk - 1, kk);
            swap_cols(r.u, kk - 1, kk);
            gs.compute(r.b);
            kk = std::max(kk - 1, 1);
        }
    }
    gs.compute(r.b);
    for (int j = 1; j < k; ++j) size_reduce_col(r.b, r.u, gs, j);
    return r;
}

}  // namespace

Reduced lll_reduce(const LatticeBasis& basis, Real delta) {
    if (!(delta > 0.25L && delta < 1.0L)) throw Error("delta must lie in (1/4, 1)");
    RawReduction r = lll_raw(basis.nums(), delta);
    return Reduced{LatticeBasis(std::move(r.b), basis.den()), std::move(r.u)};
}

Real lambda1_estimate(const LatticeBasis& basis) {
    Reduced r = lll_reduce(basis);
    LatticePoint e1{IVec(r.basis.rank(), 0)};
    e1.coeffs[0] = 1;
    return norm(r.basis, zero_shift(r.basis.ambient_dim()), e1);
}

LatticePoint babai_nearest_plane(const LatticeBasis& basis, const Shift& shift) {
    TargetCoords t = target_coords(basis, shift);
    int k = basis.rank();
    IVec a(k, 0);
    for (int i = k - 1; i >= 0; --i) {
        Real c = t.tc[i];
        for (int j = i + 1; j < k; ++j) c -= basis.mu(j, i) * a[j];
        a[i] = static_cast<i64>(floorl(c + 0.5L));
    }
    return LatticePoint{std::move(a)};
}

Real dist_estimate(const LatticeBasis& basis, const Shift& shift) {
    Reduced r = lll_reduce(basis);
    LatticePoint p = babai_nearest_plane(r.basis, shift);
    return norm(r.basis, shift, p);
}

Reduced hkz_reduce(const LatticeBasis& basis, const ReductionConfig& config) {
    int cap = config.enum_cap > 0 ? config.enum_cap : enumeration_cap();
    if (basis.rank() > cap) throw Error("enumeration cap exceeded");
    RawReduction r = lll_raw(basis.nums(), config.delta);
    int k = r.b.cols;
    Gs gs;
    for (int lvl = 0; lvl < k; ++lvl) {
        gs.compute(r.b);
        // shortest nonzero vector of the projection onto span(b_0..b_{lvl-1})^perp
        int sub = k - lvl;
        GsView view;
        view.k = sub;
        view.mu = [&gs, lvl, k_ = k](int j, int i) { return gs.mu[static_cast<size_t>(j + lvl) * k_ + (i + lvl)]; };
        view.bnorm2 = [&gs, lvl](int i) { return gs.bnorm2[i + lvl]; };
        Real best = gs.bnorm2[lvl];
        Real radius2 = best * (1 + 1e-9L);
        IVec best_a;
        enum_gs(view, nullptr, 0, radius2, [&](const IVec& a, Real n2) {
            bool zero = true;
            for (i64 v : a)
                if (v) {
                    zero = false;
                    break;
                }
            if (zero) return;
            if (n2 < best * (1 - 1e-12L)) {
                best = n2;
                best_a = a;
                radius2 = best * (1 + 1e-9L);
            }
        });
        if (best_a.empty()) continue;  // current b_lvl already attains the minimum
        i64 g = 0;
        for (i64 v : best_a) g = gcd64(g, v);
        if (g > 1)
            for (i64& v : best_a) v /= g;
        IVec full(k, 0);
        for (int j = 0; j < sub; ++j) full[lvl + j] = best_a[j];
        insert_combination(r.b, r.u, lvl, full);
    }
    gs.compute(r.b);
    for (int j = 1; j < k; ++j) size_reduce_col(r.b, r.u, gs, j);
    return Reduced{LatticeBasis(std::move(r.b), basis.den()), std::move(r.u)};
}

}  // namespace pasieve
