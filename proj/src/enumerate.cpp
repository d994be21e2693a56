#include "pasieve/enumerate.hpp"

#include <cmath>
#include <cstdlib>

namespace pasieve {

int enumeration_cap() {
    static int cap = [] {
        if (const char* s = std::getenv("GSL_ENUM_CAP")) {
            int v = std::atoi(s);
            if (v >= 1) return v;
        }
        return 20;
    }();
    return cap;
}

GsView gs_view(const LatticeBasis& basis) {
    GsView v;
    v.k = basis.rank();
    v.mu = [&basis](int j, int i) { return basis.mu(j, i); };
    v.bnorm2 = [&basis](int j) { return basis.bstar_norm2(j); };
    return v;
}

void enum_gs(const GsView& gs, const Real* tc, Real perp2, Real& radius2,
             const std::function<void(const IVec&, Real)>& fn) {
    int k = gs.k;
    if (k == 0) return;
    IVec a(k, 0);
    RVec partial(k + 1, perp2);  // partial[i] = cost contributed by levels > i-1
    RVec center(k, 0);
    IVec lo(k, 0), hi(k, 0);

    RVec bn(k);
    for (int i = 0; i < k; ++i) bn[i] = gs.bnorm2(i);

    auto level_center = [&](int i) {
        Real c = tc ? tc[i] : 0;
        for (int j = i + 1; j < k; ++j) c -= gs.mu(j, i) * a[j];
        return c;
    };

    int i = k - 1;
    bool descending = true;
    partial[k] = perp2;
    while (true) {
        if (descending) {
            center[i] = level_center(i);
            Real rem = radius2 * (1 + 1e-12L) - partial[i + 1];
            if (rem < 0) rem = 0;
            Real w = std::sqrt(rem / bn[i]);
            lo[i] = static_cast<i64>(std::ceil(center[i] - w - 1e-12L));
            hi[i] = static_cast<i64>(std::floor(center[i] + w + 1e-12L));
            a[i] = lo[i];
        } else {
            ++a[i];
        }
        if (a[i] > hi[i]) {
            ++i;
            if (i >= k) return;
            descending = false;
            continue;
        }
        Real d = (a[i] - center[i]);
        Real cost = partial[i + 1] + bn[i] * d * d;
        if (cost > radius2 * (1 + 1e-12L)) {
            // boundary value lost to float slop or a shrunken radius
            descending = false;
            continue;
        }
        partial[i] = cost;
        if (i == 0) {
            fn(a, cost);
            descending = false;
        } else {
            --i;
            descending = true;
        }
    }
}

TargetCoords target_coords(const LatticeBasis& basis, const Shift& shift) {
    int m = basis.ambient_dim(), k = basis.rank();
    TargetCoords out;
    out.tc.assign(k, 0);
    RVec t(m);
    Real t2 = 0;
    for (int i = 0; i < m; ++i) {
        t[i] = static_cast<Real>(shift.num[i]) / shift.den;
        t2 += t[i] * t[i];
    }
    Real proj2 = 0;
    for (int j = 0; j < k; ++j) {
        Real dot = 0;
        for (int i = 0; i < m; ++i) dot += t[i] * basis.bstar(i, j);
        out.tc[j] = dot / basis.bstar_norm2(j);
        proj2 += out.tc[j] * out.tc[j] * basis.bstar_norm2(j);
    }
    out.perp2 = std::max<Real>(0, t2 - proj2);
    return out;
}

void enumerate_ball(const LatticeBasis& basis, const Shift& shift, Real radius,
                    const std::function<void(const IVec&, Real)>& fn) {
    TargetCoords t = target_coords(basis, shift);
    Real r2 = radius * radius;
    enum_gs(gs_view(basis), t.tc.data(), t.perp2, r2, fn);
}

}  // namespace pasieve
