#pragma once

#include <functional>

#include "pasieve/core.hpp"

namespace pasieve {

// Dimension cap for exhaustive enumeration; GSL_ENUM_CAP overrides.
int enumeration_cap();

// View over Gram-Schmidt data of k basis columns.
struct GsView {
    int k = 0;
    std::function<Real(int j, int i)> mu;  // coefficient of bstar_i in b_j, i < j
    std::function<Real(int)> bnorm2;
};

GsView gs_view(const LatticeBasis& basis);

// Depth-first Fincke-Pohst enumeration over integer coefficient vectors:
// visits every a with perp2 + sum_i bnorm2(i) * (a_i + sum_{j>i} mu(j,i) a_j
// - tc_i)^2 <= radius2. The callback may shrink radius2 (search-to-improve).
// tc == nullptr means a zero target. Visiting order is deterministic.
void enum_gs(const GsView& gs, const Real* tc, Real perp2, Real& radius2,
             const std::function<void(const IVec&, Real)>& fn);

// Coordinates of the shift target in the Gram-Schmidt frame plus the squared
// distance of the target from the basis span.
struct TargetCoords {
    RVec tc;
    Real perp2 = 0;
};
TargetCoords target_coords(const LatticeBasis& basis, const Shift& shift);

// All lattice points of B*a - t with norm <= radius (float test with a hair
// of slack; callers needing exactness re-check with exact_norm2).
void enumerate_ball(const LatticeBasis& basis, const Shift& shift, Real radius,
                    const std::function<void(const IVec&, Real)>& fn);

}  // namespace pasieve
