#pragma once

#include "pasieve/core.hpp"

namespace pasieve {

struct ReductionConfig {
    Real delta = 0.99;  // Lovasz constant, in (1/4, 1)
    int u = 2;          // block/quality parameter kept for threshold formulas
    int enum_cap = 0;   // 0 = use enumeration_cap()
};

// Reduced basis plus the unimodular column transform: reduced = original * transform.
struct Reduced {
    LatticeBasis basis;
    IMat transform;
};

Reduced lll_reduce(const LatticeBasis& basis, Real delta = 0.99);

// |b_1| of the LLL-reduced basis; lambda_1 <= estimate <= 2^{n/2} lambda_1.
Real lambda1_estimate(const LatticeBasis& basis);

// Nearest-plane decoding on the basis as given (callers wanting the 2^{n/2}
// guarantee pass an LLL-reduced basis).
LatticePoint babai_nearest_plane(const LatticeBasis& basis, const Shift& shift);

// |babai(t) - t| on the LLL-reduced basis; dist <= estimate <= 2^{n/2} dist.
Real dist_estimate(const LatticeBasis& basis, const Shift& shift);

// Exact HKZ via enumeration on projected lattices: |bstar_i| = lambda_1 of the
// i-th projection. Throws above the enumeration cap.
Reduced hkz_reduce(const LatticeBasis& basis, const ReductionConfig& config = {});

}  // namespace pasieve
