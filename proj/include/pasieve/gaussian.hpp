#pragma once

#include <cmath>
#include <memory>
#include <unordered_map>

#include "pasieve/core.hpp"
#include "pasieve/rng.hpp"

namespace pasieve {

struct GaussianParam {
    Real s = 1;
};

// Gaussian mass exp(-pi |x|^2 / s^2), taking the squared norm directly.
inline Real rho_norm2(Real norm2, Real s) { return std::exp(-kPi * norm2 / (s * s)); }
Real rho(const RVec& x, Real s);

// Truncated Gaussian mass of L - t: the sum over all lattice points inside an
// enumeration ball whose radius is grown until a Banaszczyk-style tail bound
// certifies a relative error below eps_rel.
struct MassResult {
    Real value = 0;
    Real rel_error = 0;
    Real radius = 0;
    u64 points = 0;
};
MassResult mass_truncated(const LatticeBasis& basis, const Shift& shift, Real s,
                          Real eps_rel = 1e-9);

// Exact (truncation-controlled) masses of all 2^n cosets 2L + c - t.
struct CosetMassTable {
    Real s = 1;
    Real eps = 0;
    int dim = 0;
    RVec masses;  // indexed by label bits
    Real total = 0;
    Real p_max = 0;
    Real p_col = 0;

    Real mass(const CosetLabel& c) const { return masses[c.bits]; }
};
CosetMassTable coset_masses(const LatticeBasis& basis, const Shift& shift, Real s,
                            Real eps_rel = 1e-9, int cap_dim = 14);
std::string coset_table_to_json(const CosetMassTable& table);
CosetMassTable coset_table_from_json(const std::string& text);

// Klein/GPV sampler for D_{L-t,s}: nested exact inverse-CDF discrete
// Gaussians over Z along the Gram-Schmidt directions. Window half-width
// ceil(12*sigma_i)+1 keeps the per-sample truncated tail below 2^-64.
// Below the validity threshold the conditional normalizers wobble with the
// walk, which is why correctness is certified statistically in the tests.
class KleinSampler {
  public:
    KleinSampler(const LatticeBasis& basis, const Shift& shift, Real s);

    LatticePoint sample(Rng& rng) const;

    Real s() const { return s_; }
    // C * sqrt(log n) * max |bstar_i| with C = 10; a warning level, not a gate
    Real validity_threshold() const;

  private:
    struct Table {
        i64 kmin = 0;
        RVec cdf;
    };
    const Table& table_for(int level, Real center) const;

    const LatticeBasis& basis_;
    Real s_;
    RVec tc_;     // target coordinates in the GS frame
    RVec sigma_;  // per-level 1-D parameter
    mutable std::vector<std::unordered_map<u64, Table>> memo_;
};

LatticePoint klein_sample(const LatticeBasis& basis, const Shift& shift, Real s, Rng& rng);

// Pairs with coset labels drawn proportionally to squared coset masses and
// two independent D_{2L+c-t,s} points per drawn label; consecutive points of
// the returned list form the pairs.
SampleList squared_coset_sampler(const CosetMassTable& table, size_t m_pairs,
                                 const LatticeBasis& basis, const Shift& shift, Rng& rng);

}  // namespace pasieve
