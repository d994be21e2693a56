#pragma once

#include <functional>
#include <optional>

#include "pasieve/gaussian.hpp"
#include "pasieve/reduction.hpp"

namespace pasieve {

// Groups points by coset label in arrival order and replaces each completed
// disjoint pair by its midpoint; per-coset odd leftovers are dropped. Output
// length is exactly sum_c floor(T_c / 2).
SampleList pair_and_average(const SampleList& list);

// Maps a list of coset labels to a subset of indices. May be randomized, may
// never look at coefficient vectors.
using RejectionFn = std::function<std::vector<size_t>(const std::vector<CosetLabel>&, Rng&)>;

RejectionFn trivial_rejection();
RejectionFn reject_everything();

// Index-level realization of squared-coset-weight pair selection: draws
// target pair counts proportional to squared coset masses (capped by
// availability) and accepts the earliest arrivals in each chosen coset.
// One table per step; reused cyclically if the sieve runs longer.
RejectionFn make_square_sampler_rejection(std::vector<CosetMassTable> tables, Real kappa);

struct SieveConfig {
    int ell = 0;
    Real kappa = 8;
    u64 M = 0;
    u64 seed = 0;
};

struct StepStat {
    int step = 0;
    u64 m_in = 0;
    u64 m_out = 0;
    Real min_norm = 0;
    u64 coset_histogram_digest = 0;
};

// ell rounds of: labels -> f -> pair_and_average on the accepted sublist.
// f == trivial_rejection() is the no-rejection pipeline.
SampleList reject_and_average(const LatticeBasis& basis, const Shift& shift, SampleList list,
                              int ell, const RejectionFn& f, Rng& rng,
                              std::vector<StepStat>* trace = nullptr);

struct StartOutput {
    LatticeBasis sublattice;  // admitted prefix of the reduced basis (rank may be 0)
    IMat sublattice_coeffs;   // its columns over the original basis
    IVec y_coeffs;            // decoded offset y over the original basis
    Shift shifted;            // y + t, the shift context for the samples
    SampleList samples;       // coefficients over the sublattice columns
    Real s_hat = 0;
    Real admission_radius = 0;
    bool precondition_certified = false;
    std::string warning;
};

struct StartOptions {
    // Solvers sweep s_hat through values below the guarantee on purpose and
    // switch enforcement off; the public contract keeps it on.
    bool enforce_precondition = true;
    const Reduced* reduced = nullptr;  // optional precomputed HKZ reduction
};

// Shifted-sublattice start: reduce, admit the Gram-Schmidt prefix below
// r = 10 s_hat / sqrt(log n), decode the projected target on the tail block,
// then draw M samples from D_{L' - y - t, s_hat}.
StartOutput prepare_start(const LatticeBasis& basis, const Shift& shift, u64 M, int u, Real s_hat,
                          Rng& rng, const StartOptions& opts = {});

// Sample-count formulas. required_M is reported, never enforced: at paper
// scale it dwarfs any desk-size list.
u64 required_M(const CosetMassTable& table, int ell, Real kappa);
u64 predicted_M_prime(const LatticeBasis& basis, const Shift& shift, Real s, int ell, Real kappa,
                      u64 M, Real eps_rel = 1e-9, int cap_dim = 14);

}  // namespace pasieve
