#pragma once

#include <map>

#include "pasieve/solvers.hpp"

namespace pasieve {

struct EmpiricalDist {
    std::map<IVec, u64> counts;
    u64 total = 0;

    void add(const IVec& key) {
        ++counts[key];
        ++total;
    }
};

// Truncated exact PMF over coefficient vectors, missing mass < support_eps.
using Pmf = std::map<IVec, Real>;

Pmf exact_dgs_pmf(const LatticeBasis& basis, const Shift& shift, Real s, Real support_eps = 1e-9);

// PMF of D_{2L + c - t, s} expressed in L-coefficients (all congruent to c).
Pmf coset_dgs_pmf(const LatticeBasis& basis, const Shift& shift, const CosetLabel& c, Real s,
                  Real support_eps = 1e-9);

Real tv_distance(const EmpiricalDist& emp, const Pmf& pmf);

// Expected total-variation of an N-sample empirical distribution against its
// own source pmf (multinomial noise floor), with its standard deviation.
struct TvFloor {
    Real mean = 0;
    Real sd = 0;
};
TvFloor tv_noise_floor(const Pmf& pmf, u64 samples);

struct ChiSquare {
    Real stat = 0;
    int df = 0;
    Real p_value = 1;
    u64 bins = 0;
};
// Pools cells with expected count below 5 into one tail bin.
ChiSquare chi_square_test(const EmpiricalDist& emp, const Pmf& pmf);

// Regularized upper incomplete gamma Q(a, x), the chi-square tail.
Real gamma_q(Real a, Real x);

struct EnumResult {
    Real value = 0;  // lambda_1 or dist
    LatticePoint witness;
    ExactNorm2 norm2;
};

// Exact optima by depth-first enumeration on an LLL-reduced basis.
EnumResult enum_svp(const LatticeBasis& basis);
EnumResult enum_cvp(const LatticeBasis& basis, const Shift& shift);

// Independent brute-force oracle: every coefficient vector with |a_i| <= bound
// on the basis as given. Exact integer arithmetic throughout.
EnumResult box_search_svp(const LatticeBasis& basis, i64 bound = 3);
EnumResult box_search_cvp(const LatticeBasis& basis, const Shift& shift, i64 bound = 3);

struct IdentityReport {
    Real eq1_max_rel_dev = 0;       // rotation identity, pointwise
    Real collision_rel_dev = 0;     // sum of squared coset masses identity
    Real max_coset_slack = 0;       // squared-max inequality, relative slack >= 0 required
    Real loss_product_slack = 0;    // telescoped product inequality, >= 0 required
    bool pass = false;
};
IdentityReport check_identities(const LatticeBasis& basis, const Shift& shift, Real s, u64 seed);

struct MixtureReport {
    std::vector<Real> coset_p_values;  // chi-square per conditioned output coset
    std::vector<u64> coset_counts;
    u64 skipped_cosets = 0;  // conditioned count below 100
    Real max_weight_zscore = 0;
    bool pass = false;
};
MixtureReport conditional_mixture_test(const LatticeBasis& basis, const Shift& shift, Real s,
                                       u64 pairs, u64 seed, Real p_threshold = 0.001L);

struct DominanceReport {
    std::vector<IVec> target_set;
    Real p_no_reject = 0;
    Real p_reject = 0;
    Real sigma_no_reject = 0;
    Real sigma_reject = 0;
    u64 reject_final_count = 0;
    bool pass = false;
};
// Runs the no-rejection pipeline against the squared-coset-weight rejection
// pipeline (realized per step by fresh squared-distribution draws, which has
// exactly the rejection procedure's output law) and compares containment
// probabilities of S = {+-shortest}.
DominanceReport dominance_experiment(const LatticeBasis& basis, int ell, u64 M, u64 trials,
                                     u64 seed);

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckLine> checks;

    bool pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

SuiteReport run_identity_suite(u64 seed = 20260801);
SuiteReport run_sampler_suite(u64 seed = 20260802);
SuiteReport run_mixture_suite(u64 seed = 20260803);
SuiteReport run_dominance_suite(u64 seed = 20260804);
SuiteReport run_oracle_suite(u64 seed = 20260805);
SuiteReport run_svp_e2e_suite(u64 seed = 20260806, int threads = 1);
SuiteReport run_cvp_e2e_suite(u64 seed = 20260807, int threads = 1);
SuiteReport run_window_suite(u64 seed = 20260808);

std::string suite_report_to_json(const SuiteReport& report);
void print_suite_report(const SuiteReport& report, std::ostream& os);

}  // namespace pasieve
