#pragma once

#include "pasieve/sieve.hpp"

namespace pasieve {

struct SolverParams {
    u64 M = 0;                // 0 = 2^{n+4}
    int ell = -1;             // -1 = 3 for SVP, ceil(n/4) for CVP
    int schedule_count = -1;  // -1 = exact sweep of the 2^{n/2} bracket
    Real schedule_ratio = 0;  // 0 = 1/1.01 for SVP, 1/2 for CVP
    int u = -1;               // -1 = max(2, n)
    u64 seed = 0;
    int trials = 1;
    int threads = 1;
    bool collect_trace = false;
};

struct ScheduleTraceEntry {
    int index = 0;
    int trial = 0;
    double s = 0;
    u64 m_start = 0;
    std::vector<StepStat> steps;
    double min_norm = 0;
    bool has_candidate = false;
};

struct SolverResult {
    LatticePoint vector;  // over the original basis
    Real norm = 0;
    int schedule_index = -1;
    int trial = 0;
    u64 seed = 0;
    u64 M = 0;
    int ell = 0;
    std::vector<ScheduleTraceEntry> trace;
};

// Parameter value at the center of the SVP search window for dimension n.
Real svp_window_parameter(int n);

SolverResult solve_svp(const LatticeBasis& basis, const SolverParams& params);
SolverResult solve_cvp(const LatticeBasis& basis, const Shift& target, const SolverParams& params);

std::string solver_result_to_json(const SolverResult& result, const std::string& problem, int dim,
                                  bool include_trace);

}  // namespace pasieve
