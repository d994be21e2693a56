#include "pasieve/solvers.hpp"

#include <cmath>
#include <optional>
#include <thread>

#include "json.hpp"

namespace pasieve {

namespace {

struct Candidate {
    IVec coeffs;  // over the original basis
    ExactNorm2 norm2;
};

struct JobResult {
    std::optional<Candidate> best;
    ScheduleTraceEntry trace;
};

// svp: smaller norm wins, ties to the canonical witness; cvp: plain lex
bool candidate_better(const Candidate& cand, const Candidate& inc, bool svp) {
    if (cand.norm2 < inc.norm2) return true;
    if (inc.norm2 < cand.norm2) return false;
    return svp ? canonical_witness_better(cand.coeffs, inc.coeffs) : lex_less(cand.coeffs, inc.coeffs);
}

void run_jobs(int threads, size_t count, const std::function<void(size_t)>& work) {
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

Real svp_window_parameter(int n) {
    return std::sqrt(std::pow(2.0L, 0.198L) * kPi * std::exp(1.0L) / n);
}

SolverResult solve_svp(const LatticeBasis& basis, const SolverParams& params) {
    int n = basis.rank();
    u64 M = params.M ? params.M : (u64{1} << (n + 4));
    int ell = params.ell >= 0 ? params.ell : 3;
    int u = params.u >= 2 ? params.u : std::max(2, n);
    Real ratio = params.schedule_ratio > 0 ? params.schedule_ratio : 1.0L / 1.01L;
    int count = params.schedule_count;
    if (count <= 0)
        count = static_cast<int>(ceill((n / 2.0L) * std::log(2.0L) / -std::log(ratio))) + 2;

    Real lam_hat = lambda1_estimate(basis);
    Reduced red = hkz_reduce(basis, ReductionConfig{.delta = 0.99, .u = u});
    Real c_win = svp_window_parameter(n);
    Real lift = std::pow(2.0L, ell / 2.0L);
    Shift zero = zero_shift(basis.ambient_dim());

    size_t jobs = static_cast<size_t>(count) * std::max(1, params.trials);
    std::vector<JobResult> results(jobs);
    run_jobs(params.threads, jobs, [&](size_t job) {
        int trial = static_cast<int>(job) / count;
        int i = static_cast<int>(job) % count;
        // anchor so that s_i / 2^{ell/2} sweeps the whole window bracket
        Real s_final = c_win * lam_hat * 1.01L * std::pow(ratio, static_cast<Real>(i));
        Real s_i = lift * s_final;
        Rng rng(params.seed, job);
        StartOptions opts;
        opts.enforce_precondition = false;  // the sweep leaves the guaranteed region by design
        opts.reduced = &red;
        StartOutput start = prepare_start(basis, zero, M, u, s_i, rng, opts);

        std::vector<StepStat>* trace_steps = nullptr;
        JobResult& out = results[job];
        if (params.collect_trace) {
            out.trace.index = i;
            out.trace.trial = trial;
            out.trace.s = static_cast<double>(s_i);
            out.trace.m_start = M;
            trace_steps = &out.trace.steps;
        }
        SampleList list = reject_and_average(start.sublattice, start.shifted, start.samples, ell,
                                             trivial_rejection(), rng, trace_steps);
        for (auto& p : list.points) {
            bool zero_vec = true;
            for (i64 v : p.coeffs)
                if (v) {
                    zero_vec = false;
                    break;
                }
            if (zero_vec) continue;
            Candidate cand;
            cand.coeffs = imat_mul_vec(start.sublattice_coeffs, p.coeffs);
            cand.norm2 = exact_norm2(basis, zero, LatticePoint{cand.coeffs});
            if (!out.best || candidate_better(cand, *out.best, true)) out.best = std::move(cand);
        }
        if (params.collect_trace) {
            out.trace.has_candidate = out.best.has_value();
            if (out.best)
                out.trace.min_norm = static_cast<double>(
                    norm(basis, zero, LatticePoint{out.best->coeffs}));
        }
    });

    SolverResult result;
    result.seed = params.seed;
    result.M = M;
    result.ell = ell;
    std::optional<Candidate> best;
    for (size_t job = 0; job < jobs; ++job) {
        if (params.collect_trace) result.trace.push_back(std::move(results[job].trace));
        if (results[job].best && (!best || candidate_better(*results[job].best, *best, true))) {
            best = results[job].best;
            result.schedule_index = static_cast<int>(job) % count;
            result.trial = static_cast<int>(job) / count;
        }
    }
    if (!best) throw Error("no candidate found (increase M)");
    result.vector = LatticePoint{canonical_sign(best->coeffs)};
    result.norm = norm(basis, zero, result.vector);
    return result;
}

SolverResult solve_cvp(const LatticeBasis& basis, const Shift& target, const SolverParams& params) {
    int n = basis.rank();
    u64 M = params.M ? params.M : (u64{1} << (n + 4));
    int ell = params.ell >= 0 ? params.ell : (n + 3) / 4;
    int u = params.u >= 2 ? params.u : std::max(2, n);
    Real ratio = params.schedule_ratio > 0 ? params.schedule_ratio : 0.5L;

    SolverResult result;
    result.seed = params.seed;
    result.M = M;
    result.ell = ell;

    // t in L exactly: Babai on the reduced basis finds it, distance 0
    {
        Reduced lll = lll_reduce(basis);
        LatticePoint p = babai_nearest_plane(lll.basis, target);
        ExactNorm2 n2 = exact_norm2(lll.basis, target, p);
        if (n2.num == 0) {
            result.vector = LatticePoint{imat_mul_vec(lll.transform, p.coeffs)};
            result.norm = 0;
            result.schedule_index = 0;
            return result;
        }
    }

    Real d_hat = dist_estimate(basis, target);
    int count = params.schedule_count;
    if (count <= 0) {
        // sweep the final parameter from far above the distance bracket to
        // well below it; the paper-scale count n stalls at desk dimensions
        Real span = std::log(400.0L * n * n) / std::log(2.0L) + (n - ell) / 2.0L;
        count = std::max(n, static_cast<int>(ceill(span * std::log(2.0L) / -std::log(ratio))) + 1);
    }

    Reduced red = hkz_reduce(basis, ReductionConfig{.delta = 0.99, .u = u});
    size_t jobs = static_cast<size_t>(count) * std::max(1, params.trials);
    std::vector<JobResult> results(jobs);
    run_jobs(params.threads, jobs, [&](size_t job) {
        int trial = static_cast<int>(job) / count;
        int i = static_cast<int>(job) % count;
        Real s_i = 20.0L * n * n * std::pow(ratio, static_cast<Real>(i + 1)) * d_hat;
        Rng rng(params.seed, job);
        StartOptions opts;
        opts.enforce_precondition = false;
        opts.reduced = &red;
        StartOutput start = prepare_start(basis, target, M, u, s_i, rng, opts);

        std::vector<StepStat>* trace_steps = nullptr;
        JobResult& out = results[job];
        if (params.collect_trace) {
            out.trace.index = i;
            out.trace.trial = trial;
            out.trace.s = static_cast<double>(s_i);
            out.trace.m_start = M;
            trace_steps = &out.trace.steps;
        }
        SampleList list = reject_and_average(start.sublattice, start.shifted, start.samples, ell,
                                             trivial_rejection(), rng, trace_steps);
        for (auto& p : list.points) {
            Candidate cand;
            // X = B' z - y - t, candidate lattice vector v = B' z - y
            cand.coeffs = imat_mul_vec(start.sublattice_coeffs, p.coeffs);
            for (int j = 0; j < n; ++j) cand.coeffs[j] += start.y_coeffs[j];
            cand.norm2 = exact_norm2(basis, target, LatticePoint{cand.coeffs});
            if (!out.best || candidate_better(cand, *out.best, false)) out.best = std::move(cand);
        }
        if (params.collect_trace) {
            out.trace.has_candidate = out.best.has_value();
            if (out.best)
                out.trace.min_norm = static_cast<double>(
                    norm(basis, target, LatticePoint{out.best->coeffs}));
        }
    });

    std::optional<Candidate> best;
    for (size_t job = 0; job < jobs; ++job) {
        if (params.collect_trace) result.trace.push_back(std::move(results[job].trace));
        if (results[job].best && (!best || candidate_better(*results[job].best, *best, false))) {
            best = results[job].best;
            result.schedule_index = static_cast<int>(job) % count;
            result.trial = static_cast<int>(job) / count;
        }
    }
    if (!best) throw Error("no candidate found (increase M)");
    result.vector = LatticePoint{best->coeffs};
    result.norm = norm(basis, target, result.vector);
    return result;
}

std::string solver_result_to_json(const SolverResult& result, const std::string& problem, int dim,
                                  bool include_trace) {
    nlohmann::json j;
    j["problem"] = problem;
    j["dim"] = dim;
    j["norm"] = static_cast<double>(result.norm);
    j["coeffs"] = result.vector.coeffs;
    j["schedule_index"] = result.schedule_index;
    j["trial"] = result.trial;
    j["seed"] = result.seed;
    j["params"] = {{"M", result.M}, {"ell", result.ell}};
    nlohmann::json trace = nlohmann::json::array();
    if (include_trace) {
        for (auto& entry : result.trace) {
            nlohmann::json steps = nlohmann::json::array();
            for (auto& st : entry.steps)
                steps.push_back({{"step", st.step},
                                 {"M_in", st.m_in},
                                 {"M_out", st.m_out},
                                 {"min_norm", static_cast<double>(st.min_norm)},
                                 {"coset_histogram_digest", st.coset_histogram_digest}});
            trace.push_back({{"index", entry.index},
                             {"trial", entry.trial},
                             {"s", entry.s},
                             {"M_start", entry.m_start},
                             {"steps", steps},
                             {"min_norm", entry.min_norm},
                             {"has_candidate", entry.has_candidate}});
        }
    }
    j["trace"] = trace;
    return j.dump(2);
}

}  // namespace pasieve
