// Command-line front end: generation, solving, sampling, sieving, mass
// tables, and the verification suites, all reproducible from a RunManifest.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pasieve/solvers.hpp"
#include "pasieve/verify.hpp"

using namespace pasieve;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

u64 fnv1a_str(const std::string& s) {
    u64 h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string hex64(u64 v) {
    std::ostringstream os;
    os << std::hex << v;
    return os.str();
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

u64 materialize_seed(i64 seed_flag) {
    if (seed_flag >= 0) return static_cast<u64>(seed_flag);
    std::random_device rd;
    return (static_cast<u64>(rd()) << 32) ^ rd();
}

struct ManifestBuilder {
    std::string command;
    std::vector<std::string> argv;
    json parameters = json::object();
    u64 seed = 0;
    int threads = 1;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void arg(const std::string& flag, const std::string& value) {
        argv.push_back(flag);
        argv.push_back(value);
    }

    json build(const json& result) const {
        json m;
        m["command"] = command;
        std::vector<std::string> full{command};
        full.insert(full.end(), argv.begin(), argv.end());
        m["argv"] = full;
        m["parameters"] = parameters;
        m["seed"] = seed;
        m["threads"] = threads;
        m["versions"] = {{"pasieve", kVersion}, {"manifest_format", 1}};
        m["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        m["timestamp"] = iso_timestamp();
        m["result_digest"] = "fnv1a:" + hex64(fnv1a_str(result.dump()));
        return m;
    }
};

void emit(const json& result, const ManifestBuilder& mb, const std::string& json_path,
          bool result_to_stdout = true) {
    json doc = result;
    doc["manifest"] = mb.build(result);
    if (result_to_stdout) std::cout << doc.dump(2) << "\n";
    if (!json_path.empty()) {
        std::ofstream f(json_path);
        if (!f) throw Error("cannot write " + json_path);
        f << doc.dump(2) << "\n";
    }
    if (!result_to_stdout)  // keep the manifest visible somewhere
        std::cerr << doc["manifest"].dump() << "\n";
}

Shift parse_target_flag(const std::string& target, int dim) {
    std::vector<Rational> parts;
    std::string tok;
    std::istringstream is(target);
    while (std::getline(is, tok, ',')) parts.push_back(parse_rational(tok));
    if (static_cast<int>(parts.size()) != dim) throw Error("target dimension mismatch");
    Shift sh;
    sh.den = 1;
    for (auto& r : parts) sh.den = lcm64(sh.den, r.den);
    sh.num.resize(dim);
    for (int i = 0; i < dim; ++i) sh.num[i] = checked_mul(parts[i].num, sh.den / parts[i].den);
    return sh;
}

int dispatch(const std::vector<std::string>& args);

// ---------------------------------------------------------------- commands

int cmd_gen(int n, const std::string& style, i64 seed_flag, const std::string& out,
            bool as_json) {
    ManifestBuilder mb;
    mb.command = "gen";
    mb.seed = materialize_seed(seed_flag);
    LatticeStyle st = style == "knapsack" ? LatticeStyle::Knapsack : LatticeStyle::UniformInteger;
    if (style != "knapsack" && style != "uniform-integer") throw Error("unknown style: " + style);
    LatticeBasis basis = gen_random_lattice(n, st, mb.seed);
    std::string text = as_json ? serialize_instance_json(basis, std::nullopt) + "\n"
                               : serialize_basis_text(basis);
    {
        std::ofstream f(out);
        if (!f) throw Error("cannot write " + out);
        f << text;
    }
    mb.arg("--n", std::to_string(n));
    mb.arg("--style", style);
    mb.arg("--seed", std::to_string(mb.seed));
    mb.arg("--out", out);
    if (as_json) mb.argv.push_back("--emit-json-basis");
    mb.parameters = {{"n", n}, {"style", style}, {"seed", mb.seed}, {"out", out}};
    json result = {{"command", "gen"},
                   {"dim", n},
                   {"style", style},
                   {"path", out},
                   {"file_digest", "fnv1a:" + hex64(fnv1a_str(text))}};
    emit(result, mb, "");
    return 0;
}

SolverParams solver_params_from_flags(u64 seed, i64 M, int ell, int u, int trials, int threads,
                                      int schedule_count, double schedule_ratio, bool trace) {
    SolverParams p;
    p.seed = seed;
    if (M > 0) p.M = static_cast<u64>(M);
    p.ell = ell;
    p.u = u;
    p.trials = trials;
    p.threads = threads;
    p.schedule_count = schedule_count;
    p.schedule_ratio = static_cast<Real>(schedule_ratio);
    p.collect_trace = trace;
    return p;
}

int cmd_solve(bool cvp, const std::string& basis_path, const std::string& target, i64 M, int ell,
              int u, i64 seed_flag, int trials, int threads, int schedule_count,
              double schedule_ratio, bool trace, const std::string& json_path) {
    ManifestBuilder mb;
    mb.command = cvp ? "cvp" : "svp";
    mb.seed = materialize_seed(seed_flag);
    mb.threads = threads;
    Instance inst = load_instance(basis_path);
    Shift shift = inst.shift;
    if (!target.empty()) shift = parse_target_flag(target, inst.basis.ambient_dim());
    if (cvp && shift.is_zero() && target.empty())
        throw Error("cvp needs a target (--target or in the basis JSON)");

    SolverParams params = solver_params_from_flags(mb.seed, M, ell, u, trials, threads,
                                                   schedule_count, schedule_ratio, trace);
    SolverResult r = cvp ? solve_cvp(inst.basis, shift, params) : solve_svp(inst.basis, params);

    mb.arg("--basis", basis_path);
    if (!target.empty()) mb.arg("--target", target);
    mb.arg("--M", std::to_string(r.M));
    mb.arg("--ell", std::to_string(r.ell));
    if (u >= 2) mb.arg("--u", std::to_string(u));
    mb.arg("--seed", std::to_string(mb.seed));
    mb.arg("--trials", std::to_string(trials));
    mb.arg("--threads", std::to_string(threads));
    if (schedule_count > 0) mb.arg("--schedule-count", std::to_string(schedule_count));
    if (schedule_ratio > 0) mb.arg("--schedule-ratio", std::to_string(schedule_ratio));
    if (trace) mb.argv.push_back("--trace");
    mb.parameters = {{"basis", basis_path}, {"M", r.M},           {"ell", r.ell},
                     {"seed", mb.seed},     {"trials", trials},   {"u", u},
                     {"threads", threads},  {"target", target}};

    json result = json::parse(solver_result_to_json(r, cvp ? "cvp" : "svp",
                                                    inst.basis.rank(), trace));
    std::cerr << (cvp ? "cvp" : "svp") << ": norm " << static_cast<double>(r.norm)
              << " at schedule index " << r.schedule_index << "\n";
    emit(result, mb, json_path);
    return 0;
}

int cmd_sample(const std::string& basis_path, const std::string& target, double s, i64 count,
               i64 seed_flag, const std::string& json_path) {
    ManifestBuilder mb;
    mb.command = "sample";
    mb.seed = materialize_seed(seed_flag);
    Instance inst = load_instance(basis_path);
    Shift shift = inst.shift;
    if (!target.empty()) shift = parse_target_flag(target, inst.basis.ambient_dim());

    KleinSampler sampler(inst.basis, shift, static_cast<Real>(s));
    if (static_cast<Real>(s) < sampler.validity_threshold())
        std::cerr << "warning: s below the sampler validity threshold "
                  << static_cast<double>(sampler.validity_threshold()) << "\n";
    Rng rng(mb.seed);
    std::ostringstream lines;
    for (i64 i = 0; i < count; ++i) {
        LatticePoint p = sampler.sample(rng);
        for (size_t j = 0; j < p.coeffs.size(); ++j)
            lines << p.coeffs[j] << (j + 1 < p.coeffs.size() ? " " : "");
        lines << "\n";
    }
    std::cout << lines.str();

    mb.arg("--basis", basis_path);
    if (!target.empty()) mb.arg("--target", target);
    mb.arg("--s", std::to_string(s));
    mb.arg("--count", std::to_string(count));
    mb.arg("--seed", std::to_string(mb.seed));
    mb.parameters = {{"basis", basis_path}, {"s", s}, {"count", count}, {"seed", mb.seed}};
    json result = {{"command", "sample"},
                   {"count", count},
                   {"dump_digest", "fnv1a:" + hex64(fnv1a_str(lines.str()))}};
    emit(result, mb, json_path, /*result_to_stdout=*/false);
    return 0;
}

int cmd_sieve(const std::string& basis_path, const std::string& target, double s, i64 M, int ell,
              i64 seed_flag, bool trace, const std::string& json_path) {
    ManifestBuilder mb;
    mb.command = "sieve";
    mb.seed = materialize_seed(seed_flag);
    Instance inst = load_instance(basis_path);
    Shift shift = inst.shift;
    if (!target.empty()) shift = parse_target_flag(target, inst.basis.ambient_dim());

    KleinSampler sampler(inst.basis, shift, static_cast<Real>(s));
    Rng rng(mb.seed);
    SampleList list;
    list.points.reserve(static_cast<size_t>(M));
    for (i64 i = 0; i < M; ++i) list.points.push_back(sampler.sample(rng));

    std::vector<StepStat> steps;
    SampleList out = reject_and_average(inst.basis, shift, std::move(list), ell,
                                        trivial_rejection(), rng, &steps);

    Real min_norm = 0;
    bool first = true;
    for (auto& p : out.points) {
        Real n = norm(inst.basis, shift, p);
        if (first || n < min_norm) {
            min_norm = n;
            first = false;
        }
    }

    json final_list = json::array();
    bool truncated = out.size() > 1000;
    for (size_t i = 0; i < std::min<size_t>(out.size(), 1000); ++i)
        final_list.push_back(out.points[i].coeffs);
    json result = {{"command", "sieve"},   {"dim", inst.basis.rank()},
                   {"M_in", M},            {"M_out", out.size()},
                   {"min_norm", static_cast<double>(min_norm)},
                   {"final", final_list},  {"final_truncated", truncated}};
    if (trace) {
        json jt = json::array();
        for (auto& st : steps)
            jt.push_back({{"step", st.step},
                          {"M_in", st.m_in},
                          {"M_out", st.m_out},
                          {"min_norm", static_cast<double>(st.min_norm)},
                          {"coset_histogram_digest", hex64(st.coset_histogram_digest)}});
        result["trace"] = jt;
    }

    mb.arg("--basis", basis_path);
    if (!target.empty()) mb.arg("--target", target);
    mb.arg("--s", std::to_string(s));
    mb.arg("--M", std::to_string(M));
    mb.arg("--ell", std::to_string(ell));
    mb.arg("--seed", std::to_string(mb.seed));
    if (trace) mb.argv.push_back("--trace");
    mb.parameters = {{"basis", basis_path}, {"s", s},          {"M", M},
                     {"ell", ell},          {"seed", mb.seed}, {"target", target}};
    emit(result, mb, json_path);
    return 0;
}

int cmd_mass(const std::string& basis_path, const std::string& target, double s, double eps,
             int cap, const std::string& json_path) {
    ManifestBuilder mb;
    mb.command = "mass";
    mb.seed = 0;  // deterministic command, no randomness
    Instance inst = load_instance(basis_path);
    Shift shift = inst.shift;
    if (!target.empty()) shift = parse_target_flag(target, inst.basis.ambient_dim());

    CosetMassTable table =
        coset_masses(inst.basis, shift, static_cast<Real>(s), static_cast<Real>(eps), cap);
    json result = json::parse(coset_table_to_json(table));
    result["total"] = static_cast<double>(table.total);
    result["p_max"] = static_cast<double>(table.p_max);
    result["p_col"] = static_cast<double>(table.p_col);

    mb.arg("--basis", basis_path);
    if (!target.empty()) mb.arg("--target", target);
    mb.arg("--s", std::to_string(s));
    mb.arg("--eps", std::to_string(eps));
    mb.arg("--cap", std::to_string(cap));
    mb.parameters = {{"basis", basis_path}, {"s", s}, {"eps", eps}, {"cap", cap}};
    emit(result, mb, json_path);
    return 0;
}

int cmd_verify(const std::string& suite, i64 seed_flag, int threads,
               const std::string& json_path) {
    ManifestBuilder mb;
    mb.command = "verify";
    mb.seed = seed_flag >= 0 ? static_cast<u64>(seed_flag) : 0;  // suites have pinned defaults

    std::vector<SuiteReport> reports;
    auto want = [&](const std::string& name) { return suite == "all" || suite == name; };
    if (want("identities")) reports.push_back(seed_flag >= 0 ? run_identity_suite(mb.seed)
                                                             : run_identity_suite());
    if (want("sampler")) reports.push_back(seed_flag >= 0 ? run_sampler_suite(mb.seed)
                                                          : run_sampler_suite());
    if (want("mixture")) reports.push_back(seed_flag >= 0 ? run_mixture_suite(mb.seed)
                                                          : run_mixture_suite());
    if (want("dominance")) reports.push_back(seed_flag >= 0 ? run_dominance_suite(mb.seed)
                                                            : run_dominance_suite());
    if (want("oracle")) reports.push_back(seed_flag >= 0 ? run_oracle_suite(mb.seed)
                                                         : run_oracle_suite());
    if (reports.empty()) throw Error("unknown suite: " + suite);

    bool pass = true;
    json suites = json::array();
    for (auto& r : reports) {
        print_suite_report(r, std::cerr);
        suites.push_back(json::parse(suite_report_to_json(r)));
        pass = pass && r.pass();
    }
    json result = {{"command", "verify"}, {"suite", suite}, {"pass", pass}, {"suites", suites}};

    mb.arg("--suite", suite);
    if (seed_flag >= 0) mb.arg("--seed", std::to_string(mb.seed));
    mb.arg("--threads", std::to_string(threads));
    mb.threads = threads;
    mb.parameters = {{"suite", suite}, {"seed", mb.seed}, {"threads", threads}};
    emit(result, mb, json_path);
    return pass ? 0 : 1;
}

int cmd_rerun(const std::string& path, const std::string& json_path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    json doc = json::parse(f);
    json manifest = doc.contains("manifest") ? doc["manifest"] : doc;
    if (!manifest.contains("argv")) throw Error("no manifest argv in " + path);
    std::vector<std::string> args;
    for (auto& a : manifest["argv"]) args.push_back(a.get<std::string>());
    if (!json_path.empty()) {
        args.push_back("--json");
        args.push_back(json_path);
    }
    return dispatch(args);
}

// --------------------------------------------------------------- dispatch

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"pair-and-average sieve toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random lattice basis file");
    int gen_n = 4;
    std::string gen_style = "uniform-integer", gen_out = "basis.txt";
    i64 gen_seed = -1;
    bool gen_json = false;
    gen->add_option("--n", gen_n, "dimension")->required();
    gen->add_option("--style", gen_style, "uniform-integer | knapsack");
    gen->add_option("--seed", gen_seed, "seed (default: OS entropy)");
    gen->add_option("--out", gen_out, "output path")->required();
    gen->add_flag("--emit-json-basis", gen_json, "write the JSON basis format");

    // shared solver flags
    std::string basis_path, target, json_path;
    i64 M = 0, seed = -1, count = 100;
    int ell = -1, u = -1, trials = 1, threads = 1, schedule_count = -1, cap = 14;
    double s = 1.0, schedule_ratio = 0.0, eps = 1e-9;
    bool trace = false;

    auto add_common = [&](CLI::App* cmd, bool with_target) {
        cmd->add_option("--basis", basis_path, "basis file (text or JSON)")->required();
        if (with_target) cmd->add_option("--target", target, "target vector `x,y,...`");
        cmd->add_option("--json", json_path, "also write the output document to this file");
    };

    auto* svp = app.add_subcommand("svp", "shortest vector via the averaging sieve");
    add_common(svp, false);
    svp->add_option("--M", M, "samples per schedule step (default 2^{n+4})");
    svp->add_option("--ell", ell, "averaging steps (default 3)");
    svp->add_option("--u", u, "reduction quality parameter (default max(2,n))");
    svp->add_option("--seed", seed, "seed (default: OS entropy)");
    svp->add_option("--trials", trials, "independent repetitions");
    svp->add_option("--threads", threads, "worker threads");
    svp->add_option("--schedule-count", schedule_count, "schedule steps (default: exact sweep)");
    svp->add_option("--schedule-ratio", schedule_ratio, "schedule ratio (default 1/1.01)");
    svp->add_flag("--trace", trace, "record per-step trace");

    auto* cvp = app.add_subcommand("cvp", "approximate closest vector via the averaging sieve");
    add_common(cvp, true);
    cvp->add_option("--M", M, "samples per schedule step (default 2^{n+4})");
    cvp->add_option("--ell", ell, "averaging steps (default ceil(n/4))");
    cvp->add_option("--u", u, "reduction quality parameter (default max(2,n))");
    cvp->add_option("--seed", seed, "seed (default: OS entropy)");
    cvp->add_option("--trials", trials, "independent repetitions");
    cvp->add_option("--threads", threads, "worker threads");
    cvp->add_option("--schedule-count", schedule_count, "schedule steps");
    cvp->add_option("--schedule-ratio", schedule_ratio, "schedule ratio (default 1/2)");
    cvp->add_flag("--trace", trace, "record per-step trace");

    auto* sample = app.add_subcommand("sample", "draw discrete Gaussian samples");
    add_common(sample, true);
    sample->add_option("--s", s, "gaussian parameter")->required();
    sample->add_option("--count", count, "number of samples");
    sample->add_option("--seed", seed, "seed (default: OS entropy)");

    auto* sieve = app.add_subcommand("sieve", "run the averaging sieve on fresh samples");
    add_common(sieve, true);
    sieve->add_option("--s", s, "gaussian parameter")->required();
    sieve->add_option("--M", M, "input list size")->required();
    sieve->add_option("--ell", ell, "steps")->required();
    sieve->add_option("--seed", seed, "seed (default: OS entropy)");
    sieve->add_flag("--trace", trace, "emit per-step trace");

    auto* mass = app.add_subcommand("mass", "exact coset mass table");
    add_common(mass, true);
    mass->add_option("--s", s, "gaussian parameter")->required();
    mass->add_option("--eps", eps, "relative truncation tolerance");
    mass->add_option("--cap", cap, "dimension cap for the 2^n table");

    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all";
    verify->add_option("--suite", suite, "identities|sampler|mixture|dominance|oracle|all");
    verify->add_option("--seed", seed, "override the pinned suite seed");
    verify->add_option("--threads", threads, "worker threads");
    verify->add_option("--json", json_path, "also write the output document to this file");

    auto* rerun = app.add_subcommand("rerun", "re-run a command from its RunManifest");
    std::string rerun_path;
    rerun->add_option("manifest", rerun_path, "output document or manifest JSON")->required();
    rerun->add_option("--json", json_path, "also write the output document to this file");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (gen->parsed()) return cmd_gen(gen_n, gen_style, gen_seed, gen_out, gen_json);
    if (svp->parsed())
        return cmd_solve(false, basis_path, target, M, ell, u, seed, trials, threads,
                         schedule_count, schedule_ratio, trace, json_path);
    if (cvp->parsed())
        return cmd_solve(true, basis_path, target, M, ell, u, seed, trials, threads,
                         schedule_count, schedule_ratio, trace, json_path);
    if (sample->parsed()) return cmd_sample(basis_path, target, s, count, seed, json_path);
    if (sieve->parsed())
        return cmd_sieve(basis_path, target, s, M, ell, seed, trace, json_path);
    if (mass->parsed()) return cmd_mass(basis_path, target, s, eps, cap, json_path);
    if (verify->parsed()) return cmd_verify(suite, seed, threads, json_path);
    if (rerun->parsed()) return cmd_rerun(rerun_path, json_path);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return dispatch(args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
