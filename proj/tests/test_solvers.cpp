#include "doctest.h"
#include "pasieve/solvers.hpp"
#include "pasieve/verify.hpp"

using namespace pasieve;

TEST_CASE("solve_svp finds the unit vector on Z^4") {
    LatticeBasis z4(IMat::identity(4), 1);
    SolverParams params;
    params.seed = 7;
    SolverResult r = solve_svp(z4, params);
    CHECK(r.norm == doctest::Approx(1.0));
    ExactNorm2 n2 = exact_norm2(z4, zero_shift(4), r.vector);
    CHECK(n2.num == 1);
}

TEST_CASE("solve_svp is scale equivariant with the same seed") {
    LatticeBasis b = gen_random_lattice(4, LatticeStyle::UniformInteger, 19);
    IMat scaled = b.nums();
    for (i64& v : scaled.a) v *= 7;
    LatticeBasis b7(std::move(scaled), 1);
    SolverParams params;
    params.seed = 33;
    params.M = 128;
    SolverResult r1 = solve_svp(b, params);
    SolverResult r7 = solve_svp(b7, params);
    CHECK(r7.vector.coeffs == r1.vector.coeffs);
    CHECK(static_cast<double>(r7.norm) == doctest::Approx(static_cast<double>(7 * r1.norm)));
}

TEST_CASE("solve_svp is deterministic across thread counts") {
    LatticeBasis b = gen_random_lattice(5, LatticeStyle::UniformInteger, 23);
    SolverParams p1;
    p1.seed = 11;
    p1.M = 256;
    SolverParams p4 = p1;
    p4.threads = 4;
    SolverResult r1 = solve_svp(b, p1);
    SolverResult r4 = solve_svp(b, p4);
    CHECK(r1.vector.coeffs == r4.vector.coeffs);
    CHECK(r1.schedule_index == r4.schedule_index);
    SolverResult r1again = solve_svp(b, p1);
    CHECK(r1again.vector.coeffs == r1.vector.coeffs);
}

TEST_CASE("solve_svp result matches enumeration on a small random instance") {
    LatticeBasis b = gen_random_lattice(4, LatticeStyle::UniformInteger, 29);
    SolverParams params;
    params.seed = 3;
    SolverResult r = solve_svp(b, params);
    CHECK(static_cast<double>(r.norm) ==
          doctest::Approx(static_cast<double>(enum_svp(b).value)));
}

TEST_CASE("solve_cvp returns the exact point for lattice targets") {
    LatticeBasis b = gen_random_lattice(4, LatticeStyle::UniformInteger, 41);
    IVec a{2, -1, 3, 0};
    Shift t{imat_mul_vec(b.nums(), a), b.den()};
    SolverParams params;
    params.seed = 5;
    SolverResult r = solve_cvp(b, t, params);
    CHECK(r.norm == 0);
    CHECK(r.vector.coeffs == a);
}

TEST_CASE("solve_cvp on the orthogonal example") {
    LatticeBasis z2(IMat::identity(2), 1);
    Shift t{{3, 3}, 10};
    SolverParams params;
    params.seed = 13;
    SolverResult r = solve_cvp(z2, t, params);
    CHECK(r.vector.coeffs == IVec{0, 0});
    CHECK(static_cast<double>(r.norm) == doctest::Approx(std::sqrt(0.18)));
}

TEST_CASE("solver json carries the contract fields") {
    LatticeBasis z2(IMat::identity(2), 1);
    SolverParams params;
    params.seed = 2;
    SolverResult r = solve_svp(z2, params);
    std::string j = solver_result_to_json(r, "svp", 2, false);
    CHECK(j.find("\"problem\": \"svp\"") != std::string::npos);
    CHECK(j.find("\"coeffs\"") != std::string::npos);
    CHECK(j.find("\"schedule_index\"") != std::string::npos);
}

TEST_CASE("doubling M does not hurt success, desk scale") {
    // scaled-down version of the monotonicity property: n=4, 30 instances
    int n = 4, instances = 30;
    int wins_small = 0, wins_big = 0;
    for (int i = 0; i < instances; ++i) {
        LatticeBasis b = gen_random_lattice(n, LatticeStyle::UniformInteger, 600 + i);
        EnumResult oracle = enum_svp(b);
        SolverParams small;
        small.seed = derive_seed(71, i);
        small.M = 64;
        small.ell = 2;
        SolverParams big = small;
        big.M = 128;
        if (exact_norm2(b, zero_shift(n), solve_svp(b, small).vector) == oracle.norm2) ++wins_small;
        if (exact_norm2(b, zero_shift(n), solve_svp(b, big).vector) == oracle.norm2) ++wins_big;
    }
    Real ps = static_cast<Real>(wins_small) / instances;
    Real pb = static_cast<Real>(wins_big) / instances;
    Real sigma = std::sqrt((ps * (1 - ps) + pb * (1 - pb)) / instances + 1e-9L);
    CHECK(pb >= ps - 3 * sigma);
}
