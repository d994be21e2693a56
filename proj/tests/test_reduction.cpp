#include "doctest.h"
#include "pasieve/enumerate.hpp"
#include "pasieve/reduction.hpp"
#include "pasieve/verify.hpp"

using namespace pasieve;

TEST_CASE("lll leaves the identity alone") {
    LatticeBasis id(IMat::identity(4), 1);
    Reduced r = lll_reduce(id);
    CHECK(r.basis == id);
    CHECK(is_unimodular(r.transform));
}

TEST_CASE("lll finds the short vector in a skewed 2d basis") {
    // columns (1,0) and (100,1)
    IMat m(2, 2);
    m.at(0, 0) = 1;
    m.at(1, 0) = 0;
    m.at(0, 1) = 100;
    m.at(1, 1) = 1;
    LatticeBasis b(std::move(m), 1);
    Reduced r = lll_reduce(b);
    CHECK(is_unimodular(r.transform));
    CHECK(norm(r.basis, zero_shift(2), {{1, 0}}) == doctest::Approx(1.0));
    CHECK(enum_svp(b).value == doctest::Approx(1.0));
}

TEST_CASE("lll output spans the same lattice") {
    for (u64 seed : {21ull, 22ull, 23ull}) {
        LatticeBasis b = gen_random_lattice(8, LatticeStyle::UniformInteger, seed);
        Reduced r = lll_reduce(b);
        CHECK(is_unimodular(r.transform));
        CHECK(imat_mul(b.nums(), r.transform) == r.basis.nums());
    }
}

TEST_CASE("lambda1_estimate brackets the exact optimum") {
    CHECK(lambda1_estimate(LatticeBasis(IMat::identity(6), 1)) == doctest::Approx(1.0));
    for (u64 seed = 31; seed < 41; ++seed) {
        int n = 4 + static_cast<int>(seed % 5);
        LatticeBasis b = gen_random_lattice(n, LatticeStyle::UniformInteger, seed);
        Real exact = enum_svp(b).value;
        Real est = lambda1_estimate(b);
        CHECK(est >= exact * (1 - 1e-12L));
        CHECK(est <= std::pow(2.0L, n / 2.0L) * exact * (1 + 1e-12L));
    }
}

TEST_CASE("estimates scale exactly with the basis") {
    LatticeBasis b = gen_random_lattice(5, LatticeStyle::UniformInteger, 77);
    IMat scaled = b.nums();
    for (i64& v : scaled.a) v *= 3;
    LatticeBasis b3(std::move(scaled), 1);
    CHECK(lambda1_estimate(b3) == doctest::Approx(3 * lambda1_estimate(b)).epsilon(1e-12));

    Shift t{{1, 2, 3, 4, 5}, 7};
    Shift t3{{3, 6, 9, 12, 15}, 7};
    CHECK(dist_estimate(b3, t3) == doctest::Approx(3 * dist_estimate(b, t)).epsilon(1e-12));
}

TEST_CASE("babai on an orthogonal basis rounds coordinatewise") {
    LatticeBasis z2(IMat::identity(2), 1);
    Shift t{{4, 6}, 10};  // (0.4, 0.6)
    LatticePoint p = babai_nearest_plane(z2, t);
    CHECK(p.coeffs == IVec{0, 1});
    CHECK(norm(z2, t, p) == doctest::Approx(std::sqrt(0.32)));
}

TEST_CASE("babai is exact on lattice targets") {
    LatticeBasis b = gen_random_lattice(5, LatticeStyle::UniformInteger, 5);
    IVec a{3, -2, 0, 1, 4};
    IVec t_num = imat_mul_vec(b.nums(), a);
    Shift t{t_num, b.den()};
    CHECK(dist_estimate(b, t) == doctest::Approx(0.0));
}

TEST_CASE("babai distance brackets the exact distance") {
    for (u64 seed = 51; seed < 59; ++seed) {
        int n = 3 + static_cast<int>(seed % 4);
        LatticeBasis b = gen_random_lattice(n, LatticeStyle::UniformInteger, seed);
        Shift t;
        t.den = 10;
        Rng rng(seed);
        t.num.resize(n);
        for (int i = 0; i < n; ++i) t.num[i] = rng.uniform_int(-20, 20);
        Real exact = enum_cvp(b, t).value;
        Real est = dist_estimate(b, t);
        CHECK(est >= exact * (1 - 1e-12L));
        CHECK(est <= std::pow(2.0L, n / 2.0L) * exact * (1 + 1e-9L));
    }
}

TEST_CASE("hkz reduction attains lambda1 and the full projection profile") {
    LatticeBasis id(IMat::identity(5), 1);
    CHECK(hkz_reduce(id).basis == id);

    for (u64 seed : {61ull, 62ull, 63ull}) {
        int n = 6;
        LatticeBasis b = gen_random_lattice(n, LatticeStyle::UniformInteger, seed);
        Reduced r = hkz_reduce(b);
        CHECK(is_unimodular(r.transform));
        CHECK(imat_mul(b.nums(), r.transform) == r.basis.nums());
        CHECK(std::sqrt(r.basis.bstar_norm2(0)) == doctest::Approx(enum_svp(b).value));

        // per-projection optimality: bstar_i is shortest in the projected lattice
        for (int lvl = 0; lvl < n; ++lvl) {
            GsView view;
            view.k = n - lvl;
            const LatticeBasis& rb = r.basis;
            view.mu = [&rb, lvl](int j, int i) { return rb.mu(j + lvl, i + lvl); };
            view.bnorm2 = [&rb, lvl](int i) { return rb.bstar_norm2(i + lvl); };
            Real best = rb.bstar_norm2(lvl);
            Real radius2 = best * (1 - 1e-9L);
            bool found_shorter = false;
            enum_gs(view, nullptr, 0, radius2, [&](const IVec& a, Real n2) {
                for (i64 v : a)
                    if (v) {
                        if (n2 < best * (1 - 1e-9L)) found_shorter = true;
                        return;
                    }
            });
            CHECK_FALSE(found_shorter);
        }
    }
}

TEST_CASE("hkz refuses dimensions above the enumeration cap") {
    LatticeBasis b = gen_random_lattice(6, LatticeStyle::UniformInteger, 3);
    ReductionConfig cfg;
    cfg.enum_cap = 5;
    CHECK_THROWS_WITH_AS(hkz_reduce(b, cfg), "enumeration cap exceeded", Error);
}
