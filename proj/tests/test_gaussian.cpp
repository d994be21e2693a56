#include <cmath>
#include <map>

#include "doctest.h"
#include "pasieve/gaussian.hpp"
#include "pasieve/sieve.hpp"
#include "pasieve/verify.hpp"

using namespace pasieve;

namespace {

// independent truncated-sum oracle for rho_s(kZ + off), terms to |k| = 12
Real line_mass(Real scale, Real offset, Real s) {
    Real sum = 0;
    for (int k = -12; k <= 12; ++k) {
        Real x = scale * k + offset;
        sum += std::exp(-kPi * x * x / (s * s));
    }
    return sum;
}

}  // namespace

TEST_CASE("rho point values") {
    CHECK(rho({0, 0}, 1) == doctest::Approx(1.0));
    CHECK(rho({1, 0}, 1) == doctest::Approx(std::exp(-kPi)));
    // rotation identity at a fixed point
    Real lhs = rho({1, 0}, 1) * rho({0, 1}, 1);
    Real rhs = rho({1, 1}, std::sqrt(2.0L)) * rho({1, -1}, std::sqrt(2.0L));
    CHECK(lhs == doctest::Approx(rhs));
    CHECK(lhs == doctest::Approx(std::exp(-2 * kPi)));
}

TEST_CASE("mass of Z at s=1 matches the series oracle") {
    LatticeBasis z1(IMat::identity(1), 1);
    MassResult m = mass_truncated(z1, zero_shift(1), 1, 1e-12L);
    CHECK(static_cast<double>(m.value) ==
          doctest::Approx(static_cast<double>(line_mass(1, 0, 1))).epsilon(1e-12));
    CHECK(static_cast<double>(m.value) == doctest::Approx(1.0864348112).epsilon(1e-9));
    CHECK(m.rel_error <= 1e-12L);
}

TEST_CASE("mass is monotone under sublattices") {
    LatticeBasis z1(IMat::identity(1), 1);
    IMat two(1, 1);
    two.at(0, 0) = 2;
    LatticeBasis z2(std::move(two), 1);
    for (Real s : {0.7L, 1.0L, 3.0L})
        CHECK(mass_truncated(z2, zero_shift(1), s).value <
              mass_truncated(z1, zero_shift(1), s).value);
}

TEST_CASE("mass of Z^2 factors as a product") {
    LatticeBasis z2(IMat::identity(2), 1);
    Real m2 = mass_truncated(z2, zero_shift(2), 1, 1e-12L).value;
    Real m1 = mass_truncated(LatticeBasis(IMat::identity(1), 1), zero_shift(1), 1, 1e-12L).value;
    CHECK(static_cast<double>(m2) == doctest::Approx(static_cast<double>(m1 * m1)).epsilon(1e-10));
}

TEST_CASE("growth bound: shifted mass at s >= 1 stays below s^n times the unit mass") {
    LatticeBasis b = gen_random_lattice(2, LatticeStyle::UniformInteger, 17);
    Shift t{{3, -7}, 10};
    Real base = mass_truncated(b, zero_shift(2), 1).value;
    for (Real s : {1.0L, 1.5L, 2.0L, 4.0L}) {
        Real shifted = mass_truncated(b, t, s).value;
        CHECK(shifted <= s * s * base * (1 + 1e-8L));
    }
}

TEST_CASE("coset masses on Z at s=1") {
    LatticeBasis z1(IMat::identity(1), 1);
    CosetMassTable table = coset_masses(z1, zero_shift(1), 1);
    CHECK(static_cast<double>(table.masses[0]) ==
          doctest::Approx(static_cast<double>(line_mass(2, 0, 1))).epsilon(1e-10));
    CHECK(static_cast<double>(table.masses[1]) ==
          doctest::Approx(static_cast<double>(line_mass(2, 1, 1))).epsilon(1e-10));
    // partition: coset masses add up to the full mass
    Real full = mass_truncated(z1, zero_shift(1), 1).value;
    CHECK(static_cast<double>(table.total) ==
          doctest::Approx(static_cast<double>(full)).epsilon(1e-10));
}

TEST_CASE("collision identity on Z^2 with a random shift") {
    LatticeBasis z2(IMat::identity(2), 1);
    Shift t{{3, 1}, 10};
    for (Real s : {0.7L, 1.0L, 2.0L}) {
        CosetMassTable table = coset_masses(z2, t, s, 1e-12L);
        Real lhs = 0;
        for (Real m : table.masses) lhs += m * m;
        Real rhs = mass_truncated(z2, zero_shift(2), s / std::sqrt(2.0L), 1e-12L).value *
                   mass_truncated(z2, t, s / std::sqrt(2.0L), 1e-12L).value;
        CHECK(std::fabs(lhs - rhs) / rhs <= 1e-8L);
    }
}

TEST_CASE("coset table caps the dimension") {
    LatticeBasis b(IMat::identity(4), 1);
    CHECK_THROWS_WITH_AS(coset_masses(b, zero_shift(4), 1, 1e-9L, 3), "coset table cap exceeded",
                         Error);
}

TEST_CASE("coset table json round trip") {
    LatticeBasis z2(IMat::identity(2), 1);
    CosetMassTable table = coset_masses(z2, zero_shift(2), 1.5L);
    CosetMassTable back = coset_table_from_json(coset_table_to_json(table));
    CHECK(back.dim == table.dim);
    for (size_t i = 0; i < table.masses.size(); ++i)
        CHECK(static_cast<double>(back.masses[i]) ==
              doctest::Approx(static_cast<double>(table.masses[i])));
}

TEST_CASE("klein on Z hits the exact zero probability") {
    LatticeBasis z1(IMat::identity(1), 1);
    KleinSampler sampler(z1, zero_shift(1), 1);
    Rng rng(2);
    const int N = 100000;
    int zeros = 0;
    for (int i = 0; i < N; ++i)
        if (sampler.sample(rng).coeffs[0] == 0) ++zeros;
    Real expected = 1 / line_mass(1, 0, 1);
    CHECK(static_cast<double>(expected) == doctest::Approx(0.92045).epsilon(1e-4));
    CHECK(std::fabs(static_cast<Real>(zeros) / N - expected) <= 0.005L);
}

TEST_CASE("klein is deterministic per seed") {
    LatticeBasis b = gen_random_lattice(4, LatticeStyle::UniformInteger, 31);
    Shift t{{1, 2, 3, 4}, 7};
    KleinSampler sampler(b, t, 3);
    Rng r1(99), r2(99);
    for (int i = 0; i < 50; ++i) CHECK(sampler.sample(r1).coeffs == sampler.sample(r2).coeffs);
}

TEST_CASE("klein is symmetric under negation for t = 0") {
    LatticeBasis z2(IMat::identity(2), 1);
    KleinSampler sampler(z2, zero_shift(2), 1.5L);
    Rng rng(5);
    const int N = 200000;
    std::map<IVec, int> counts;
    for (int i = 0; i < N; ++i) ++counts[sampler.sample(rng).coeffs];
    for (auto& [a, c] : counts) {
        if (c < 500) continue;
        IVec neg(a.size());
        for (size_t i = 0; i < a.size(); ++i) neg[i] = -a[i];
        int cn = counts.count(neg) ? counts[neg] : 0;
        Real p = static_cast<Real>(c) / N;
        Real sigma = std::sqrt(2 * p * (1 - p) / N);
        CHECK(std::fabs(static_cast<Real>(c - cn) / N) <= 3.5L * sigma + 1e-4L);
    }
}

TEST_CASE("large s makes coset labels uniform") {
    LatticeBasis z2(IMat::identity(2), 1);
    // the mass oracle certifies near-uniform coset masses at s = 100
    CosetMassTable table = coset_masses(z2, zero_shift(2), 100, 1e-9L);
    CHECK(table.p_max <= 0.25L * (1 + 1e-6L));

    KleinSampler sampler(z2, zero_shift(2), 100);
    Rng rng(8);
    const int N = 100000;
    std::vector<u64> counts(4, 0);
    for (int i = 0; i < N; ++i) ++counts[coset_label(sampler.sample(rng)).bits];
    Real stat = 0;
    for (u64 c : counts) {
        Real d = static_cast<Real>(c) - N / 4.0L;
        stat += d * d / (N / 4.0L);
    }
    CHECK(gamma_q(1.5L, stat / 2) > 0.001L);
}

TEST_CASE("klein tail never beats the proposition bound by more than noise") {
    const int n = 2;
    LatticeBasis z2(IMat::identity(n), 1);
    Shift t{{3, 1}, 10};
    Real s = 1;
    Real d = dist_estimate(z2, t);
    KleinSampler sampler(z2, t, s);
    Rng rng(12);
    const int N = 100000;
    std::vector<Real> norms;
    norms.reserve(N);
    for (int i = 0; i < N; ++i) norms.push_back(norm(z2, t, sampler.sample(rng)));
    for (Real r : {1.5L, 2.0L, 2.5L, 3.0L}) {
        if (!(r > std::sqrt(n / (2 * kPi)) * s) || !(r > d)) continue;
        Real y = std::sqrt(r * r - d * d) / s;
        Real bound = std::pow(2 * std::exp(1.0L), n / 2.0L + 1) * std::exp(-kPi * y * y / 2);
        u64 over = 0;
        for (Real v : norms)
            if (v > r) ++over;
        Real emp = static_cast<Real>(over) / N;
        Real sigma = std::sqrt(std::max<Real>(bound * (1 - bound), 1e-9L) / N);
        CHECK(emp <= bound + 3 * sigma);
    }
}

TEST_CASE("squared sampler draws cosets proportionally to squared masses") {
    LatticeBasis z1(IMat::identity(1), 1);
    CosetMassTable table = coset_masses(z1, zero_shift(1), 1);
    Real p0 = table.masses[0] * table.masses[0];
    Real p1 = table.masses[1] * table.masses[1];
    Real expected = p0 / (p0 + p1);
    Rng rng(3);
    SampleList pairs = squared_coset_sampler(table, 50000, z1, zero_shift(1), rng);
    REQUIRE(pairs.size() == 100000);
    u64 zero_coset = 0;
    for (size_t i = 0; i < pairs.size(); i += 2) {
        CHECK(coset_label(pairs.points[i]).bits == coset_label(pairs.points[i + 1]).bits);
        if (coset_label(pairs.points[i]).bits == 0) ++zero_coset;
    }
    Real emp = static_cast<Real>(zero_coset) / 50000;
    Real sigma = std::sqrt(expected * (1 - expected) / 50000);
    CHECK(std::fabs(emp - expected) <= 3.5L * sigma);
}

TEST_CASE("degenerate table with a single nonzero coset") {
    LatticeBasis z2(IMat::identity(2), 1);
    CosetMassTable table = coset_masses(z2, zero_shift(2), 1);
    for (size_t i = 1; i < table.masses.size(); ++i) table.masses[i] = 0;
    Rng rng(4);
    SampleList pairs = squared_coset_sampler(table, 200, z2, zero_shift(2), rng);
    for (auto& p : pairs.points) CHECK(coset_label(p).bits == 0);
}
