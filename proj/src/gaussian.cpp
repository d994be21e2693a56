#include "pasieve/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "pasieve/enumerate.hpp"
#include "pasieve/reduction.hpp"

namespace pasieve {

Real rho(const RVec& x, Real s) {
    if (!(s > 0)) throw Error("gaussian parameter must be positive");
    Real n2 = 0;
    for (Real v : x) n2 += v * v;
    return rho_norm2(n2, s);
}

MassResult mass_truncated(const LatticeBasis& basis, const Shift& shift, Real s, Real eps_rel) {
    if (!(s > 0)) throw Error("gaussian parameter must be positive");
    if (!(eps_rel > 0 && eps_rel < 1)) throw Error("eps_rel must lie in (0,1)");
    if (basis.rank() > enumeration_cap()) throw Error("enumeration cap exceeded");
    int k = basis.rank();

    // upper bound on dist(t, L); the tail bound is monotone in it
    Real d_ub = dist_estimate(basis, shift);

    // solve (2e)^{k/2+1} exp(-pi y^2 / 2) <= eps/2 for y
    Real log_front = (k / 2.0L + 1) * std::log(2 * std::exp(1.0L));
    Real y2 = 2 * (log_front + std::log(2 / eps_rel)) / kPi;

    Real r = std::sqrt(d_ub * d_ub + s * s * y2);
    r = std::max(r, std::sqrt(k / (2 * kPi)) * s * (1 + 1e-6L));
    r = std::max(r, d_ub * (1 + 1e-6L));
    Real log_arg = 2 * kPi * d_ub * d_ub / (k * s * s);
    if (log_arg > 1)
        r = std::max(r, std::sqrt(d_ub * d_ub + (k * s * s / kPi) * std::log(log_arg)) * (1 + 1e-6L));

    MassResult out;
    out.radius = r;
    enumerate_ball(basis, shift, r, [&](const IVec&, Real dist2) {
        out.value += rho_norm2(dist2, s);
        ++out.points;
    });
    Real y = std::sqrt(std::max<Real>(0, r * r - d_ub * d_ub)) / s;
    Real bound = std::pow(2 * std::exp(1.0L), k / 2.0L + 1) * std::exp(-kPi * y * y / 2);
    out.rel_error = bound / std::max<Real>(1e-30L, 1 - bound);
    return out;
}

CosetMassTable coset_masses(const LatticeBasis& basis, const Shift& shift, Real s, Real eps_rel,
                            int cap_dim) {
    int k = basis.rank();
    if (k > cap_dim) throw Error("coset table cap exceeded");
    CosetMassTable table;
    table.s = s;
    table.eps = eps_rel;
    table.dim = k;
    table.masses.assign(size_t{1} << k, 0);

    // doubled basis, one shifted sublattice per coset representative
    IMat doubled = basis.nums();
    for (i64& v : doubled.a) v = checked_mul(v, 2);
    LatticeBasis basis2(std::move(doubled), basis.den());

    i64 D = lcm64(basis.den(), shift.den);
    for (u64 bits = 0; bits < (u64{1} << k); ++bits) {
        // shift' = t - B c0 over the common denominator
        Shift sh;
        sh.den = D;
        sh.num.assign(basis.ambient_dim(), 0);
        for (int i = 0; i < basis.ambient_dim(); ++i) {
            i128 v = checked_mul128(shift.num[i], D / shift.den);
            for (int j = 0; j < k; ++j)
                if (bits >> j & 1) v -= checked_mul128(basis.nums().at(i, j), D / basis.den());
            if (v > INT64_MAX || v < INT64_MIN) throw Error("integer overflow");
            sh.num[i] = static_cast<i64>(v);
        }
        table.masses[bits] = mass_truncated(basis2, sh, s, eps_rel).value;
        table.total += table.masses[bits];
    }
    Real max_mass = *std::max_element(table.masses.begin(), table.masses.end());
    table.p_max = max_mass / table.total;
    table.p_col = 0;
    for (Real m : table.masses) {
        Real p = m / table.total;
        table.p_col += p * p;
    }
    return table;
}

std::string coset_table_to_json(const CosetMassTable& table) {
    nlohmann::json j;
    j["s"] = static_cast<double>(table.s);
    j["eps"] = static_cast<double>(table.eps);
    nlohmann::json masses = nlohmann::json::object();
    for (u64 bits = 0; bits < table.masses.size(); ++bits)
        masses[label_bits_string(CosetLabel{bits, table.dim})] = static_cast<double>(table.masses[bits]);
    j["masses"] = masses;
    return j.dump(2);
}

CosetMassTable coset_table_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CosetMassTable table;
    table.s = j.at("s").get<double>();
    table.eps = j.at("eps").get<double>();
    auto& masses = j.at("masses");
    if (masses.empty()) throw Error("empty mass table");
    table.dim = static_cast<int>(masses.begin().key().size());
    table.masses.assign(size_t{1} << table.dim, 0);
    for (auto it = masses.begin(); it != masses.end(); ++it) {
        CosetLabel c = label_from_bits_string(it.key());
        if (c.dim != table.dim) throw Error("inconsistent label length in mass table");
        table.masses[c.bits] = it.value().get<double>();
        table.total += table.masses[c.bits];
    }
    Real max_mass = *std::max_element(table.masses.begin(), table.masses.end());
    table.p_max = max_mass / table.total;
    for (Real m : table.masses) {
        Real p = m / table.total;
        table.p_col += p * p;
    }
    return table;
}

KleinSampler::KleinSampler(const LatticeBasis& basis, const Shift& shift, Real s)
    : basis_(basis), s_(s) {
    if (!(s > 0)) throw Error("gaussian parameter must be positive");
    TargetCoords t = target_coords(basis, shift);
    tc_ = std::move(t.tc);
    int k = basis.rank();
    sigma_.resize(k);
    for (int i = 0; i < k; ++i) sigma_[i] = s / std::sqrt(basis.bstar_norm2(i));
    memo_.resize(k);
}

Real KleinSampler::validity_threshold() const {
    Real logn = std::log(std::max<Real>(2, basis_.rank()));
    return 10 * std::sqrt(logn) * basis_.gs_max_norm();
}

const KleinSampler::Table& KleinSampler::table_for(int level, Real center) const {
    auto& memo = memo_[level];
    u64 key;
    double dc = static_cast<double>(center);
    static_assert(sizeof(dc) == sizeof(key));
    __builtin_memcpy(&key, &dc, sizeof(key));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    Real sigma = sigma_[level];
    i64 mid = static_cast<i64>(floorl(center + 0.5L));
    i64 w = static_cast<i64>(ceill(12 * sigma)) + 1;
    Table t;
    t.kmin = mid - w;
    t.cdf.resize(static_cast<size_t>(2 * w + 1));
    // weights relative to the best cell so tiny sigmas cannot underflow to an
    // all-zero table
    Real best = 0;
    bool first = true;
    for (i64 v = t.kmin; v <= mid + w; ++v) {
        Real d = static_cast<Real>(v) - center;
        Real e = d * d;
        if (first || e < best) {
            best = e;
            first = false;
        }
    }
    Real acc = 0;
    for (i64 v = t.kmin; v <= mid + w; ++v) {
        Real d = static_cast<Real>(v) - center;
        acc += std::exp(-kPi * (d * d - best) / (sigma * sigma));
        t.cdf[static_cast<size_t>(v - t.kmin)] = acc;
    }
    if (memo.size() >= 1u << 15) memo.clear();  // centers rarely repeat past this point
    return memo.emplace(key, std::move(t)).first->second;
}

LatticePoint KleinSampler::sample(Rng& rng) const {
    int k = basis_.rank();
    IVec z(k, 0);
    for (int i = k - 1; i >= 0; --i) {
        Real c = tc_[i];
        for (int j = i + 1; j < k; ++j) c -= basis_.mu(j, i) * z[j];
        const Table& t = table_for(i, c);
        Real u = rng.uniform() * t.cdf.back();
        size_t idx = std::upper_bound(t.cdf.begin(), t.cdf.end(), u) - t.cdf.begin();
        if (idx >= t.cdf.size()) idx = t.cdf.size() - 1;
        z[i] = t.kmin + static_cast<i64>(idx);
    }
    return LatticePoint{std::move(z)};
}

LatticePoint klein_sample(const LatticeBasis& basis, const Shift& shift, Real s, Rng& rng) {
    KleinSampler sampler(basis, shift, s);
    return sampler.sample(rng);
}

SampleList squared_coset_sampler(const CosetMassTable& table, size_t m_pairs,
                                 const LatticeBasis& basis, const Shift& shift, Rng& rng) {
    if (table.dim != basis.rank()) throw Error("mass table dimension mismatch");
    int k = basis.rank();

    RVec cdf(table.masses.size());
    Real acc = 0;
    for (size_t i = 0; i < table.masses.size(); ++i) {
        acc += table.masses[i] * table.masses[i];
        cdf[i] = acc;
    }
    if (!(acc > 0)) throw Error("mass table has no mass");

    IMat doubled = basis.nums();
    for (i64& v : doubled.a) v = checked_mul(v, 2);
    LatticeBasis basis2(std::move(doubled), basis.den());
    i64 D = lcm64(basis.den(), shift.den);

    std::vector<std::unique_ptr<KleinSampler>> samplers(table.masses.size());
    auto sampler_for = [&](u64 bits) -> KleinSampler& {
        if (!samplers[bits]) {
            Shift sh;
            sh.den = D;
            sh.num.assign(basis.ambient_dim(), 0);
            for (int i = 0; i < basis.ambient_dim(); ++i) {
                i128 v = checked_mul128(shift.num[i], D / shift.den);
                for (int j = 0; j < k; ++j)
                    if (bits >> j & 1) v -= checked_mul128(basis.nums().at(i, j), D / basis.den());
                if (v > INT64_MAX || v < INT64_MIN) throw Error("integer overflow");
                sh.num[i] = static_cast<i64>(v);
            }
            samplers[bits] = std::make_unique<KleinSampler>(basis2, sh, table.s);
        }
        return *samplers[bits];
    };

    SampleList out;
    out.points.reserve(2 * m_pairs);
    for (size_t p = 0; p < m_pairs; ++p) {
        Real u = rng.uniform() * acc;
        size_t bits = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        if (bits >= cdf.size()) bits = cdf.size() - 1;
        KleinSampler& sampler = sampler_for(bits);
        for (int rep = 0; rep < 2; ++rep) {
            LatticePoint z = sampler.sample(rng);
            IVec a(k);
            for (int j = 0; j < k; ++j) a[j] = 2 * z.coeffs[j] + ((bits >> j) & 1);
            out.points.push_back(LatticePoint{std::move(a)});
        }
    }
    return out;
}

}  // namespace pasieve
