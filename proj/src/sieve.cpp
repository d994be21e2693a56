#include "pasieve/sieve.hpp"

#include "pasieve/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <unordered_map>

namespace pasieve {

SampleList pair_and_average(const SampleList& list) {
    SampleList out;
    out.points.reserve(list.size() / 2);
    std::unordered_map<u64, size_t> pending;  // label bits -> waiting index
    for (size_t i = 0; i < list.points.size(); ++i) {
        u64 bits = coset_label(list.points[i]).bits;
        auto it = pending.find(bits);
        if (it == pending.end()) {
            pending.emplace(bits, i);
        } else {
            out.points.push_back(average(list.points[it->second], list.points[i]));
            pending.erase(it);
        }
    }
    return out;
}

RejectionFn trivial_rejection() {
    return [](const std::vector<CosetLabel>& labels, Rng&) {
        std::vector<size_t> idx(labels.size());
        std::iota(idx.begin(), idx.end(), size_t{0});
        return idx;
    };
}

RejectionFn reject_everything() {
    return [](const std::vector<CosetLabel>&, Rng&) { return std::vector<size_t>{}; };
}

RejectionFn make_square_sampler_rejection(std::vector<CosetMassTable> tables, Real kappa) {
    auto step = std::make_shared<size_t>(0);
    return [tables = std::move(tables), kappa, step](const std::vector<CosetLabel>& labels,
                                                     Rng& rng) {
        const CosetMassTable& table = tables[std::min(*step, tables.size() - 1)];
        ++*step;
        u64 m_in = labels.size();
        u64 target_pairs = static_cast<u64>(
            ceill(static_cast<Real>(m_in) * table.p_col / (32 * kappa * table.p_max)));

        std::unordered_map<u64, std::vector<size_t>> by_label;
        for (size_t i = 0; i < labels.size(); ++i) by_label[labels[i].bits].push_back(i);

        RVec cdf(table.masses.size());
        Real acc = 0;
        for (size_t i = 0; i < table.masses.size(); ++i) {
            acc += table.masses[i] * table.masses[i];
            cdf[i] = acc;
        }
        std::unordered_map<u64, u64> pairs_taken;
        for (u64 p = 0; p < target_pairs; ++p) {
            Real u = rng.uniform() * acc;
            u64 bits = static_cast<u64>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            if (bits >= cdf.size()) bits = cdf.size() - 1;
            auto avail = by_label.find(bits);
            u64 have = avail == by_label.end() ? 0 : avail->second.size();
            u64& taken = pairs_taken[bits];
            if (2 * (taken + 1) <= have) ++taken;  // drop draws the list cannot serve
        }
        std::vector<size_t> out;
        for (auto& [bits, cnt] : pairs_taken)
            for (u64 i = 0; i < 2 * cnt; ++i) out.push_back(by_label[bits][i]);
        std::sort(out.begin(), out.end());
        return out;
    };
}

namespace {

u64 fnv1a(u64 h, u64 v) {
    for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xff;
        h *= 0x100000001B3ull;
    }
    return h;
}

u64 histogram_digest(const std::vector<CosetLabel>& labels) {
    std::map<u64, u64> hist;
    for (auto& l : labels) ++hist[l.bits];
    u64 h = 0xCBF29CE484222325ull;
    for (auto& [bits, count] : hist) {
        h = fnv1a(h, bits);
        h = fnv1a(h, count);
    }
    return h;
}

Real min_norm_of(const LatticeBasis& basis, const Shift& shift, const SampleList& list) {
    Real best = 0;
    bool first = true;
    for (auto& p : list.points) {
        Real n = norm(basis, shift, p);
        if (first || n < best) {
            best = n;
            first = false;
        }
    }
    return first ? 0 : best;
}

}  // namespace

SampleList reject_and_average(const LatticeBasis& basis, const Shift& shift, SampleList list,
                              int ell, const RejectionFn& f, Rng& rng,
                              std::vector<StepStat>* trace) {
    if (ell < 0) throw Error("ell must be >= 0");
    for (int step = 0; step < ell; ++step) {
        std::vector<CosetLabel> labels;
        labels.reserve(list.size());
        for (auto& p : list.points) labels.push_back(coset_label(p));

        std::vector<size_t> idx = f(labels, rng);
        std::vector<bool> seen(list.size(), false);
        SampleList accepted;
        accepted.points.reserve(idx.size());
        for (size_t i : idx) {
            if (i >= list.size() || seen[i]) throw Error("invalid rejection function");
            seen[i] = true;
            accepted.points.push_back(list.points[i]);
        }

        SampleList next = pair_and_average(accepted);
        if (trace) {
            StepStat st;
            st.step = step + 1;
            st.m_in = list.size();
            st.m_out = next.size();
            st.min_norm = min_norm_of(basis, shift, next);
            st.coset_histogram_digest = histogram_digest(labels);
            trace->push_back(st);
        }
        list = std::move(next);
    }
    return list;
}

StartOutput prepare_start(const LatticeBasis& basis, const Shift& shift, u64 M, int u, Real s_hat,
                          Rng& rng, const StartOptions& opts) {
    if (u < 2) throw Error("u must be >= 2");
    if (!(s_hat > 0)) throw Error("s_hat must be positive");
    int n = basis.rank();
    Real logn = std::log(std::max<Real>(2, n));

    StartOutput out;
    out.s_hat = s_hat;
    out.admission_radius = 10 * s_hat / std::sqrt(logn);

    // precondition s_hat >= 10 sqrt(n log n) u^{2n/u} dist(t, L), checked
    // through the Babai bracket dist <= d~ <= 2^{n/2} dist
    Real d_est = dist_estimate(basis, shift);
    Real u_pow = std::exp((2.0L * n / u) * std::log(static_cast<Real>(u)));
    Real bound_est = 10 * std::sqrt(n * logn) * u_pow * d_est;
    if (s_hat >= bound_est) {
        out.precondition_certified = true;
    } else if (s_hat >= bound_est * std::pow(2.0L, -n / 2.0L)) {
        out.warning = "start precondition certified only by the lower distance bracket";
    } else if (opts.enforce_precondition) {
        throw Error("start precondition violated: s_hat below 10 sqrt(n log n) u^{2n/u} dist");
    } else {
        out.warning = "start precondition not met; proceeding unchecked";
    }

    std::optional<Reduced> local;
    const Reduced* red = opts.reduced;
    if (!red) {
        local.emplace(hkz_reduce(basis, ReductionConfig{.delta = 0.99, .u = u}));
        red = &*local;
    }

    int prefix = 0;
    while (prefix < n && std::sqrt(red->basis.bstar_norm2(prefix)) <= out.admission_radius) ++prefix;

    // decode the projected target on the tail block (nearest plane in the
    // Gram-Schmidt frame); for t = 0 this gives y = 0
    IVec tail(n, 0);
    if (prefix < n) {
        TargetCoords t = target_coords(red->basis, shift);
        for (int i = n - 1; i >= prefix; --i) {
            Real c = t.tc[i];
            for (int j = i + 1; j < n; ++j) c -= red->basis.mu(j, i) * tail[j];
            tail[i] = static_cast<i64>(floorl(c + 0.5L));
        }
    }
    out.y_coeffs.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        i128 acc = 0;
        for (int j = prefix; j < n; ++j) acc -= checked_mul128(red->transform.at(i, j), tail[j]);
        if (acc > INT64_MAX || acc < INT64_MIN) throw Error("integer overflow");
        out.y_coeffs[i] = static_cast<i64>(acc);
    }

    int m = basis.ambient_dim();
    IMat sub_nums(m, prefix);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < prefix; ++j) sub_nums.at(i, j) = red->basis.nums().at(i, j);
    out.sublattice = LatticeBasis(std::move(sub_nums), basis.den());
    out.sublattice_coeffs = IMat(n, prefix);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < prefix; ++j) out.sublattice_coeffs.at(i, j) = red->transform.at(i, j);

    // shift context y + t over a common denominator
    i64 D = lcm64(basis.den(), shift.den);
    out.shifted.den = D;
    out.shifted.num.assign(m, 0);
    IVec y_num = imat_mul_vec(basis.nums(), out.y_coeffs);
    for (int i = 0; i < m; ++i) {
        i128 v = checked_mul128(shift.num[i], D / shift.den) + checked_mul128(y_num[i], D / basis.den());
        if (v > INT64_MAX || v < INT64_MIN) throw Error("integer overflow");
        out.shifted.num[i] = static_cast<i64>(v);
    }

    KleinSampler sampler(out.sublattice, out.shifted, s_hat);
    if (prefix > 0 && s_hat < sampler.validity_threshold()) {
        if (!out.warning.empty()) out.warning += "; ";
        out.warning += "s_hat below the sampler validity threshold";
    }
    out.samples.points.reserve(M);
    for (u64 i = 0; i < M; ++i) out.samples.points.push_back(sampler.sample(rng));
    return out;
}

u64 required_M(const CosetMassTable& table, int ell, Real kappa) {
    if (ell < 0 || kappa < 1) throw Error("need ell >= 0 and kappa >= 1");
    Real v = std::pow(10 * kappa, 2.0L * ell) / table.p_max;
    v = ceill(v);
    if (v >= static_cast<Real>(UINT64_MAX)) return UINT64_MAX;
    return static_cast<u64>(v);
}

u64 predicted_M_prime(const LatticeBasis& basis, const Shift& shift, Real s, int ell, Real kappa,
                      u64 M, Real eps_rel, int cap_dim) {
    if (ell < 0 || kappa < 1) throw Error("need ell >= 0 and kappa >= 1");
    Shift zero = zero_shift(basis.ambient_dim());
    Real product = 1;
    for (int i = 0; i < ell; ++i) {
        Real s_i = s / std::pow(2.0L, i / 2.0L);
        Real s_next = s / std::pow(2.0L, (i + 1) / 2.0L);
        Real shifted_next = mass_truncated(basis, shift, s_next, eps_rel).value;
        Real central_next = mass_truncated(basis, zero, s_next, eps_rel).value;
        Real shifted_cur = mass_truncated(basis, shift, s_i, eps_rel).value;
        CosetMassTable t = coset_masses(basis, shift, s_i, eps_rel, cap_dim);
        Real max_coset = t.p_max * t.total;
        product *= (shifted_next * central_next) / (shifted_cur * max_coset);
    }
    Real v = ceill(static_cast<Real>(M) / std::pow(32 * kappa, static_cast<Real>(ell)) * product);
    if (v < 0) return 0;
    if (v >= static_cast<Real>(UINT64_MAX)) return UINT64_MAX;
    return static_cast<u64>(v);
}

}  // namespace pasieve
