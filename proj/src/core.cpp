#include "pasieve/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pasieve {

void Rational::reduce() {
    if (den == 0) throw Error("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i64 g = gcd64(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational parse_rational(const std::string& tok) {
    Rational r;
    auto slash = tok.find('/');
    auto dot = tok.find('.');
    try {
        if (slash != std::string::npos) {
            r.num = std::stoll(tok.substr(0, slash));
            r.den = std::stoll(tok.substr(slash + 1));
        } else if (dot != std::string::npos) {
            std::string frac = tok.substr(dot + 1);
            if (frac.empty() || frac.size() > 15) throw Error("malformed rational: " + tok);
            i64 scale = 1;
            for (size_t i = 0; i < frac.size(); ++i) scale = checked_mul(scale, 10);
            std::string head = tok.substr(0, dot);
            bool neg = !head.empty() && head[0] == '-';
            i64 whole = (head.empty() || head == "-" || head == "+") ? 0 : std::stoll(head);
            i64 fpart = std::stoll(frac);
            r.num = checked_mul(std::llabs(whole), scale) + fpart;
            if (neg || whole < 0) r.num = -r.num;
            r.den = scale;
        } else {
            r.num = std::stoll(tok);
            r.den = 1;
        }
    } catch (const std::invalid_argument&) {
        throw Error("malformed rational: " + tok);
    } catch (const std::out_of_range&) {
        throw Error("rational out of range: " + tok);
    }
    r.reduce();
    return r;
}

std::string format_rational(i64 num, i64 den) {
    Rational r{num, den};
    r.reduce();
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

LatticeBasis::LatticeBasis(IMat column_numerators, i64 den) : nums_(std::move(column_numerators)), den_(den) {
    if (den_ <= 0) throw Error("denominator must be positive");
    int m = nums_.rows, k = nums_.cols;
    // rank 0 is legal: the trivial sublattice that the start procedure may emit
    if (m <= 0 || k < 0 || k > m) throw Error("degenerate basis");

    // Exact rank when 128-bit Bareiss cannot overflow, float fallback else.
    Real log_had = 0;
    for (int j = 0; j < k; ++j) {
        Real s = 0;
        for (int i = 0; i < m; ++i) s += static_cast<Real>(nums_.at(i, j)) * nums_.at(i, j);
        log_had += std::log2(std::max<Real>(s, 1)) / 2;
    }
    bool exact_ok = log_had < 120;
    if (exact_ok) {
        if (exact_rank(nums_) != k) throw Error("degenerate basis");
    }

    // Gram-Schmidt in extended precision on the numerator columns; the common
    // denominator rescales everything afterwards.
    bstar_.assign(static_cast<size_t>(m) * k, 0);
    mu_.assign(static_cast<size_t>(k) * k, 0);
    bstar_norm2_.assign(k, 0);
    Real d = static_cast<Real>(den_);
    for (int j = 0; j < k; ++j) {
        RVec v(m);
        for (int i = 0; i < m; ++i) v[i] = static_cast<Real>(nums_.at(i, j)) / d;
        for (int i = 0; i < j; ++i) {
            Real dot = 0;
            for (int r = 0; r < m; ++r) dot += v[r] * bstar_[static_cast<size_t>(r) * k + i];
            Real c = dot / bstar_norm2_[i];
            mu_[static_cast<size_t>(j) * k + i] = c;
            for (int r = 0; r < m; ++r) v[r] -= c * bstar_[static_cast<size_t>(r) * k + i];
        }
        mu_[static_cast<size_t>(j) * k + j] = 1;
        Real n2 = 0;
        for (int r = 0; r < m; ++r) {
            bstar_[static_cast<size_t>(r) * k + j] = v[r];
            n2 += v[r] * v[r];
        }
        bstar_norm2_[j] = n2;
        if (!exact_ok && !(n2 > 0)) throw Error("degenerate basis");
        gs_max_ = std::max(gs_max_, std::sqrt(n2));
    }
}

RVec LatticeBasis::column(int j) const {
    RVec v(ambient_dim());
    for (int i = 0; i < ambient_dim(); ++i) v[i] = static_cast<Real>(nums_.at(i, j)) / den_;
    return v;
}

Real LatticeBasis::gs_reconstruction_error() const {
    int m = ambient_dim(), k = rank();
    Real max_dev = 0, max_abs = 0;
    for (int j = 0; j < k; ++j)
        for (int r = 0; r < m; ++r) {
            Real rec = 0;
            for (int i = 0; i <= j; ++i) rec += mu(j, i) * bstar(r, i);
            Real truth = static_cast<Real>(nums_.at(r, j)) / den_;
            max_dev = std::max(max_dev, std::fabs(rec - truth));
            max_abs = std::max(max_abs, std::fabs(truth));
        }
    return max_abs > 0 ? max_dev / max_abs : max_dev;
}

Shift zero_shift(int dim) { return Shift{IVec(dim, 0), 1}; }

CosetLabel coset_label(const LatticePoint& p) {
    int n = static_cast<int>(p.coeffs.size());
    if (n > 62) throw Error("dimension too large for coset labels");
    CosetLabel c{0, n};
    for (int i = 0; i < n; ++i)
        if (p.coeffs[i] & 1) c.bits |= (1ull << i);
    return c;
}

std::string label_bits_string(const CosetLabel& c) {
    std::string s(c.dim, '0');
    for (int i = 0; i < c.dim; ++i)
        if (c.bits >> i & 1) s[i] = '1';
    return s;
}

CosetLabel label_from_bits_string(const std::string& s) {
    CosetLabel c{0, static_cast<int>(s.size())};
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            c.bits |= (1ull << i);
        else if (s[i] != '0')
            throw Error("malformed coset label: " + s);
    }
    return c;
}

LatticePoint average(const LatticePoint& p, const LatticePoint& q) {
    if (p.coeffs.size() != q.coeffs.size()) throw Error("dimension mismatch");
    IVec r(p.coeffs.size());
    for (size_t i = 0; i < r.size(); ++i) {
        i64 s = p.coeffs[i] + q.coeffs[i];
        if (s & 1) throw Error("not congruent mod 2L");
        r[i] = s / 2;
    }
    return LatticePoint{std::move(r)};
}

RVec to_ambient(const LatticeBasis& basis, const Shift& shift, const LatticePoint& p) {
    if (static_cast<int>(p.coeffs.size()) != basis.rank()) throw Error("dimension mismatch");
    int m = basis.ambient_dim();
    RVec v(m, 0);
    for (int i = 0; i < m; ++i) {
        i128 acc = 0;
        for (int j = 0; j < basis.rank(); ++j) acc += checked_mul128(basis.nums().at(i, j), p.coeffs[j]);
        v[i] = static_cast<Real>(acc) / basis.den() - static_cast<Real>(shift.num[i]) / shift.den;
    }
    return v;
}

Real norm(const LatticeBasis& basis, const Shift& shift, const LatticePoint& p) {
    ExactNorm2 n2 = exact_norm2(basis, shift, p);
    return std::sqrt(static_cast<Real>(n2.num) / static_cast<Real>(n2.den2));
}

bool ExactNorm2::operator<(const ExactNorm2& o) const {
    // num/den2 < o.num/o.den2 with positive denominators
    return checked_mul128(num, o.den2) < checked_mul128(o.num, den2);
}

bool ExactNorm2::operator==(const ExactNorm2& o) const {
    return checked_mul128(num, o.den2) == checked_mul128(o.num, den2);
}

ExactNorm2 exact_norm2(const LatticeBasis& basis, const Shift& shift, const LatticePoint& p) {
    if (static_cast<int>(shift.num.size()) != basis.ambient_dim()) throw Error("shift dimension mismatch");
    i64 D = lcm64(basis.den(), shift.den);
    i64 fb = D / basis.den(), fs = D / shift.den;
    i128 acc = 0;
    for (int i = 0; i < basis.ambient_dim(); ++i) {
        i128 w = 0;
        for (int j = 0; j < basis.rank(); ++j) w += checked_mul128(basis.nums().at(i, j), p.coeffs[j]);
        w = checked_mul128(w, fb) - checked_mul128(shift.num[i], fs);
        acc += checked_mul128(w, w);
    }
    return ExactNorm2{acc, checked_mul128(D, D)};
}

bool lex_less(const IVec& a, const IVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

IVec canonical_sign(IVec a) {
    for (i64 v : a) {
        if (v > 0) return a;
        if (v < 0) {
            for (i64& w : a) w = -w;
            return a;
        }
    }
    return a;
}

bool canonical_witness_better(const IVec& cand, const IVec& incumbent) {
    return lex_less(canonical_sign(incumbent), canonical_sign(cand));
}

LatticeBasis gen_random_lattice(int dim, LatticeStyle style, u64 seed) {
    if (dim < 1) throw Error("dimension must be >= 1");
    Rng rng(seed, 0x67656eull);
    for (int attempt = 0;; ++attempt) {
        IMat m(dim, dim);
        if (style == LatticeStyle::UniformInteger) {
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) m.at(i, j) = rng.uniform_int(-5, 5);
        } else {
            // first row holds the weights, identity tail below
            for (int j = 0; j < dim; ++j) m.at(0, j) = rng.uniform_int(1, 1 << 16);
            for (int i = 1; i < dim; ++i) m.at(i, i) = 1;
        }
        if (exact_rank(m) == dim) return LatticeBasis(std::move(m), 1);
        if (attempt > 10000) throw Error("could not generate full-rank basis");
    }
}

namespace {

Instance build_instance(const std::vector<std::vector<Rational>>& rows,
                        const std::vector<Rational>& target) {
    int n = static_cast<int>(rows.size());
    if (n == 0) throw Error("empty basis");
    i64 den = 1;
    for (auto& row : rows) {
        if (static_cast<int>(row.size()) != n) throw Error("dimension mismatch in basis rows");
        for (auto& r : row) den = lcm64(den, r.den);
    }
    // file rows are basis vectors; internal columns are basis vectors
    IMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(j, i) = checked_mul(rows[i][j].num, den / rows[i][j].den);

    Shift shift = zero_shift(n);
    if (!target.empty()) {
        if (static_cast<int>(target.size()) != n) throw Error("target dimension mismatch");
        i64 tden = 1;
        for (auto& r : target) tden = lcm64(tden, r.den);
        shift.den = tden;
        for (int i = 0; i < n; ++i) shift.num[i] = checked_mul(target[i].num, tden / target[i].den);
    }
    return Instance{LatticeBasis(std::move(m), den), std::move(shift)};
}

}  // namespace

Instance parse_instance_text(std::istream& in) {
    int n = 0;
    if (!(in >> n) || n <= 0) throw Error("malformed basis file: bad dimension header");
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::string tok;
            if (!(in >> tok)) throw Error("malformed basis file: expected " + std::to_string(n * n) + " entries");
            rows[i][j] = parse_rational(tok);
        }
    std::string extra;
    if (in >> extra) throw Error("malformed basis file: trailing data");
    return build_instance(rows, {});
}

namespace {

Rational json_entry_to_rational(const nlohmann::json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational{v.get<i64>(), 1};
    if (v.is_number_float()) return parse_rational(nlohmann::json(v).dump());
    throw Error("malformed basis JSON entry");
}

}  // namespace

Instance parse_instance_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int n = j.at("dim").get<int>();
    auto& b = j.at("basis");
    if (static_cast<int>(b.size()) != n) throw Error("dimension mismatch in basis rows");
    std::vector<std::vector<Rational>> rows(n);
    for (int i = 0; i < n; ++i) {
        for (auto& e : b[i]) rows[i].push_back(json_entry_to_rational(e));
        if (static_cast<int>(rows[i].size()) != n) throw Error("dimension mismatch in basis rows");
    }
    std::vector<Rational> target;
    if (j.contains("target"))
        for (auto& e : j["target"]) target.push_back(json_entry_to_rational(e));
    return build_instance(rows, target);
}

Instance load_instance(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string text = ss.str();
    size_t i = text.find_first_not_of(" \t\r\n");
    if (i != std::string::npos && text[i] == '{') return parse_instance_json(text);
    std::istringstream is(text);
    return parse_instance_text(is);
}

std::string serialize_basis_text(const LatticeBasis& basis) {
    if (basis.rank() != basis.ambient_dim()) throw Error("text format requires a square basis");
    std::ostringstream os;
    int n = basis.rank();
    os << n << "\n";
    for (int i = 0; i < n; ++i) {  // row i = basis vector i
        for (int j = 0; j < n; ++j) {
            if (j) os << ' ';
            os << format_rational(basis.nums().at(j, i), basis.den());
        }
        os << "\n";
    }
    return os.str();
}

std::string serialize_instance_json(const LatticeBasis& basis, const std::optional<Shift>& shift) {
    nlohmann::json j;
    j["dim"] = basis.rank();
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < basis.rank(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int r = 0; r < basis.ambient_dim(); ++r) {
            i64 num = basis.nums().at(r, i);
            if (num % basis.den() == 0)
                row.push_back(num / basis.den());
            else
                row.push_back(format_rational(num, basis.den()));
        }
        rows.push_back(row);
    }
    j["basis"] = rows;
    if (shift && !shift->is_zero()) {
        nlohmann::json t = nlohmann::json::array();
        for (size_t i = 0; i < shift->num.size(); ++i) {
            if (shift->num[i] % shift->den == 0)
                t.push_back(shift->num[i] / shift->den);
            else
                t.push_back(format_rational(shift->num[i], shift->den));
        }
        j["target"] = t;
    }
    return j.dump(2);
}

}  // namespace pasieve
