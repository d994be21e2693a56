#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "pasieve/common.hpp"
#include "pasieve/linalg.hpp"
#include "pasieve/rng.hpp"

namespace pasieve {

// Exact rational, used only at the parsing boundary. Internally a basis (or
// shift) keeps integer numerators over one common denominator.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    void reduce();
};

Rational parse_rational(const std::string& tok);
std::string format_rational(i64 num, i64 den);

// A lattice given by linearly independent column vectors with exact rational
// entries (common denominator). Gram-Schmidt data is cached at construction.
// ambient_dim() may exceed rank() for sublattices.
class LatticeBasis {
  public:
    LatticeBasis(IMat column_numerators, i64 den);
    LatticeBasis() : LatticeBasis(IMat(1, 0), 1) {}  // empty placeholder

    int ambient_dim() const { return nums_.rows; }
    int rank() const { return nums_.cols; }
    const IMat& nums() const { return nums_; }
    i64 den() const { return den_; }

    // column j as ambient Real vector
    RVec column(int j) const;

    // Gram-Schmidt: b_j = bstar_j + sum_{i<j} mu(j,i) * bstar_i
    Real bstar(int i, int j) const { return bstar_[static_cast<size_t>(i) * rank() + j]; }
    Real mu(int j, int i) const { return mu_[static_cast<size_t>(j) * rank() + i]; }
    Real bstar_norm2(int j) const { return bstar_norm2_[j]; }
    Real gs_max_norm() const { return gs_max_; }

    // max_j | B - recompose(bstar, mu) |_inf relative deviation, for checks
    Real gs_reconstruction_error() const;

    bool operator==(const LatticeBasis& o) const { return nums_ == o.nums_ && den_ == o.den_; }

  private:
    IMat nums_;
    i64 den_;
    RVec bstar_;        // ambient_dim x rank, column j = bstar_j
    RVec mu_;           // rank x rank, lower triangular
    RVec bstar_norm2_;  // rank
    Real gs_max_ = 0;
};

// CVP target (all-zero for SVP), exact rationals over a common denominator.
struct Shift {
    IVec num;
    i64 den = 1;

    bool is_zero() const {
        for (i64 v : num)
            if (v) return false;
        return true;
    }
};

Shift zero_shift(int dim);

struct Instance {
    LatticeBasis basis;
    Shift shift;
};

// Element of L - t as an exact integer coefficient vector; the ambient point
// is B*coeffs - t. Context (basis, shift) travels with the containing list.
struct LatticePoint {
    IVec coeffs;

    bool operator==(const LatticePoint& o) const { return coeffs == o.coeffs; }
};

// Coset of L/(2L) as coefficient parities packed into a word.
struct CosetLabel {
    u64 bits = 0;
    int dim = 0;

    bool operator==(const CosetLabel& o) const { return bits == o.bits && dim == o.dim; }
    CosetLabel operator^(const CosetLabel& o) const { return {bits ^ o.bits, dim}; }
};

struct SampleList {
    std::vector<LatticePoint> points;

    size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

CosetLabel coset_label(const LatticePoint& p);
std::string label_bits_string(const CosetLabel& c);
CosetLabel label_from_bits_string(const std::string& s);

// Midpoint of two coset-equal points; exact on integer coefficients.
// Throws "not congruent mod 2L" on parity mismatch.
LatticePoint average(const LatticePoint& p, const LatticePoint& q);

RVec to_ambient(const LatticeBasis& basis, const Shift& shift, const LatticePoint& p);
Real norm(const LatticeBasis& basis, const Shift& shift, const LatticePoint& p);

// Exact squared norm of B*coeffs - t as num/den^2 with den the common
// denominator scale. Comparable across points of one instance.
struct ExactNorm2 {
    i128 num = 0;
    i128 den2 = 1;

    bool operator<(const ExactNorm2& o) const;
    bool operator==(const ExactNorm2& o) const;
};
ExactNorm2 exact_norm2(const LatticeBasis& basis, const Shift& shift, const LatticePoint& p);

// Deterministic tie-breaking for argmins over equal norms.
bool lex_less(const IVec& a, const IVec& b);
// Sign-canonical representative for SVP witnesses: first nonzero coefficient
// positive. An SVP minimizer set is closed under negation, so picking the
// lexicographically smallest minimizer and reporting its canonical form is
// the same as keeping the lexicographically greatest canonical candidate.
IVec canonical_sign(IVec a);
bool canonical_witness_better(const IVec& cand, const IVec& incumbent);

enum class LatticeStyle { UniformInteger, Knapsack };

// Deterministic per seed; retries until full rank.
LatticeBasis gen_random_lattice(int dim, LatticeStyle style, u64 seed);

// File formats: plain text ("n" then n rows = basis vectors) or JSON
// {"dim":n,"basis":[[...],...],"target":[...]}. Entries may be integers,
// fractions "p/q", or decimals.
Instance parse_instance_text(std::istream& in);
Instance parse_instance_json(const std::string& text);
Instance load_instance(const std::string& path);
std::string serialize_basis_text(const LatticeBasis& basis);
std::string serialize_instance_json(const LatticeBasis& basis, const std::optional<Shift>& shift);

}  // namespace pasieve
