#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iwlambda/cyclotomic.hpp"

namespace iwlambda {

/// Element of Q_p with capped relative precision.
///
/// A nonzero value is p^val * unit with unit a p-adic unit known modulo
/// p^rel, so the value is known modulo p^(val + rel). A zero carries only its
/// absolute precision: the value is O(p^val).
class PadicScalar {
public:
    PadicScalar() = default;

    static PadicScalar from_integer(long long p, const BigInt& n, int abs_prec);
    static PadicScalar from_rational(long long p, const BigRational& q, int abs_prec);
    static PadicScalar zero(long long p, int abs_prec);

    long long prime() const { return p_; }
    bool is_zero() const { return rel_ == 0; }
    // Valuation; for a zero this is its absolute precision.
    int valuation() const { return val_; }
    int relative_precision() const { return rel_; }
    int absolute_precision() const { return val_ + rel_; }
    const BigInt& unit() const { return unit_; }

    // Representative in [0, p^k) of an integral value; requires k <= absolute precision.
    BigInt residue(int k) const;

    PadicScalar operator-() const;
    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }
    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
    friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b);

    // Equal modulo p^min(absolute precisions).
    bool equals_at_precision(const PadicScalar& other) const;

    std::string to_string() const;

private:
    PadicScalar(long long p, int val, BigInt unit, int rel);
    static PadicScalar normalized(long long p, int shift, BigInt n, int abs_prec);

    long long p_ = 0;
    int val_ = 0;
    BigInt unit_ = 0;
    int rel_ = 0;
};

// omega(a): the (p-1)-st root of unity congruent to a mod p, to precision K.
PadicScalar teichmuller(long long a, long long p, int K);

// <a> = a / omega(a), a principal unit.
PadicScalar principal_unit(long long a, long long p, int K);

// log_p(u) for u = 1 mod p, correct to the input's absolute precision.
PadicScalar padic_log(const PadicScalar& u);

/// Z_q = Z_p[zeta_m] presented as Z_p[x]/(ghat), with ghat the Hensel lift of
/// an irreducible factor g of Phi_m mod p. The class of x is the image of zeta_m.
struct UnramifiedField {
    long long p = 0;
    int m = 1;
    int f = 1;
    int K = 0;
    std::vector<long long> g;       // monic, degree f, coefficients in [0, p)
    IntPoly ghat;                   // monic, degree f, coefficients mod p^K
    BigInt pK;                      // p^K
    std::vector<IntPoly> zeta_pow;  // x^k mod ghat for k in [0, m), length-f vectors mod p^K
    int factor_index = 0;           // position of g among the sorted factors
    int factor_count = 1;
};

using FieldPtr = std::shared_ptr<const UnramifiedField>;

// Canonical factor: lexicographically smallest (constant term first) degree-f
// factor of Phi_m mod p; factor_index selects another factor for tests.
FieldPtr build_extension(long long p, int m, int K, int factor_index = 0);

// Process-wide cache of built extensions keyed by (p, m, K, factor_index).
FieldPtr cached_extension(long long p, int m, int K, int factor_index = 0);

// Irreducible factors of Phi_m modulo p, sorted by the canonical order.
std::vector<std::vector<long long>> cyclotomic_factors_mod_p(long long p, int m);

/// Element of Q_q: p^val * (sum_i coeffs[i] x^i) with coefficient vector known
/// modulo p^rel and not all coefficients divisible by p. Zero carries its
/// absolute precision in val, like PadicScalar.
class UnramifiedElem {
public:
    UnramifiedElem() = default;

    static UnramifiedElem zero(FieldPtr field, int abs_prec);
    static UnramifiedElem one(FieldPtr field);
    static UnramifiedElem from_scalar(FieldPtr field, const PadicScalar& s);
    static UnramifiedElem from_integer(FieldPtr field, const BigInt& n, int abs_prec);
    // Integer coefficient vector (length f, on basis x^i) known mod p^abs_prec.
    static UnramifiedElem from_vector(FieldPtr field, std::vector<BigInt> coeffs, int abs_prec);
    // zeta_m^k.
    static UnramifiedElem zeta_power(FieldPtr field, long long k);

    const FieldPtr& field() const { return field_; }
    bool is_zero() const { return rel_ == 0; }
    int valuation() const { return val_; }
    int relative_precision() const { return rel_; }
    int absolute_precision() const { return val_ + rel_; }
    const std::vector<BigInt>& unit_coefficients() const { return coeffs_; }

    // p-adic coordinates of an integral element modulo p^k (k <= absolute precision).
    std::vector<BigInt> residue(int k) const;
    PadicScalar coefficient(int i) const;

    UnramifiedElem operator-() const;
    friend UnramifiedElem operator+(const UnramifiedElem& a, const UnramifiedElem& b);
    friend UnramifiedElem operator-(const UnramifiedElem& a, const UnramifiedElem& b) { return a + (-b); }
    friend UnramifiedElem operator*(const UnramifiedElem& a, const UnramifiedElem& b);
    friend UnramifiedElem operator*(const UnramifiedElem& a, const PadicScalar& s);
    friend UnramifiedElem operator/(const UnramifiedElem& a, const UnramifiedElem& b);
    friend UnramifiedElem operator/(const UnramifiedElem& a, const PadicScalar& s);

    UnramifiedElem inverse() const;
    UnramifiedElem pow(long long e) const;
    // Drop precision to at most abs_prec.
    UnramifiedElem truncated(int abs_prec) const;

    bool equals_at_precision(const UnramifiedElem& other) const;
    std::string to_string() const;

private:
    friend UnramifiedElem embed_cyclotomic(const CycRational& x, const FieldPtr& field);
    static UnramifiedElem normalized(FieldPtr field, int shift, std::vector<BigInt> v, int abs_prec);

    FieldPtr field_;
    int val_ = 0;
    std::vector<BigInt> coeffs_;
    int rel_ = 0;
};

// Image of x under the embedding zeta_m -> class of x. The absolute precision of
// the result is field.K minus the p-adic valuation of the common denominator.
UnramifiedElem embed_cyclotomic(const CycRational& x, const FieldPtr& field);

// varpi-adic valuation of the embedded image; std::nullopt stands for +infinity (x = 0).
// Raises the working precision until the valuation is decided.
std::optional<int> valuation_at_residue(const CycRational& x, const FieldPtr& field);

}  // namespace iwlambda
