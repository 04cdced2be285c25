#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace iwlambda {

using BigInt = mpz_class;
using BigRational = mpq_class;

// Dense integer polynomial, constant term first.
using IntPoly = std::vector<BigInt>;

// Phi_m by recursive division of x^m - 1; cached.
const IntPoly& cyclotomic_polynomial(int m);

/// Exact element of Q(zeta_m) = Q[x]/(Phi_m), stored as phi(m) rational
/// coefficients on the power basis 1, x, ..., x^{phi(m)-1}.
class CycRational {
public:
    explicit CycRational(int m);

    static CycRational from_rational(int m, const BigRational& q);
    // Reduce an arbitrary-length rational vector (coefficient k on x^k) mod Phi_m.
    static CycRational from_coefficients(int m, std::vector<BigRational> coeffs);

    int order() const { return m_; }
    int degree() const { return static_cast<int>(coeffs_.size()); }
    const std::vector<BigRational>& coefficients() const { return coeffs_; }

    bool is_zero() const;

    CycRational& operator+=(const CycRational& rhs);
    CycRational& operator-=(const CycRational& rhs);
    CycRational& operator*=(const BigRational& s);
    CycRational operator-() const;

    friend CycRational operator+(CycRational a, const CycRational& b) { return a += b; }
    friend CycRational operator-(CycRational a, const CycRational& b) { return a -= b; }
    friend CycRational operator*(CycRational a, const BigRational& s) { return a *= s; }
    friend CycRational operator*(const CycRational& a, const CycRational& b);
    friend bool operator==(const CycRational& a, const CycRational& b);

    // "c0,c1,...": each coefficient printed as num or num/den.
    std::string to_string() const;
    static CycRational parse(int m, const std::string& text);

private:
    int m_;
    std::vector<BigRational> coeffs_;
};

// Class of x^{k mod m} in Q(zeta_m).
CycRational root_of_unity_power(int m, long long k);

// x^k mod Phi_m for k in [0, m), as integer vectors of length phi(m). Cached.
const std::vector<IntPoly>& root_of_unity_table(int m);

}  // namespace iwlambda
