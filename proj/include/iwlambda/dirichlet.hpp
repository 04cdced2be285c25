#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iwlambda/cyclotomic.hpp"
#include "iwlambda/padic.hpp"

namespace iwlambda {

/// (Z/NZ)^x as a product of cyclic factors with canonical generators:
/// the smallest primitive root for each odd prime power, -1 and 5 for 2^e.
struct CharGroup {
    struct Factor {
        long long prime = 0;
        int exponent = 0;
        long long modulus = 0;    // prime^exponent
        long long generator = 0;  // as a residue mod `modulus`
        long long order = 0;
        int kind = 0;             // 0 odd prime power, 1 the -1 part of 2^e, 2 the 5 part of 2^e
        std::vector<int> dlog;    // discrete log of every residue mod `modulus`, -1 for non-units
    };

    long long N = 1;
    std::vector<Factor> factors;

    long long phi() const;
    // Residue mod N that is the generator of factor j and 1 on the other factors.
    long long generator_lift(std::size_t j) const;
};

using GroupPtr = std::shared_ptr<const CharGroup>;

// Shared, cached group for modulus N >= 1.
GroupPtr char_group(long long N);

class DirichletChar {
public:
    DirichletChar() = default;
    DirichletChar(GroupPtr group, std::vector<long long> exponents);

    static DirichletChar trivial(long long N);
    // Parse "N.e1.e2..." (just "N" when the group has no factors).
    static DirichletChar parse(const std::string& label);

    const GroupPtr& group() const { return group_; }
    long long modulus() const { return group_->N; }
    const std::vector<long long>& exponents() const { return exponents_; }
    long long order() const { return order_; }
    long long conductor() const { return conductor_; }
    bool is_primitive() const { return conductor_ == group_->N; }
    bool is_trivial() const { return order_ == 1; }
    bool is_even() const { return even_; }
    int parity() const { return even_ ? 1 : -1; }

    // chi(a) = zeta_m^k with m = order(); nullopt when gcd(a, N) > 1.
    std::optional<long long> value_exponent(long long a) const;
    CycRational evaluate(long long a) const;

    // The character mod conductor() inducing this one.
    DirichletChar primitive() const;
    DirichletChar pow(long long k) const;
    // The same character viewed modulo a multiple M of modulus().
    DirichletChar induce(long long M) const;
    DirichletChar operator*(const DirichletChar& other) const;

    std::string label() const;

    friend bool operator==(const DirichletChar& a, const DirichletChar& b) {
        return a.modulus() == b.modulus() && a.exponents_ == b.exponents_;
    }

private:
    GroupPtr group_;
    std::vector<long long> exponents_;
    std::vector<long long> coeff_;  // e_j * m / order_j
    long long order_ = 1;
    long long conductor_ = 1;
    bool even_ = true;
};

struct CharFilter {
    std::optional<long long> order;
    std::optional<int> parity;  // +1 even, -1 odd
    bool primitive_only = false;
};

// All characters mod N passing the filter, in lexicographic exponent order.
std::vector<DirichletChar> enumerate_characters(long long N, const CharFilter& filter = {});

/// chi = theta * omega^i for a prime p not dividing cond(theta).
struct TwistedChar {
    DirichletChar theta;
    int i = 0;
    long long p = 3;

    TwistedChar() = default;
    TwistedChar(DirichletChar theta_, int i_, long long p_);

    bool is_even() const;
    bool trivial_zero_flag() const;
    // theta is trivial and i = 0.
    bool is_trivial() const;
    // Order of theta: Q_q for chi is Q_p(zeta_m) with this m.
    long long field_order() const { return theta.order(); }
    std::string label() const;
};

// theta(a) omega(a)^i embedded in Q_q to precision K; zero when gcd(a, p cond) > 1.
UnramifiedElem evaluate_twist_padic(const TwistedChar& tc, long long a, const FieldPtr& field, int K);

}  // namespace iwlambda
