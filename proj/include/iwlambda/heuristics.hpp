#pragma once

#include <optional>
#include <vector>

#include "iwlambda/real.hpp"

namespace iwlambda {

// prod_{t>=1} (1 - y^t) by truncated product and by Euler's pentagonal series; terms = 0 runs until 1e-60.
Real direct_product(const Real& y, int terms = 0);
Real pentagonal_product(const Real& y, int terms = 0);

// rho(q, r) evaluated through the pentagonal series.
Real rho_pentagonal(long long q, int r);

struct LambdaPrediction {
    int f = 1;               // order of p mod m
    std::vector<Real> rho;   // rho(p^f, r) for r = 0..r_max
};

LambdaPrediction predicted_lambda_distribution(long long p, long long m, int r_max = 7);

// 1 + (e^{-1/2} - 1) / phi(m)
Real predicted_regular_proportion(long long m);

// exp(-prod gcd(m_i, p-1) / 2); with assume_p_regular the trivial character is dropped from the product count.
Real predicted_field_regular(const std::vector<long long>& m_list, long long p, bool assume_p_regular = false);

// Characters of prod Z/m_i with residue degree 1 at p: prod gcd(m_i, p-1).
long long split_character_count(const std::vector<long long>& m_list, long long p);

class PrimeSieve {
public:
    explicit PrimeSieve(long long X);
    long long bound() const { return X_; }
    const std::vector<long long>& primes() const { return primes_; }
    long long pi(long long x) const;
    std::vector<long long> in_class(long long m, long long a) const;

private:
    long long X_;
    std::vector<long long> primes_;
};

// Sum in a fixed pairwise order so results do not depend on evaluation schedule.
Real pairwise_sum(std::vector<Real> v);

struct SumWithPrediction {
    Real value;
    std::optional<Real> predicted;  // leading term, absent when only O(1) is claimed
};

// sum over p <= X, p = a mod m of rho(p^f, r), with the asymptotic leading term.
SumWithPrediction partial_sum_rho(long long X, long long m, long long a, int f, int r);

struct TotThmSum {
    Real sum;
    long long pi_X = 0;
    Real ratio;      // sum / pi(X)
    Real predicted;  // (phi(m) + e^{-1/2} - 1) / phi(m)
};

// sum over odd p <= X, p not dividing m, of rho(p^{f_p}, 0)^{(p-1)/2}.
TotThmSum tot_thm_sum(long long X, long long m);

// sum over p <= X, p = a mod m of p^{-s}.
Real hurwitz_prime_zeta_partial(const Real& s, long long m, long long a, long long X);

}  // namespace iwlambda
