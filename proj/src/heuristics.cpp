#include "iwlambda/heuristics.hpp"

#include <algorithm>
#include <cmath>

#include "iwlambda/arith.hpp"
#include "iwlambda/error.hpp"
#include "iwlambda/rmt.hpp"

namespace iwlambda {

namespace {

const Real& tiny() {
    static const Real eps("1e-60");
    return eps;
}

}  // namespace

Real direct_product(const Real& y, int terms) {
    if (!(y > 0 && y < 1)) throw DomainError("direct_product: need 0 < y < 1");
    Real prod = 1, yt = y;
    for (int t = 1; terms > 0 ? t <= terms : yt > tiny(); ++t) {
        prod *= 1 - yt;
        yt *= y;
    }
    return prod;
}

Real pentagonal_product(const Real& y, int terms) {
    if (!(y > 0 && y < 1)) throw DomainError("pentagonal_product: need 0 < y < 1");
    Real sum = 1;
    for (long long k = 1;; ++k) {
        const Real a = pow(y, static_cast<long long>((3 * k * k - k) / 2));
        const Real b = pow(y, static_cast<long long>((3 * k * k + k) / 2));
        const Real term = (k % 2 ? -1 : 1) * (a + b);
        sum += term;
        if (terms > 0 ? k >= terms : a < tiny()) break;
    }
    return sum;
}

Real rho_pentagonal(long long q, int r) {
    if (q < 2 || r < 0) throw DomainError("rho: need q >= 2 and r >= 0");
    const Real y = Real(1) / Real(q);
    Real head = 1;
    for (int t = 1; t <= r; ++t) head *= 1 - pow(y, t);
    return pow(y, r) * pentagonal_product(y) / head;
}

LambdaPrediction predicted_lambda_distribution(long long p, long long m, int r_max) {
    if (m < 1 || !arith::is_prime(p)) throw DomainError("predicted_lambda_distribution: bad arguments");
    if (m % p == 0) throw DomainError("predicted_lambda_distribution: p divides the order (ramified)");
    LambdaPrediction out;
    out.f = static_cast<int>(arith::multiplicative_order(p % m, m));
    long long q = 1;
    for (int i = 0; i < out.f; ++i) q *= p;
    for (int r = 0; r <= r_max; ++r) out.rho.push_back(rho(q, r));
    return out;
}

Real predicted_regular_proportion(long long m) {
    if (m < 1) throw DomainError("predicted_regular_proportion: m must be positive");
    return 1 + (exp(Real(-0.5)) - 1) / Real(arith::euler_phi(m));
}

long long split_character_count(const std::vector<long long>& m_list, long long p) {
    long long c = 1;
    for (long long m : m_list) {
        if (m < 1 || m % p == 0) throw DomainError("split_character_count: p divides the degree");
        c *= arith::gcd(m, p - 1);
    }
    return c;
}

Real predicted_field_regular(const std::vector<long long>& m_list, long long p, bool assume_p_regular) {
    const long long g = split_character_count(m_list, p);
    return exp(-Real(assume_p_regular ? g - 1 : g) / 2);
}

PrimeSieve::PrimeSieve(long long X) : X_(X) {
    if (X < 2) return;
    std::vector<bool> comp(static_cast<std::size_t>(X) + 1, false);
    for (long long i = 2; i <= X; ++i) {
        if (comp[static_cast<std::size_t>(i)]) continue;
        primes_.push_back(i);
        for (long long j = i * i; j <= X; j += i) comp[static_cast<std::size_t>(j)] = true;
    }
}

long long PrimeSieve::pi(long long x) const {
    return static_cast<long long>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

std::vector<long long> PrimeSieve::in_class(long long m, long long a) const {
    std::vector<long long> out;
    for (long long p : primes_)
        if (arith::mod(p - a, m) == 0) out.push_back(p);
    return out;
}

Real pairwise_sum(std::vector<Real> v) {
    if (v.empty()) return 0;
    while (v.size() > 1) {
        std::vector<Real> next;
        next.reserve((v.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(v[i] + v[i + 1]);
        if (v.size() % 2) next.push_back(v.back());
        v = std::move(next);
    }
    return v[0];
}

SumWithPrediction partial_sum_rho(long long X, long long m, long long a, int f, int r) {
    if (m < 1 || arith::gcd(arith::mod(a, m), m) != 1) throw DomainError("partial_sum_rho: need gcd(a, m) = 1");
    if (f < 1 || r < 0) throw DomainError("partial_sum_rho: need f >= 1 and r >= 0");
    SumWithPrediction out;
    const PrimeSieve sieve(X);
    std::vector<Real> terms;
    for (long long p : sieve.in_class(m, a)) {
        long long q = 1;
        for (int i = 0; i < f; ++i) q *= p;
        terms.push_back(rho(q, r));
    }
    out.value = pairwise_sum(std::move(terms));
    if (X < 3) return out;
    const Real phi = Real(arith::euler_phi(m));
    const Real pi = Real(sieve.pi(X));
    const Real llx = log(log(Real(X)));
    if (f == 1 && r == 0) out.predicted = (pi - llx) / phi;
    if (f == 1 && r == 1) out.predicted = llx / phi;
    if (f >= 2 && r == 0) out.predicted = pi / phi;
    return out;
}

TotThmSum tot_thm_sum(long long X, long long m) {
    if (m < 1) throw DomainError("tot_thm_sum: m must be positive");
    TotThmSum out;
    const PrimeSieve sieve(X);
    std::vector<Real> terms;
    for (long long p : sieve.primes()) {
        if (p == 2 || m % p == 0) continue;
        const int f = static_cast<int>(arith::multiplicative_order(p % m, m));
        long long q = 1;
        for (int i = 0; i < f; ++i) q *= p;
        terms.push_back(pow(rho(q, 0), (p - 1) / 2));
    }
    out.sum = pairwise_sum(std::move(terms));
    out.pi_X = sieve.pi(X);
    out.ratio = out.pi_X ? out.sum / Real(out.pi_X) : Real(0);
    const Real phi = Real(arith::euler_phi(m));
    out.predicted = (phi + exp(Real(-0.5)) - 1) / phi;
    return out;
}

Real hurwitz_prime_zeta_partial(const Real& s, long long m, long long a, long long X) {
    if (!(s > 1)) throw DomainError("hurwitz_prime_zeta_partial: need s > 1");
    if (m < 1) throw DomainError("hurwitz_prime_zeta_partial: m must be positive");
    const PrimeSieve sieve(X);
    std::vector<Real> terms;
    for (long long p : sieve.in_class(m, a)) terms.push_back(pow(Real(p), -s));
    return pairwise_sum(std::move(terms));
}

}  // namespace iwlambda
