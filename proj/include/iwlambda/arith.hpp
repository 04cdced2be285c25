#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Small-integer number theory shared by every module.
namespace iwlambda::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m);

// Inverse of a modulo m; throws DomainError when gcd(a, m) != 1.
u64 invmod(u64 a, u64 m);

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);

// (prime, exponent) pairs in increasing prime order; n >= 1.
std::vector<std::pair<i64, int>> factorize(i64 n);

i64 euler_phi(i64 n);
bool is_prime(i64 n);

// Smallest t >= 1 with a^t = 1 mod m; requires gcd(a, m) = 1. Returns 1 for m = 1.
i64 multiplicative_order(i64 a, i64 m);

// Smallest primitive root modulo an odd prime power p^e.
i64 primitive_root_prime_power(i64 p, int e);

// p^k as a 64-bit integer; throws if it overflows.
u64 ipow(u64 p, int k);

// p-adic valuation of n != 0.
int valuation(i64 n, i64 p);

// Reduce a into [0, m).
inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace iwlambda::arith
