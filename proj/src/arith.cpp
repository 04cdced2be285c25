#include "iwlambda/arith.hpp"

#include <limits>
#include <string>

#include "iwlambda/error.hpp"

namespace iwlambda::arith {

u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

u64 invmod(u64 a, u64 m) {
    i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
    i64 old_s = 1, s = 0;
    while (r != 0) {
        const i64 q = old_r / r;
        std::swap(old_r, r);
        r -= q * old_r;
        std::swap(old_s, s);
        s -= q * old_s;
    }
    if (old_r != 1) {
        throw DomainError("invmod: " + std::to_string(a) + " is not invertible modulo " + std::to_string(m));
    }
    return static_cast<u64>(mod(old_s, static_cast<i64>(m)));
}

i64 gcd(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

i64 lcm(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd(a, b) * b;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
    std::vector<std::pair<i64, int>> out;
    if (n < 1) throw DomainError("factorize: n must be positive");
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

i64 euler_phi(i64 n) {
    i64 phi = n;
    for (const auto& [q, e] : factorize(n)) phi = phi / q * (q - 1);
    return phi;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

i64 multiplicative_order(i64 a, i64 m) {
    if (m == 1) return 1;
    a = mod(a, m);
    if (gcd(a, m) != 1) throw DomainError("multiplicative_order: arguments not coprime");
    // The order divides phi(m); strip prime factors while the power stays 1.
    i64 order = euler_phi(m);
    for (const auto& [q, e] : factorize(order)) {
        for (int k = 0; k < e; ++k) {
            if (powmod(static_cast<u64>(a), static_cast<u64>(order / q), static_cast<u64>(m)) == 1) {
                order /= q;
            } else {
                break;
            }
        }
    }
    return order;
}

u64 ipow(u64 p, int k) {
    u64 r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > std::numeric_limits<u64>::max() / p) throw DomainError("ipow: overflow");
        r *= p;
    }
    return r;
}

i64 primitive_root_prime_power(i64 p, int e) {
    const i64 modulus = static_cast<i64>(ipow(static_cast<u64>(p), e));
    const i64 order = (p - 1) * (modulus / p);
    for (i64 g = 2; g < modulus; ++g) {
        if (g % p == 0) continue;
        if (multiplicative_order(g, modulus) == order) return g;
    }
    if (modulus == 2) return 1;
    throw DomainError("primitive_root_prime_power: none found");
}

int valuation(i64 n, i64 p) {
    if (n == 0) throw DomainError("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

}  // namespace iwlambda::arith
