#include "iwlambda/lambda.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "iwlambda/arith.hpp"
#include "iwlambda/error.hpp"

namespace iwlambda {

using arith::u64;
using arith::u128;

namespace {

BigInt big(long long x) { return BigInt(static_cast<long>(x)); }

BigInt big_pow(long long p, long long k) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

int vp_factorial(long long n, long long p) {
    int v = 0;
    for (long long q = p; q <= n; q *= p) v += static_cast<int>(n / q);
    return v;
}

BernoulliCache& cache_of(const LambdaParams& params) {
    return params.cache ? *params.cache : default_bernoulli_cache();
}

struct Decision {
    int lambda = 0;
    bool lower_bound = false;
    bool undecided = false;
};

// Index of the first unit coefficient, consulting only guaranteed digits.
Decision first_unit(const PowerSeriesApprox& s) {
    for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
        if (s.precision[j] < 1) return {static_cast<int>(j), false, true};
        const UnramifiedElem& c = s.coeffs[j];
        if (c.is_zero() || c.valuation() > 0) continue;
        if (c.valuation() < 0) throw Error("lambda: power series coefficient is not integral");
        return {static_cast<int>(j), false, false};
    }
    return {static_cast<int>(s.coeffs.size()), true, false};
}

void finish(LambdaResult& r, const TwistedChar& tc) {
    r.trivial_zero = tc.trivial_zero_flag();
    if (r.trivial_zero && r.lambda == 0 && !r.lower_bound) {
        throw Error("lambda: trivial zero not detected for " + tc.label());
    }
    r.lambda_corr = r.trivial_zero ? std::max(0, r.lambda - 1) : r.lambda;
    r.order = tc.theta.order();
}

// ---- Method II kernels on machine integers modulo powers of p ----

u64 upow(u64 b, u64 e, u64 m) { return arith::powmod(b % m, e, m); }

struct LogContext {
    long long p = 0;
    int R = 0;    // logs are wanted modulo p^R
    u64 PR = 1;   // p^R
    u64 Q = 1;    // p^(R + guard): working modulus of the series
    int kmax = 0;
    std::vector<u64> inv_unit;  // inverse of k / p^{v_p(k)} mod p^R
    std::vector<int> vk;
    std::vector<u64> omega_inv; // omega(r)^{-1} mod Q for r in [1, p)

    LogContext(long long p_, int R_) : p(p_), R(R_) {
        PR = arith::ipow(static_cast<u64>(p), R);
        auto floor_log = [&](long long k) {
            int t = 0;
            for (long long q = p; q <= k; q *= p) ++t;
            return t;
        };
        kmax = 0;
        while (kmax + 1 - floor_log(kmax + 1) < R) ++kmax;
        const int guard = floor_log(std::max(kmax, 1));
        Q = arith::ipow(static_cast<u64>(p), R + guard);
        inv_unit.assign(static_cast<std::size_t>(kmax) + 1, 0);
        vk.assign(static_cast<std::size_t>(kmax) + 1, 0);
        for (int k = 1; k <= kmax; ++k) {
            long long u = k;
            int v = 0;
            while (u % p == 0) {
                u /= p;
                ++v;
            }
            vk[static_cast<std::size_t>(k)] = v;
            inv_unit[static_cast<std::size_t>(k)] = arith::invmod(static_cast<u64>(u), PR);
        }
        omega_inv.assign(static_cast<std::size_t>(p), 0);
        for (long long r = 1; r < p; ++r) {
            u64 w = static_cast<u64>(r);
            for (int t = 0; t < R + guard; ++t) w = upow(w, static_cast<u64>(p), Q);
            omega_inv[static_cast<std::size_t>(r)] = arith::invmod(w, Q);
        }
    }

    // log_p of the principal unit <x> = x / omega(x), modulo p^R.
    u64 log_principal(u64 x) const {
        const u64 u = arith::mulmod(x % Q, omega_inv[static_cast<std::size_t>(x % static_cast<u64>(p))], Q);
        const u64 y = (u + Q - 1) % Q;
        u64 sum = 0;
        u64 yk = 1;
        for (int k = 1; k <= kmax; ++k) {
            yk = arith::mulmod(yk, y, Q);
            if (yk == 0) break;
            const u64 pv = arith::ipow(static_cast<u64>(p), vk[static_cast<std::size_t>(k)]);
            u64 term = arith::mulmod((yk / pv) % PR, inv_unit[static_cast<std::size_t>(k)], PR);
            if (k % 2 == 0) term = (PR - term) % PR;
            sum = (sum + term) % PR;
        }
        return sum;
    }
};

struct LogTable {
    std::unique_ptr<LogContext> ctx;
    std::vector<u64> lg;  // log<x> mod p^R for x in [0, p^N), 0 where p | x
};

std::shared_ptr<const LogTable> log_table(long long p, int N, int R) {
    static std::map<std::tuple<long long, int, int>, std::shared_ptr<const LogTable>> cache;
    static std::mutex mu;
    const auto key = std::make_tuple(p, N, R);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto t = std::make_shared<LogTable>();
    t->ctx = std::make_unique<LogContext>(p, R);
    const u64 pN = arith::ipow(static_cast<u64>(p), N);
    t->lg.assign(pN, 0);
    for (u64 x = 1; x < pN; ++x) {
        if (x % static_cast<u64>(p) == 0) continue;
        t->lg[x] = t->ctx->log_principal(x);
    }
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 8) cache.clear();
    return cache.emplace(key, t).first->second;
}

// binom(l, j) mod p^W for j < J, given l mod p^(W + v_p((J-1)!)).
struct BinomialKernel {
    long long p;
    int J;
    u64 PL, PW;
    std::vector<u64> pv;       // p^{v_p(j!)}
    std::vector<u64> inv_unit; // (j! / p^{v_p(j!)})^{-1} mod p^W

    BinomialKernel(long long p_, int J_, int W, int L) : p(p_), J(J_) {
        PL = arith::ipow(static_cast<u64>(p), L);
        PW = arith::ipow(static_cast<u64>(p), W);
        pv.resize(static_cast<std::size_t>(J));
        inv_unit.resize(static_cast<std::size_t>(J));
        u64 unit = 1;
        int v = 0;
        for (int j = 0; j < J; ++j) {
            if (j > 0) {
                long long u = j;
                while (u % p == 0) {
                    u /= p;
                    ++v;
                }
                unit = arith::mulmod(unit, static_cast<u64>(u) % PW, PW);
            }
            pv[static_cast<std::size_t>(j)] = arith::ipow(static_cast<u64>(p), v);
            inv_unit[static_cast<std::size_t>(j)] = arith::invmod(unit, PW);
        }
    }

    void eval(u64 l, u64* out) const {
        u64 num = 1;
        for (int j = 0; j < J; ++j) {
            out[j] = arith::mulmod((num / pv[static_cast<std::size_t>(j)]) % PW, inv_unit[static_cast<std::size_t>(j)], PW);
            num = arith::mulmod(num, (l + PL - static_cast<u64>(j) % PL) % PL, PL);
        }
    }
};

UnramifiedElem element_from_buckets(const FieldPtr& field, const std::vector<u64>& bucket, int prec) {
    const auto f = static_cast<std::size_t>(field->f);
    std::vector<BigInt> v(f, 0);
    for (std::size_t e = 0; e < bucket.size(); ++e) {
        if (bucket[e] == 0) continue;
        const BigInt b = BigInt(static_cast<unsigned long>(bucket[e]));
        const auto& z = field->zeta_pow[e * static_cast<std::size_t>(field->m / static_cast<int>(bucket.size()))];
        for (std::size_t i = 0; i < f; ++i) v[i] += b * z[i];
    }
    return UnramifiedElem::from_vector(field, std::move(v), prec);
}

}  // namespace

std::string PowerSeriesApprox::residues_mod_p() const {
    std::ostringstream os;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (j > 0) os << ';';
        const UnramifiedElem& c = coeffs[j];
        if (precision[j] < 1) {
            os << '?';
        } else if (!c.is_zero() && c.valuation() < 0) {
            os << '!';
        } else {
            const auto r = c.residue(1);
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i].get_str();
        }
    }
    return os.str();
}

std::string LambdaResult::lambda_text() const { return (lower_bound ? ">=" : "") + std::to_string(lambda); }
std::string LambdaResult::lambda_corr_text() const { return (lower_bound ? ">=" : "") + std::to_string(lambda_corr); }

std::vector<std::pair<int, PadicScalar>> interpolation_nodes(long long p, int i, int C, int K) {
    if (i < 0 || i > p - 2) throw DomainError("interpolation_nodes: twist index out of range");
    if (C < 2) throw DomainError("interpolation_nodes: need at least two nodes");
    std::vector<std::pair<int, PadicScalar>> out;
    const BigInt modulus = big_pow(p, K);
    for (int k = 1; static_cast<int>(out.size()) < C; ++k) {
        const long long n = i + static_cast<long long>(k) * (p - 1);
        if (n < 1) continue;
        BigInt t;
        const BigInt base = big(1 + p);
        mpz_powm_ui(t.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n - 1), modulus.get_mpz_t());
        t -= 1;
        out.emplace_back(static_cast<int>(n), PadicScalar::from_integer(p, t, K));
    }
    return out;
}

UnramifiedElem lvalue_at_node(const DirichletChar& theta_in, int i, int n, const FieldPtr& field, BernoulliCache* cache) {
    const long long p = field->p;
    const DirichletChar theta = theta_in.primitive();
    if (theta.conductor() % p == 0) throw DomainError("lvalue_at_node: p divides the conductor of theta");
    if (n < 1 || arith::mod(n - i, p - 1) != 0) throw DomainError("lvalue_at_node: n is not congruent to i mod p-1");
    if (field->m != theta.order()) throw DomainError("lvalue_at_node: field does not match the order of theta");
    const int K = field->K;
    BernoulliCache& bc = cache ? *cache : default_bernoulli_cache();
    const CycRational B = bc.get(theta, n);
    const UnramifiedElem b = embed_cyclotomic(B, field);
    const long long kp = *theta.value_exponent(p);
    const PadicScalar pn = PadicScalar::from_integer(p, big_pow(p, n - 1), K + n);
    const UnramifiedElem euler = UnramifiedElem::one(field) - UnramifiedElem::zeta_power(field, kp) * pn;
    return -((euler * b) / PadicScalar::from_integer(p, big(n), K + n));
}

void check_lambda_preconditions(const TwistedChar& tc) {
    if (!tc.is_even()) throw DomainError("lambda: " + tc.label() + " is odd");
    if (tc.is_trivial()) throw DomainError("lambda: the trivial character has a pole");
    if (tc.theta.order() % tc.p == 0) throw DomainError("lambda: p divides the order of theta (ramified)");
}

LambdaResult lambda_method_one(const TwistedChar& tc, const LambdaParams& params) {
    check_lambda_preconditions(tc);
    const long long p = tc.p;
    const int C = params.C;
    if (C < 2) throw DomainError("lambda_method_one: C must be at least 2");
    const int m = static_cast<int>(tc.theta.order());
    const long long n_max = tc.i + static_cast<long long>(C) * (p - 1);
    int log_n = 0;
    for (long long q = p; q <= n_max; q *= p) ++log_n;
    int K = params.K > 0 ? params.K : C + 10 + vp_factorial(C - 1, p) + log_n;
    BernoulliCache& bc = cache_of(params);

    for (int attempt = 0; attempt < 4; ++attempt, K += C + 10) {
        FieldPtr field = cached_extension(p, m, K, params.factor_index);
        const auto nodes = interpolation_nodes(p, tc.i, C, K);
        std::vector<int> ns;
        for (const auto& nd : nodes) ns.push_back(nd.first);
        bc.get(tc.theta, ns);  // one pass for every node

        std::vector<UnramifiedElem> dd;
        std::vector<PadicScalar> t;
        for (const auto& [n, tk] : nodes) {
            dd.push_back(lvalue_at_node(tc.theta, tc.i, n, field, &bc));
            t.push_back(tk);
        }
        // Newton divided differences
        for (int j = 1; j < C; ++j) {
            for (int k = C - 1; k >= j; --k) {
                dd[static_cast<std::size_t>(k)] = (dd[static_cast<std::size_t>(k)] - dd[static_cast<std::size_t>(k - 1)]) /
                                                  (t[static_cast<std::size_t>(k)] - t[static_cast<std::size_t>(k - j)]);
            }
        }
        // Newton form to monomial coefficients
        std::vector<UnramifiedElem> poly{dd[static_cast<std::size_t>(C - 1)]};
        for (int k = C - 2; k >= 0; --k) {
            const PadicScalar& tk = t[static_cast<std::size_t>(k)];
            std::vector<UnramifiedElem> next(poly.size() + 1, UnramifiedElem::zero(field, K + 1000));
            for (std::size_t d = 0; d < poly.size(); ++d) {
                next[d + 1] = next[d + 1] + poly[d];
                next[d] = next[d] - poly[d] * tk;
            }
            next[0] = next[0] + dd[static_cast<std::size_t>(k)];
            poly = std::move(next);
        }

        LambdaResult r;
        r.method = "I";
        r.parameter = C;
        r.f = field->f;
        r.series.field = field;
        r.series.coeffs = poly;
        for (int j = 0; j < C; ++j) {
            r.series.precision.push_back(std::min(C - j, poly[static_cast<std::size_t>(j)].absolute_precision()));
        }
        const Decision d = first_unit(r.series);
        if (d.undecided) continue;
        r.lambda = d.lambda;
        r.lower_bound = d.lower_bound;
        finish(r, tc);
        return r;
    }
    throw PrecisionExhausted("lambda_method_one: precision exhausted for " + tc.label());
}

MethodTwoSeries method_two_series(const TwistedChar& tc, const LambdaParams& params) {
    check_lambda_preconditions(tc);
    const long long p = tc.p;
    const int N = params.N;
    if (N < 3) throw DomainError("lambda_method_two: N must be at least 3");
    const int J = params.J > 0 ? params.J : static_cast<int>(p) + 2;
    const DirichletChar& theta = tc.theta;
    const long long d = theta.conductor();
    const int m = static_cast<int>(theta.order());
    long long c = std::max<long long>(params.c, 2);
    while (arith::gcd(c, d * p) != 1) ++c;

    const int W = N;                            // coefficient precision
    const int L = W + vp_factorial(J - 1, p);   // precision of l(a)
    const int R = L + 1;                        // precision of the logarithms
    const u64 pN = arith::ipow(static_cast<u64>(p), N);
    const u64 PW = arith::ipow(static_cast<u64>(p), W);
    const u64 PL = arith::ipow(static_cast<u64>(p), L);
    if (static_cast<long double>(d) * static_cast<long double>(pN) > 4e12L) throw DomainError("lambda_method_two: d p^N too large");
    const u64 F = static_cast<u64>(d) * pN;

    auto table = log_table(p, N, R);
    const LogContext& lc = *table->ctx;
    // l(x) = -log<x> / log(1 + p d)
    const u64 Ld = lc.log_principal(static_cast<u64>(1 + p * d));
    const u64 inv_ld = arith::invmod((Ld / static_cast<u64>(p)) % PL, PL);
    auto ell = [&](u64 lg) { return (PL - arith::mulmod((lg / static_cast<u64>(p)) % PL, inv_ld, PL)) % PL; };

    // theta exponents on residues mod d
    std::vector<int> texp(static_cast<std::size_t>(d), -1);
    for (long long a = 0; a < d; ++a) {
        const auto k = theta.value_exponent(a);
        if (k) texp[static_cast<std::size_t>(a)] = static_cast<int>(*k);
    }
    // 2 w(a) summed into buckets (x = a mod p^N, theta exponent)
    std::vector<long long> wsum(static_cast<std::size_t>(pN) * static_cast<std::size_t>(m), 0);
    const bool parity_weights = (c == 2);
    const u64 cinv = parity_weights ? 0 : arith::invmod(static_cast<u64>(c) % F, F);
    {
        u64 ad = 1 % static_cast<u64>(d), ax = 1 % pN;
        for (u64 a = 1; a <= F; ++a) {
            const int e = texp[ad];
            if (e >= 0 && ax % static_cast<u64>(p) != 0) {
                long long w2;
                if (parity_weights) {
                    w2 = (a % 2 == 0) ? 1 : -1;
                } else {
                    const u64 r = arith::mulmod(cinv, a % F, F);
                    const long long q = static_cast<long long>((static_cast<__int128>(a) - static_cast<__int128>(c) * r) / static_cast<__int128>(F));
                    w2 = 2 * q + c - 1;
                }
                wsum[ax * static_cast<u64>(m) + static_cast<u64>(e)] += w2;
            }
            if (++ad == static_cast<u64>(d)) ad = 0;
            if (++ax == pN) ax = 0;
        }
    }

    // omega^{i-1} on residues mod p, to precision W
    const long long tw = arith::mod(tc.i - 1, p - 1);
    std::vector<u64> omega_pow(static_cast<std::size_t>(p), 0);
    for (long long r = 1; r < p; ++r) {
        const u64 w = arith::invmod(lc.omega_inv[static_cast<std::size_t>(r)], lc.Q) % PW;
        omega_pow[static_cast<std::size_t>(r)] = upow(w, static_cast<u64>(tw), PW);
    }

    BinomialKernel bk(p, J, W, L);
    std::vector<u128> acc(static_cast<std::size_t>(J) * static_cast<std::size_t>(m), 0);
    std::vector<u64> binom(static_cast<std::size_t>(J));
    std::vector<u64> wx(static_cast<std::size_t>(m));
    for (u64 x = 1; x < pN; ++x) {
        if (x % static_cast<u64>(p) == 0) continue;
        bool any = false;
        for (int e = 0; e < m; ++e) {
            const long long s = wsum[x * static_cast<u64>(m) + static_cast<u64>(e)];
            wx[static_cast<std::size_t>(e)] = static_cast<u64>(arith::mod(s, static_cast<long long>(PW)));
            any = any || wx[static_cast<std::size_t>(e)] != 0;
        }
        if (!any) continue;
        bk.eval(ell(table->lg[x]), binom.data());
        const u64 om = omega_pow[static_cast<std::size_t>(x % static_cast<u64>(p))];
        for (int j = 0; j < J; ++j) {
            const u64 bj = arith::mulmod(binom[static_cast<std::size_t>(j)], om, PW);
            if (bj == 0) continue;
            for (int e = 0; e < m; ++e) {
                acc[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) + static_cast<std::size_t>(e)] +=
                    static_cast<u128>(bj) * wx[static_cast<std::size_t>(e)];
            }
        }
    }

    MethodTwoSeries out;
    out.c = c;
    FieldPtr field = cached_extension(p, m, std::max(W, 2), params.factor_index);
    const u64 inv2 = arith::invmod(2, PW);
    out.lhs.field = field;
    for (int j = 0; j < J; ++j) {
        std::vector<u64> bucket(static_cast<std::size_t>(m));
        for (int e = 0; e < m; ++e) {
            const u64 v = static_cast<u64>(acc[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) + static_cast<std::size_t>(e)] % PW);
            bucket[static_cast<std::size_t>(e)] = arith::mulmod(v, inv2, PW);
        }
        out.lhs.coeffs.push_back(element_from_buckets(field, bucket, W));
        out.lhs.precision.push_back(std::min(N - 2, N - 1 - vp_factorial(j, p)));
    }

    // 1 - chi(c) <c> (1+T)^{l(c)}, with chi(c) <c> = theta(c) omega(c)^{i-1} c
    const long long kc = *theta.value_exponent(c);
    const u64 lc_c = ell(lc.log_principal(static_cast<u64>(c)));
    bk.eval(lc_c, binom.data());
    const u64 scale = arith::mulmod(omega_pow[static_cast<std::size_t>(c % p)], static_cast<u64>(c) % PW, PW);
    out.factor.field = field;
    for (int j = 0; j < J; ++j) {
        std::vector<u64> bucket(static_cast<std::size_t>(m), 0);
        bucket[static_cast<std::size_t>(kc)] = (PW - arith::mulmod(scale, binom[static_cast<std::size_t>(j)], PW)) % PW;
        UnramifiedElem b = element_from_buckets(field, bucket, W);
        if (j == 0) b = b + UnramifiedElem::one(field);
        out.factor.coeffs.push_back(b.truncated(W));
        out.factor.precision.push_back(W);
    }
    return out;
}

namespace {

LambdaResult method_two_once(const TwistedChar& tc, const LambdaParams& params) {
    const MethodTwoSeries s = method_two_series(tc, params);
    const Decision dl = first_unit(s.lhs);
    const Decision df = first_unit(s.factor);
    if (df.lower_bound || df.undecided) throw PrecisionExhausted("lambda_method_two: regularization factor has no unit coefficient");
    if (dl.undecided && dl.lambda <= df.lambda) throw PrecisionExhausted("lambda_method_two: precision exhausted for " + tc.label());
    LambdaResult r;
    r.method = "II";
    r.parameter = params.N;
    r.f = s.lhs.field->f;
    r.series = s.lhs;
    if (dl.undecided) {
        r.lambda = dl.lambda - df.lambda;
        r.lower_bound = true;
    } else {
        if (dl.lambda < df.lambda) throw Error("lambda_method_two: series has smaller lambda than the regularization factor for " + tc.label());
        r.lambda = dl.lambda - df.lambda;
        r.lower_bound = dl.lower_bound;
    }
    finish(r, tc);
    return r;
}

}  // namespace

LambdaResult lambda_method_two(const TwistedChar& tc, const LambdaParams& params) {
    LambdaParams cur = params;
    LambdaResult r = method_two_once(tc, cur);
    // a bound means the series ran out of coefficients; widen and deepen while the sum stays affordable
    for (int attempt = 0; attempt < 3 && r.lower_bound; ++attempt) {
        const long long p = tc.p;
        cur.J = (cur.J > 0 ? cur.J : static_cast<int>(p) + 2) + static_cast<int>(p) + 2;
        cur.N += 2;
        double terms = static_cast<double>(tc.theta.conductor());
        for (int k = 0; k < cur.N; ++k) terms *= static_cast<double>(p);
        if (terms > 3e7) break;
        LambdaResult next;
        try {
            next = method_two_once(tc, cur);
        } catch (const PrecisionExhausted&) {
            break;
        }
        if (next.lower_bound && next.lambda < r.lambda) break;
        r = next;
    }
    return r;
}

LambdaResult lambda_crosscheck(const TwistedChar& tc, const LambdaParams& params) {
    const LambdaResult one = lambda_method_one(tc, params);
    const LambdaResult two = lambda_method_two(tc, params);
    bool ok;
    LambdaResult r = one;
    if (!one.lower_bound && !two.lower_bound) {
        ok = one.lambda == two.lambda;
    } else if (!one.lower_bound) {
        ok = one.lambda >= two.lambda;
    } else if (!two.lower_bound) {
        ok = two.lambda >= one.lambda;
        r = two;
    } else {
        ok = true;
        if (two.lambda > one.lambda) r = two;
    }
    if (!ok) {
        std::ostringstream os;
        os << "lambda methods disagree for " << tc.label() << " at p=" << tc.p << ": method I gives " << one.lambda_text()
           << " with coefficients mod p [" << one.series.residues_mod_p() << "], method II gives " << two.lambda_text()
           << " with coefficients mod p [" << two.series.residues_mod_p() << "]";
        throw MethodDisagreement(os.str());
    }
    r.method = "I+II";
    r.cross_checked = true;
    r.agreement = true;
    return r;
}

}  // namespace iwlambda
