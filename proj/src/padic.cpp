#include "iwlambda/padic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

#include "iwlambda/arith.hpp"
#include "iwlambda/error.hpp"

namespace iwlambda {

namespace {

BigInt ppow(long long p, int k) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::max(k, 0)));
    return r;
}

BigInt reduce(const BigInt& n, const BigInt& modulus) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

// Strips p from n != 0 and returns the count.
int strip(BigInt& n, long long p) {
    BigInt pz = static_cast<long>(p);
    return static_cast<int>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

BigInt inverse_mod(const BigInt& a, const BigInt& modulus) {
    BigInt r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0) {
        throw DomainError("inverse_mod: not invertible");
    }
    return r;
}

// ---- polynomials over F_p, constant term first, no trailing zeros ----

using FpPoly = std::vector<long long>;

void trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

FpPoly fp_sub(const FpPoly& a, const FpPoly& b, long long p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = arith::mod(r[i] - b[i], p);
    trim(r);
    return r;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long long p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return r;
}

// (quotient, remainder) of a by nonzero b.
std::pair<FpPoly, FpPoly> fp_divmod(FpPoly a, const FpPoly& b, long long p) {
    const int db = deg(b);
    const long long lead_inv = static_cast<long long>(arith::invmod(static_cast<arith::u64>(b.back()), static_cast<arith::u64>(p)));
    if (deg(a) < db) return {{}, a};
    FpPoly q(static_cast<std::size_t>(deg(a) - db + 1), 0);
    for (int i = deg(a); i >= db; --i) {
        const long long c = a[static_cast<std::size_t>(i)] * lead_inv % p;
        q[static_cast<std::size_t>(i - db)] = c;
        if (c == 0) continue;
        for (int k = 0; k <= db; ++k) {
            auto& slot = a[static_cast<std::size_t>(i - db + k)];
            slot = arith::mod(slot - c * b[static_cast<std::size_t>(k)], p);
        }
    }
    trim(a);
    trim(q);
    return {q, a};
}

FpPoly fp_monic(FpPoly a, long long p) {
    if (a.empty()) return a;
    const long long inv = static_cast<long long>(arith::invmod(static_cast<arith::u64>(a.back()), static_cast<arith::u64>(p)));
    for (auto& c : a) c = c * inv % p;
    return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, long long p) {
    while (!b.empty()) {
        auto r = fp_divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    return fp_monic(a, p);
}

// s, t with s a + t b = 1 for coprime a, b.
std::pair<FpPoly, FpPoly> fp_bezout(const FpPoly& a, const FpPoly& b, long long p) {
    FpPoly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (!r1.empty()) {
        auto [q, r] = fp_divmod(r0, r1, p);
        r0 = std::move(r1);
        r1 = std::move(r);
        auto s2 = fp_sub(s0, fp_mul(q, s1, p), p);
        s0 = std::move(s1);
        s1 = std::move(s2);
        auto t2 = fp_sub(t0, fp_mul(q, t1, p), p);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (deg(r0) != 0) throw DomainError("fp_bezout: polynomials not coprime");
    const long long inv = static_cast<long long>(arith::invmod(static_cast<arith::u64>(r0[0]), static_cast<arith::u64>(p)));
    for (auto& c : s0) c = c * inv % p;
    for (auto& c : t0) c = c * inv % p;
    return {s0, t0};
}

FpPoly fp_powmod(FpPoly base, const BigInt& e, const FpPoly& modulus, long long p) {
    FpPoly result = {1};
    base = fp_divmod(base, modulus, p).second;
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = fp_divmod(fp_mul(result, result, p), modulus, p).second;
        if (mpz_tstbit(e.get_mpz_t(), i) != 0) result = fp_divmod(fp_mul(result, base, p), modulus, p).second;
    }
    return result;
}

// Cantor-Zassenhaus equal-degree splitting of a squarefree product of degree-f factors.
void equal_degree_split(const FpPoly& h, int f, long long p, std::mt19937_64& rng, std::vector<FpPoly>& out) {
    if (deg(h) == f) {
        out.push_back(fp_monic(h, p));
        return;
    }
    BigInt e = ppow(p, f);
    e = (e - 1) / 2;
    std::uniform_int_distribution<long long> coin(0, p - 1);
    for (;;) {
        FpPoly a(static_cast<std::size_t>(deg(h)), 0);
        for (auto& c : a) c = coin(rng);
        trim(a);
        if (deg(a) < 1) continue;
        FpPoly b = fp_powmod(a, e, h, p);
        b = fp_sub(b, FpPoly{1}, p);
        FpPoly d = fp_gcd(b, h, p);
        if (deg(d) > 0 && deg(d) < deg(h)) {
            equal_degree_split(d, f, p, rng, out);
            equal_degree_split(fp_divmod(h, d, p).first, f, p, rng, out);
            return;
        }
    }
}

IntPoly int_mul(const IntPoly& a, const IntPoly& b) {
    IntPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

IntPoly to_int(const FpPoly& a, std::size_t len) {
    IntPoly r(len, 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<long>(a[i]);
    return r;
}

// Lift Phi = g h mod p to Phi = ghat hhat mod p^K (g, h monic, coprime).
IntPoly hensel_lift(const IntPoly& phi, const FpPoly& g, const FpPoly& h, long long p, int K) {
    const auto [s, t] = fp_bezout(g, h, p);
    IntPoly G = to_int(g, g.size());
    IntPoly H = to_int(h, h.size());
    BigInt pk = static_cast<long>(p);
    for (int k = 1; k < K; ++k) {
        IntPoly gh = int_mul(G, H);
        FpPoly e(phi.size(), 0);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            BigInt diff = phi[i] - (i < gh.size() ? gh[i] : BigInt(0));
            BigInt q = diff / pk;  // exact
            e[i] = mpz_fdiv_ui(q.get_mpz_t(), static_cast<unsigned long>(p));
        }
        trim(e);
        const FpPoly r = fp_divmod(fp_mul(t, e, p), g, p).second;
        const FpPoly dh = fp_divmod(fp_sub(e, fp_mul(h, r, p), p), g, p).first;
        for (std::size_t i = 0; i < r.size(); ++i) G[i] += pk * static_cast<long>(r[i]);
        for (std::size_t i = 0; i < dh.size(); ++i) H[i] += pk * static_cast<long>(dh[i]);
        pk *= static_cast<long>(p);
    }
    for (auto& c : G) c = reduce(c, pk);
    return G;
}

// Multiply two length-f vectors modulo the monic ghat and p^r.
std::vector<BigInt> mulmod_poly(const std::vector<BigInt>& a, const std::vector<BigInt>& b, const IntPoly& ghat,
                                const BigInt& modulus) {
    const std::size_t f = a.size();
    std::vector<BigInt> prod(2 * f - 1, 0);
    for (std::size_t i = 0; i < f; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < f; ++j) prod[i + j] += a[i] * b[j];
    }
    for (std::size_t i = prod.size(); i-- > f;) {
        BigInt c = reduce(prod[i], modulus);
        if (c == 0) continue;
        for (std::size_t k = 0; k < f; ++k) prod[i - f + k] -= c * ghat[k];
    }
    std::vector<BigInt> out(f);
    for (std::size_t i = 0; i < f; ++i) out[i] = reduce(prod[i], modulus);
    return out;
}

}  // namespace

// ---------------------------------------------------------------- PadicScalar

PadicScalar::PadicScalar(long long p, int val, BigInt unit, int rel)
    : p_(p), val_(val), unit_(std::move(unit)), rel_(rel) {}

PadicScalar PadicScalar::zero(long long p, int abs_prec) { return PadicScalar(p, abs_prec, 0, 0); }

PadicScalar PadicScalar::normalized(long long p, int shift, BigInt n, int abs_prec) {
    const int r = abs_prec - shift;
    if (r <= 0) return zero(p, abs_prec);
    n = reduce(n, ppow(p, r));
    if (n == 0) return zero(p, abs_prec);
    const int v = strip(n, p);
    const int rel = r - v;
    return PadicScalar(p, shift + v, reduce(n, ppow(p, rel)), rel);
}

PadicScalar PadicScalar::from_integer(long long p, const BigInt& n, int abs_prec) {
    return normalized(p, 0, n, abs_prec);
}

PadicScalar PadicScalar::from_rational(long long p, const BigRational& q, int abs_prec) {
    BigInt den = q.get_den();
    const int vden = strip(den, p);
    const int r = abs_prec + vden;
    if (r <= 0) return zero(p, abs_prec);
    const BigInt modulus = ppow(p, r);
    BigInt n = reduce(BigInt(q.get_num()) * inverse_mod(den, modulus), modulus);
    return normalized(p, -vden, n, abs_prec);
}

BigInt PadicScalar::residue(int k) const {
    if (k > absolute_precision()) throw PrecisionExhausted("PadicScalar::residue: not enough precision");
    if (is_zero()) return 0;
    if (val_ < 0) throw DomainError("PadicScalar::residue: value is not integral");
    return reduce(unit_ * ppow(p_, val_), ppow(p_, k));
}

PadicScalar PadicScalar::operator-() const {
    if (is_zero()) return *this;
    return PadicScalar(p_, val_, reduce(-unit_, ppow(p_, rel_)), rel_);
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    const int abs = std::min(a.absolute_precision(), b.absolute_precision());
    if (a.is_zero() && b.is_zero()) return PadicScalar::zero(a.p_, abs);
    if (a.is_zero()) return PadicScalar::normalized(b.p_, b.val_, b.unit_, abs);
    if (b.is_zero()) return PadicScalar::normalized(a.p_, a.val_, a.unit_, abs);
    const int shift = std::min(a.val_, b.val_);
    BigInt n = a.unit_ * ppow(a.p_, a.val_ - shift) + b.unit_ * ppow(a.p_, b.val_ - shift);
    return PadicScalar::normalized(a.p_, shift, std::move(n), abs);
}

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    if (a.is_zero() && b.is_zero()) return PadicScalar::zero(a.p_, a.val_ + b.val_);
    if (a.is_zero()) return PadicScalar::zero(a.p_, a.val_ + b.val_);
    if (b.is_zero()) return PadicScalar::zero(a.p_, a.val_ + b.val_);
    const int rel = std::min(a.rel_, b.rel_);
    return PadicScalar(a.p_, a.val_ + b.val_, reduce(a.unit_ * b.unit_, ppow(a.p_, rel)), rel);
}

PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
    if (b.is_zero()) throw DomainError("PadicScalar: division by zero");
    if (a.is_zero()) return PadicScalar::zero(a.p_, a.val_ - b.val_);
    const int rel = std::min(a.rel_, b.rel_);
    const BigInt modulus = ppow(a.p_, rel);
    return PadicScalar(a.p_, a.val_ - b.val_, reduce(a.unit_ * inverse_mod(b.unit_, modulus), modulus), rel);
}

bool PadicScalar::equals_at_precision(const PadicScalar& other) const { return (*this - other).is_zero(); }

std::string PadicScalar::to_string() const {
    std::ostringstream os;
    if (is_zero()) {
        os << "O(" << p_ << "^" << val_ << ")";
    } else {
        os << unit_.get_str() << "*" << p_ << "^" << val_ << " + O(" << p_ << "^" << absolute_precision() << ")";
    }
    return os.str();
}

PadicScalar teichmuller(long long a, long long p, int K) {
    if (arith::mod(a, p) == 0) throw DomainError("teichmuller: a is divisible by p");
    if (K < 1) throw DomainError("teichmuller: precision must be positive");
    const BigInt modulus = ppow(p, K);
    BigInt x = reduce(BigInt(static_cast<long>(a)), modulus);
    const BigInt pz = static_cast<long>(p);
    // x -> x^p converges to omega(a); K - 1 steps fix K digits.
    for (int i = 1; i < K; ++i) mpz_powm(x.get_mpz_t(), x.get_mpz_t(), pz.get_mpz_t(), modulus.get_mpz_t());
    return PadicScalar::from_integer(p, x, K);
}

PadicScalar principal_unit(long long a, long long p, int K) {
    const PadicScalar w = teichmuller(a, p, K);
    return PadicScalar::from_integer(p, BigInt(static_cast<long>(a)), K) / w;
}

PadicScalar padic_log(const PadicScalar& u) {
    const long long p = u.prime();
    if (u.is_zero() || u.valuation() != 0) throw DomainError("padic_log: argument is not a principal unit");
    const int A = u.absolute_precision();
    const BigInt modA = ppow(p, A);
    BigInt x = reduce(u.residue(A) - 1, modA);
    if (mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(p)) != 0) {
        throw DomainError("padic_log: argument is not congruent to 1 mod p");
    }
    if (x == 0) return PadicScalar::zero(p, A);
    BigInt xs = x;
    const int vx = strip(xs, p);
    // Terms x^k/k with k*vx - v_p(k) >= A vanish modulo p^A.
    int kmax = 1;
    while (static_cast<double>(kmax + 1) * vx - std::log(static_cast<double>(kmax + 1)) / std::log(static_cast<double>(p)) < A) {
        ++kmax;
    }
    int guard = 0;
    for (long long pk = p; pk <= kmax; pk *= p) ++guard;
    const BigInt work = ppow(p, A + guard);
    BigInt sum = 0;
    BigInt xk = 1;
    for (int k = 1; k <= kmax; ++k) {
        xk = reduce(xk * x, work);
        int v = 0;
        long long ku = k;
        while (ku % p == 0) {
            ku /= p;
            ++v;
        }
        BigInt term = xk / ppow(p, v);
        term *= inverse_mod(BigInt(static_cast<long>(ku)), modA);
        if (k % 2 == 0) term = -term;
        sum += term;
    }
    return PadicScalar::from_integer(p, reduce(sum, modA), A);
}

// ----------------------------------------------------------- UnramifiedField

std::vector<std::vector<long long>> cyclotomic_factors_mod_p(long long p, int m) {
    if (p < 3 || !arith::is_prime(p)) throw DomainError("cyclotomic_factors_mod_p: p must be an odd prime");
    if (m % p == 0) throw DomainError("cyclotomic_factors_mod_p: p divides m (ramified)");
    const int f = static_cast<int>(arith::multiplicative_order(p, m));
    const IntPoly& phi = cyclotomic_polynomial(m);
    FpPoly h(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        h[i] = static_cast<long long>(mpz_fdiv_ui(phi[i].get_mpz_t(), static_cast<unsigned long>(p)));
    }
    trim(h);
    std::vector<FpPoly> factors;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ static_cast<unsigned long long>(p * 1000003 + m));
    equal_degree_split(h, f, p, rng, factors);
    std::sort(factors.begin(), factors.end());
    return factors;
}

FieldPtr build_extension(long long p, int m, int K, int factor_index) {
    if (K < 1) throw DomainError("build_extension: precision must be positive");
    auto factors = cyclotomic_factors_mod_p(p, m);
    if (factor_index < 0 || factor_index >= static_cast<int>(factors.size())) {
        throw DomainError("build_extension: factor index out of range");
    }
    auto field = std::make_shared<UnramifiedField>();
    field->p = p;
    field->m = m;
    field->f = static_cast<int>(arith::multiplicative_order(p, m));
    field->K = K;
    field->factor_index = factor_index;
    field->factor_count = static_cast<int>(factors.size());
    field->g = factors[static_cast<std::size_t>(factor_index)];
    field->pK = ppow(p, K);

    const IntPoly& phi = cyclotomic_polynomial(m);
    FpPoly phi_p(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        phi_p[i] = static_cast<long long>(mpz_fdiv_ui(phi[i].get_mpz_t(), static_cast<unsigned long>(p)));
    }
    if (factors.size() == 1) {
        field->ghat = phi;
        for (auto& c : field->ghat) c = reduce(c, field->pK);
    } else {
        const FpPoly cofactor = fp_divmod(phi_p, field->g, p).first;
        field->ghat = hensel_lift(phi, field->g, cofactor, p, K);
    }

    const auto f = static_cast<std::size_t>(field->f);
    std::vector<BigInt> cur(f, 0);
    cur[0] = 1;
    field->zeta_pow.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        field->zeta_pow.push_back(cur);
        BigInt top = cur[f - 1];
        for (std::size_t i = f - 1; i > 0; --i) cur[i] = cur[i - 1];
        cur[0] = 0;
        for (std::size_t i = 0; i < f; ++i) cur[i] = reduce(cur[i] - top * field->ghat[i], field->pK);
    }
    return field;
}

FieldPtr cached_extension(long long p, int m, int K, int factor_index) {
    static std::map<std::tuple<long long, int, int, int>, FieldPtr> cache;
    static std::mutex mu;
    const auto key = std::make_tuple(p, m, K, factor_index);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    FieldPtr field = build_extension(p, m, K, factor_index);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, field).first->second;
}

// ----------------------------------------------------------- UnramifiedElem

UnramifiedElem UnramifiedElem::zero(FieldPtr field, int abs_prec) {
    UnramifiedElem e;
    e.coeffs_.assign(static_cast<std::size_t>(field->f), 0);
    e.field_ = std::move(field);
    e.val_ = abs_prec;
    e.rel_ = 0;
    return e;
}

UnramifiedElem UnramifiedElem::normalized(FieldPtr field, int shift, std::vector<BigInt> v, int abs_prec) {
    const int r = abs_prec - shift;
    if (r <= 0) return zero(std::move(field), abs_prec);
    const BigInt modulus = ppow(field->p, r);
    int w = r;
    for (auto& c : v) {
        c = reduce(c, modulus);
        if (c != 0) {
            BigInt t = c;
            w = std::min(w, strip(t, field->p));
        }
    }
    if (w >= r) return zero(std::move(field), abs_prec);
    const int rel = std::min(r - w, field->K);
    const BigInt pw = ppow(field->p, w);
    const BigInt relmod = ppow(field->p, rel);
    for (auto& c : v) c = reduce(c / pw, relmod);
    UnramifiedElem e;
    e.field_ = std::move(field);
    e.val_ = shift + w;
    e.coeffs_ = std::move(v);
    e.rel_ = rel;
    return e;
}

UnramifiedElem UnramifiedElem::one(FieldPtr field) {
    std::vector<BigInt> v(static_cast<std::size_t>(field->f), 0);
    v[0] = 1;
    const int K = field->K;
    return normalized(std::move(field), 0, std::move(v), K);
}

UnramifiedElem UnramifiedElem::from_scalar(FieldPtr field, const PadicScalar& s) {
    if (s.prime() != field->p) throw DomainError("UnramifiedElem: prime mismatch");
    if (s.is_zero()) return zero(std::move(field), s.absolute_precision());
    std::vector<BigInt> v(static_cast<std::size_t>(field->f), 0);
    v[0] = s.unit();
    return normalized(std::move(field), s.valuation(), std::move(v), s.absolute_precision());
}

UnramifiedElem UnramifiedElem::from_integer(FieldPtr field, const BigInt& n, int abs_prec) {
    std::vector<BigInt> v(static_cast<std::size_t>(field->f), 0);
    v[0] = n;
    return normalized(std::move(field), 0, std::move(v), abs_prec);
}

UnramifiedElem UnramifiedElem::from_vector(FieldPtr field, std::vector<BigInt> coeffs, int abs_prec) {
    if (coeffs.size() != static_cast<std::size_t>(field->f)) throw DomainError("UnramifiedElem: wrong vector length");
    return normalized(std::move(field), 0, std::move(coeffs), abs_prec);
}

UnramifiedElem UnramifiedElem::zeta_power(FieldPtr field, long long k) {
    auto v = field->zeta_pow[static_cast<std::size_t>(arith::mod(k, field->m))];
    const int K = field->K;
    return normalized(std::move(field), 0, std::move(v), K);
}

std::vector<BigInt> UnramifiedElem::residue(int k) const {
    if (k > absolute_precision()) throw PrecisionExhausted("UnramifiedElem::residue: not enough precision");
    std::vector<BigInt> out(coeffs_.size(), 0);
    if (is_zero()) return out;
    if (val_ < 0) throw DomainError("UnramifiedElem::residue: value is not integral");
    const BigInt modulus = ppow(field_->p, k);
    const BigInt scale = ppow(field_->p, val_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = reduce(coeffs_[i] * scale, modulus);
    return out;
}

PadicScalar UnramifiedElem::coefficient(int i) const {
    if (is_zero()) return PadicScalar::zero(field_->p, val_);
    BigInt c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) return PadicScalar::zero(field_->p, absolute_precision());
    // Shift by val_ using the rational constructor to allow negative valuations.
    BigRational q(c);
    if (val_ >= 0) {
        q *= BigRational(ppow(field_->p, val_));
    } else {
        q /= BigRational(ppow(field_->p, -val_));
    }
    return PadicScalar::from_rational(field_->p, q, absolute_precision());
}

UnramifiedElem UnramifiedElem::operator-() const {
    if (is_zero()) return *this;
    UnramifiedElem out(*this);
    const BigInt modulus = ppow(field_->p, rel_);
    for (auto& c : out.coeffs_) c = reduce(-c, modulus);
    return out;
}

UnramifiedElem operator+(const UnramifiedElem& a, const UnramifiedElem& b) {
    const int abs = std::min(a.absolute_precision(), b.absolute_precision());
    if (a.is_zero() && b.is_zero()) return UnramifiedElem::zero(a.field_, abs);
    if (a.is_zero()) return UnramifiedElem::normalized(b.field_, b.val_, b.coeffs_, abs);
    if (b.is_zero()) return UnramifiedElem::normalized(a.field_, a.val_, a.coeffs_, abs);
    const int shift = std::min(a.val_, b.val_);
    const long long p = a.field_->p;
    const BigInt sa = ppow(p, a.val_ - shift);
    const BigInt sb = ppow(p, b.val_ - shift);
    std::vector<BigInt> v(a.coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeffs_[i] * sa + b.coeffs_[i] * sb;
    return UnramifiedElem::normalized(a.field_, shift, std::move(v), abs);
}

UnramifiedElem operator*(const UnramifiedElem& a, const UnramifiedElem& b) {
    if (a.is_zero() || b.is_zero()) return UnramifiedElem::zero(a.field_, a.val_ + b.val_);
    const int rel = std::min(a.rel_, b.rel_);
    const BigInt modulus = ppow(a.field_->p, rel);
    UnramifiedElem out;
    out.field_ = a.field_;
    out.val_ = a.val_ + b.val_;
    out.rel_ = rel;
    out.coeffs_ = mulmod_poly(a.coeffs_, b.coeffs_, a.field_->ghat, modulus);
    return out;
}

UnramifiedElem operator*(const UnramifiedElem& a, const PadicScalar& s) {
    if (a.is_zero() || s.is_zero()) return UnramifiedElem::zero(a.field_, a.val_ + s.valuation());
    const int rel = std::min(a.rel_, s.relative_precision());
    const BigInt modulus = ppow(a.field_->p, rel);
    UnramifiedElem out;
    out.field_ = a.field_;
    out.val_ = a.val_ + s.valuation();
    out.rel_ = rel;
    out.coeffs_.resize(a.coeffs_.size());
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out.coeffs_[i] = reduce(a.coeffs_[i] * s.unit(), modulus);
    return out;
}

UnramifiedElem UnramifiedElem::inverse() const {
    if (is_zero()) throw DomainError("UnramifiedElem: division by zero");
    const long long p = field_->p;
    // Inverse modulo p in F_q, then Newton iteration y <- y (2 - u y).
    FpPoly u(coeffs_.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = static_cast<long long>(mpz_fdiv_ui(coeffs_[i].get_mpz_t(), static_cast<unsigned long>(p)));
    trim(u);
    FpPoly inv0 = fp_bezout(u, field_->g, p).first;
    std::vector<BigInt> y(coeffs_.size(), 0);
    for (std::size_t i = 0; i < inv0.size(); ++i) y[i] = static_cast<long>(inv0[i]);
    int prec = 1;
    while (prec < rel_) {
        prec = std::min(2 * prec, rel_);
        const BigInt modulus = ppow(p, prec);
        std::vector<BigInt> uy = mulmod_poly(coeffs_, y, field_->ghat, modulus);
        for (auto& c : uy) c = -c;
        uy[0] += 2;
        y = mulmod_poly(y, uy, field_->ghat, modulus);
    }
    UnramifiedElem out;
    out.field_ = field_;
    out.val_ = -val_;
    out.rel_ = rel_;
    const BigInt modulus = ppow(p, rel_);
    for (auto& c : y) c = reduce(c, modulus);
    out.coeffs_ = std::move(y);
    return out;
}

UnramifiedElem operator/(const UnramifiedElem& a, const UnramifiedElem& b) {
    if (b.is_zero()) throw DomainError("UnramifiedElem: division by zero");
    if (a.is_zero()) return UnramifiedElem::zero(a.field_, a.val_ - b.val_);
    return a * b.inverse();
}

UnramifiedElem operator/(const UnramifiedElem& a, const PadicScalar& s) {
    if (s.is_zero()) throw DomainError("UnramifiedElem: division by zero");
    if (a.is_zero()) return UnramifiedElem::zero(a.field_, a.val_ - s.valuation());
    const int rel = std::min(a.rel_, s.relative_precision());
    const BigInt modulus = ppow(a.field_->p, rel);
    const BigInt inv = inverse_mod(s.unit(), modulus);
    UnramifiedElem out;
    out.field_ = a.field_;
    out.val_ = a.val_ - s.valuation();
    out.rel_ = rel;
    out.coeffs_.resize(a.coeffs_.size());
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out.coeffs_[i] = reduce(a.coeffs_[i] * inv, modulus);
    return out;
}

UnramifiedElem UnramifiedElem::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    UnramifiedElem result = one(field_);
    UnramifiedElem base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

UnramifiedElem UnramifiedElem::truncated(int abs_prec) const {
    if (abs_prec >= absolute_precision()) return *this;
    if (is_zero()) return zero(field_, abs_prec);
    return normalized(field_, val_, coeffs_, abs_prec);
}

bool UnramifiedElem::equals_at_precision(const UnramifiedElem& other) const { return (*this - other).is_zero(); }

std::string UnramifiedElem::to_string() const {
    std::ostringstream os;
    if (is_zero()) {
        os << "O(" << field_->p << "^" << val_ << ")";
        return os.str();
    }
    os << field_->p << "^" << val_ << "*(";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i > 0) os << ", ";
        os << coeffs_[i].get_str();
    }
    os << ") + O(" << field_->p << "^" << absolute_precision() << ")";
    return os.str();
}

UnramifiedElem embed_cyclotomic(const CycRational& x, const FieldPtr& field) {
    if (x.order() != field->m) throw DomainError("embed_cyclotomic: cyclotomic order does not match the field");
    const long long p = field->p;
    BigInt den = 1;
    for (const auto& c : x.coefficients()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    BigInt den_unit = den;
    const int vden = strip(den_unit, p);
    const BigInt& modulus = field->pK;
    const BigInt inv = inverse_mod(den_unit, modulus);
    const auto f = static_cast<std::size_t>(field->f);
    std::vector<BigInt> v(f, 0);
    const auto& coeffs = x.coefficients();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == 0) continue;
        const BigInt n = reduce(BigInt(coeffs[k].get_num() * (den / coeffs[k].get_den())), modulus);
        const auto& zk = field->zeta_pow[k];
        for (std::size_t i = 0; i < f; ++i) v[i] += n * zk[i];
    }
    for (auto& c : v) c = reduce(c * inv, modulus);
    return UnramifiedElem::normalized(field, -vden, std::move(v), field->K - vden);
}

std::optional<int> valuation_at_residue(const CycRational& x, const FieldPtr& field) {
    if (x.is_zero()) return std::nullopt;
    FieldPtr cur = field;
    for (;;) {
        const UnramifiedElem e = embed_cyclotomic(x, cur);
        if (!e.is_zero()) return e.valuation();
        if (cur->K > 4096) throw PrecisionExhausted("valuation_at_residue: valuation exceeds 4096 digits");
        cur = cached_extension(cur->p, cur->m, 2 * cur->K, cur->factor_index);
    }
}

}  // namespace iwlambda
