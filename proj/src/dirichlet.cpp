#include "iwlambda/dirichlet.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "iwlambda/arith.hpp"
#include "iwlambda/error.hpp"

namespace iwlambda {

using arith::i64;

namespace {

GroupPtr build_group(long long N) {
    auto g = std::make_shared<CharGroup>();
    g->N = N;
    if (N < 1) throw DomainError("char_group: modulus must be positive");
    for (const auto& [q, e] : arith::factorize(N)) {
        const long long modulus = static_cast<long long>(arith::ipow(static_cast<arith::u64>(q), e));
        if (q == 2) {
            if (e == 1) continue;
            CharGroup::Factor minus;
            minus.prime = 2;
            minus.exponent = e;
            minus.modulus = modulus;
            minus.generator = modulus - 1;
            minus.order = 2;
            minus.kind = 1;
            minus.dlog.assign(static_cast<std::size_t>(modulus), -1);
            CharGroup::Factor five = minus;
            five.generator = 5 % modulus;
            five.order = modulus / 4;
            five.kind = 2;
            long long pw = 1;
            for (long long t = 0; t < five.order; ++t) {
                for (int s = 0; s < 2; ++s) {
                    const long long v = s == 0 ? pw : modulus - pw;
                    minus.dlog[static_cast<std::size_t>(v)] = s;
                    five.dlog[static_cast<std::size_t>(v)] = static_cast<int>(t);
                }
                pw = pw * 5 % modulus;
            }
            g->factors.push_back(std::move(minus));
            if (e >= 3) g->factors.push_back(std::move(five));
            continue;
        }
        CharGroup::Factor f;
        f.prime = q;
        f.exponent = e;
        f.modulus = modulus;
        f.generator = arith::primitive_root_prime_power(q, e);
        f.order = arith::euler_phi(modulus);
        f.kind = 0;
        f.dlog.assign(static_cast<std::size_t>(modulus), -1);
        long long pw = 1;
        for (long long t = 0; t < f.order; ++t) {
            f.dlog[static_cast<std::size_t>(pw)] = static_cast<int>(t);
            pw = pw * f.generator % modulus;
        }
        g->factors.push_back(std::move(f));
    }
    return g;
}

}  // namespace

long long CharGroup::phi() const {
    long long r = 1;
    for (const auto& f : factors) r *= f.order;
    return r;
}

long long CharGroup::generator_lift(std::size_t j) const {
    const auto& f = factors.at(j);
    const long long M = N / f.modulus;
    if (M == 1) return f.generator % N;
    const long long t = arith::mod(static_cast<i64>(arith::mulmod(static_cast<arith::u64>(arith::mod(f.generator - 1, f.modulus)),
                                                                    arith::invmod(static_cast<arith::u64>(M % f.modulus), static_cast<arith::u64>(f.modulus)),
                                                                    static_cast<arith::u64>(f.modulus))),
                                   f.modulus);
    return arith::mod(1 + M * t, N);
}

GroupPtr char_group(long long N) {
    static std::map<long long, GroupPtr> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(N);
        if (it != cache.end()) return it->second;
    }
    GroupPtr g = build_group(N);
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 4096) cache.clear();
    return cache.emplace(N, g).first->second;
}

DirichletChar::DirichletChar(GroupPtr group, std::vector<long long> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
    const auto& factors = group_->factors;
    if (exponents_.size() != factors.size()) throw DomainError("DirichletChar: exponent vector has the wrong length");
    order_ = 1;
    for (std::size_t j = 0; j < factors.size(); ++j) {
        exponents_[j] = arith::mod(exponents_[j], factors[j].order);
        order_ = arith::lcm(order_, factors[j].order / arith::gcd(factors[j].order, exponents_[j]));
    }
    coeff_.resize(factors.size());
    for (std::size_t j = 0; j < factors.size(); ++j) coeff_[j] = exponents_[j] * order_ / factors[j].order;

    conductor_ = 1;
    for (std::size_t j = 0; j < factors.size(); ++j) {
        const auto& f = factors[j];
        const long long o = f.order / arith::gcd(f.order, exponents_[j]);
        if (f.kind == 0) {
            if (o > 1) conductor_ *= static_cast<long long>(arith::ipow(static_cast<arith::u64>(f.prime), 1 + arith::valuation(o, f.prime)));
        } else if (f.kind == 2) {
            if (o > 1) conductor_ = conductor_ / (conductor_ % 4 == 0 ? 4 : 1) * (4LL << arith::valuation(o, 2));
        } else if (o > 1) {
            conductor_ *= 4;
        }
    }

    even_ = true;
    if (group_->N > 2) even_ = *value_exponent(group_->N - 1) == 0;
}

DirichletChar DirichletChar::trivial(long long N) {
    GroupPtr g = char_group(N);
    std::vector<long long> e(g->factors.size(), 0);
    return DirichletChar(std::move(g), std::move(e));
}

DirichletChar DirichletChar::parse(const std::string& label) {
    std::vector<long long> parts;
    std::stringstream ss(label);
    std::string item;
    while (std::getline(ss, item, '.')) {
        try {
            std::size_t pos = 0;
            parts.push_back(std::stoll(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError("DirichletChar::parse: bad label '" + label + "'");
        }
    }
    if (parts.empty() || parts[0] < 1) throw DomainError("DirichletChar::parse: bad label '" + label + "'");
    GroupPtr g = char_group(parts[0]);
    if (parts.size() != g->factors.size() + 1) throw DomainError("DirichletChar::parse: wrong number of exponents in '" + label + "'");
    for (std::size_t j = 1; j < parts.size(); ++j) {
        if (parts[j] < 0 || parts[j] >= g->factors[j - 1].order) throw DomainError("DirichletChar::parse: exponent out of range in '" + label + "'");
    }
    return DirichletChar(std::move(g), std::vector<long long>(parts.begin() + 1, parts.end()));
}

std::optional<long long> DirichletChar::value_exponent(long long a) const {
    const long long N = group_->N;
    const long long r = arith::mod(a, N);
    if (arith::gcd(r, N) != 1) return std::nullopt;
    long long k = 0;
    const auto& factors = group_->factors;
    for (std::size_t j = 0; j < factors.size(); ++j) {
        if (coeff_[j] == 0) continue;
        const int d = factors[j].dlog[static_cast<std::size_t>(r % factors[j].modulus)];
        k = (k + coeff_[j] % order_ * d) % order_;
    }
    return k;
}

CycRational DirichletChar::evaluate(long long a) const {
    const auto k = value_exponent(a);
    if (!k) return CycRational(static_cast<int>(order_));
    return root_of_unity_power(static_cast<int>(order_), *k);
}

DirichletChar DirichletChar::primitive() const {
    if (is_primitive()) return *this;
    const long long d = conductor_;
    GroupPtr gd = char_group(d);
    std::vector<long long> e(gd->factors.size(), 0);
    for (std::size_t j = 0; j < gd->factors.size(); ++j) {
        long long a = gd->generator_lift(j);
        while (arith::gcd(a, group_->N) != 1) a += d;
        const long long k = *value_exponent(a);
        const long long o = gd->factors[j].order;
        if ((k * o) % order_ != 0) throw Error("DirichletChar::primitive: character does not factor through its conductor");
        e[j] = k * o / order_;
    }
    return DirichletChar(std::move(gd), std::move(e));
}

DirichletChar DirichletChar::pow(long long k) const {
    std::vector<long long> e(exponents_);
    for (auto& x : e) x *= k;
    return DirichletChar(group_, std::move(e));
}

DirichletChar DirichletChar::induce(long long M) const {
    if (M < 1 || M % group_->N != 0) throw DomainError("DirichletChar::induce: modulus is not a multiple");
    GroupPtr gm = char_group(M);
    std::vector<long long> e(gm->factors.size(), 0);
    for (std::size_t j = 0; j < gm->factors.size(); ++j) {
        const long long k = *value_exponent(gm->generator_lift(j));
        e[j] = k * gm->factors[j].order / order_;
    }
    return DirichletChar(std::move(gm), std::move(e));
}

DirichletChar DirichletChar::operator*(const DirichletChar& other) const {
    if (other.modulus() != modulus()) throw DomainError("DirichletChar: product of characters with different moduli");
    std::vector<long long> e(exponents_);
    for (std::size_t j = 0; j < e.size(); ++j) e[j] += other.exponents_[j];
    return DirichletChar(group_, std::move(e));
}

std::string DirichletChar::label() const {
    std::string s = std::to_string(group_->N);
    for (long long e : exponents_) s += "." + std::to_string(e);
    return s;
}

std::vector<DirichletChar> enumerate_characters(long long N, const CharFilter& filter) {
    GroupPtr g = char_group(N);
    const std::size_t n = g->factors.size();
    std::vector<std::vector<long long>> allowed(n);
    for (std::size_t j = 0; j < n; ++j) {
        const long long o = g->factors[j].order;
        for (long long e = 0; e < o; ++e) {
            if (filter.order && *filter.order % (o / arith::gcd(o, e)) != 0) continue;
            if (filter.primitive_only) {
                const long long oe = o / arith::gcd(o, e);
                const auto& f = g->factors[j];
                // The conductor of a factor must be the full prime power (the 2-part is checked at the leaf).
                if (f.kind == 0 && (oe == 1 || static_cast<long long>(arith::ipow(static_cast<arith::u64>(f.prime), 1 + arith::valuation(oe, f.prime))) != f.modulus)) continue;
            }
            allowed[j].push_back(e);
        }
    }
    std::vector<DirichletChar> out;
    std::vector<long long> cur(n, 0);
    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == n) {
            DirichletChar chi(g, cur);
            if (filter.order && chi.order() != *filter.order) return;
            if (filter.parity && chi.parity() != *filter.parity) return;
            if (filter.primitive_only && !chi.is_primitive()) return;
            out.push_back(std::move(chi));
            return;
        }
        for (long long e : allowed[j]) {
            cur[j] = e;
            self(self, j + 1);
        }
    };
    if (filter.primitive_only && N % 4 == 2) return out;
    rec(rec, 0);
    return out;
}

TwistedChar::TwistedChar(DirichletChar theta_, int i_, long long p_) : theta(theta_.primitive()), p(p_) {
    if (p < 3 || !arith::is_prime(p)) throw DomainError("TwistedChar: p must be an odd prime");
    if (theta.conductor() % p == 0) throw DomainError("TwistedChar: p divides the conductor of theta");
    i = static_cast<int>(arith::mod(i_, p - 1));
}

bool TwistedChar::is_even() const { return theta.is_even() == (i % 2 == 0); }

bool TwistedChar::trivial_zero_flag() const {
    if (i != 1 % (p - 1) || theta.is_even()) return false;
    const auto k = theta.value_exponent(p);
    return k && *k == 0;
}

bool TwistedChar::is_trivial() const { return theta.is_trivial() && i == 0; }

std::string TwistedChar::label() const { return theta.label() + "*w^" + std::to_string(i); }

UnramifiedElem evaluate_twist_padic(const TwistedChar& tc, long long a, const FieldPtr& field, int K) {
    if (field->m % tc.theta.order() != 0) throw DomainError("evaluate_twist_padic: field does not contain the values of theta");
    const auto k = tc.theta.value_exponent(a);
    if (!k || arith::mod(a, tc.p) == 0) return UnramifiedElem::zero(field, K);
    UnramifiedElem v = UnramifiedElem::zeta_power(field, *k * (field->m / tc.theta.order())).truncated(K);
    if (tc.i == 0) return v;
    const PadicScalar w = teichmuller(a, tc.p, K);
    BigInt wi;
    BigInt modulus;
    mpz_ui_pow_ui(modulus.get_mpz_t(), static_cast<unsigned long>(tc.p), static_cast<unsigned long>(K));
    mpz_powm_ui(wi.get_mpz_t(), w.residue(K).get_mpz_t(), static_cast<unsigned long>(tc.i), modulus.get_mpz_t());
    return v * PadicScalar::from_integer(tc.p, wi, K);
}

}  // namespace iwlambda
