#include "iwlambda/regularity.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "iwlambda/arith.hpp"
#include "iwlambda/error.hpp"

namespace iwlambda {

namespace {

void check_prime(const DirichletChar& theta, long long p) {
    if (p < 3 || !arith::is_prime(p)) throw DomainError("regularity: p must be an odd prime");
    if (theta.conductor() % p == 0) throw DomainError("regularity: p divides the conductor of " + theta.label());
    if (theta.order() % p == 0) throw DomainError("regularity: p divides the order of " + theta.label());
}

void test_one(const DirichletChar& theta, long long p, BernoulliCache& bc, RegularityReport& rep) {
    const int m = static_cast<int>(theta.order());
    const bool even = theta.is_even();
    std::vector<int> ns;
    for (int n = even ? 2 : 1; n <= (even ? p - 1 : p - 2); n += 2) {
        if (theta.is_trivial() && n == p - 1) continue;  // the pole
        ns.push_back(n);
    }
    const auto Bs = bc.get(theta, ns);
    FieldPtr F = cached_extension(p, m, 8, 0);
    rep.f = F->f;
    for (std::size_t k = 0; k < ns.size(); ++k) {
        const auto v = valuation_at_residue(Bs[k], F);
        if (v && *v < 0) {
            throw NonIntegrality("regularity: B_" + std::to_string(ns[k]) + "," + theta.label() + " is not integral at " + std::to_string(p));
        }
        if (!v || *v > 0) {
            rep.witnesses.emplace_back(ns[k], v ? *v : -1);
            rep.regular = false;
        }
    }
    if (!even && *theta.value_exponent(p) == 0) rep.notes.push_back("trivial zero at " + theta.label() + "*w");
}

}  // namespace

std::string RegularityReport::witness_text() const {
    if (witnesses.empty()) return "-";
    std::string s;
    for (const auto& [n, v] : witnesses) {
        if (!s.empty()) s += ",";
        s += std::to_string(n) + ":" + (v < 0 ? std::string("inf") : std::to_string(v));
    }
    return s;
}

RegularityReport is_chi_regular(const DirichletChar& theta_in, long long p, bool strict, BernoulliCache* cache) {
    const DirichletChar theta = theta_in.primitive();
    check_prime(theta, p);
    BernoulliCache& bc = cache ? *cache : default_bernoulli_cache();
    RegularityReport rep;
    rep.label = theta.label();
    rep.p = p;
    test_one(theta, p, bc, rep);
    if (strict) {
        const long long m = theta.order();
        for (long long k = 2; k < m; ++k) {
            if (arith::gcd(k, m) != 1) continue;
            RegularityReport conj;
            test_one(theta.pow(k), p, bc, conj);
            if (!conj.regular) {
                rep.regular = false;
                rep.notes.push_back("conjugate " + theta.pow(k).label() + " irregular at " + conj.witness_text());
            }
        }
    }
    return rep;
}

LambdaTot lambda_tot(const DirichletChar& theta_in, long long p, const LambdaParams& params) {
    const DirichletChar theta = theta_in.primitive();
    check_prime(theta, p);
    LambdaTot out;
    for (int j = 0; j <= p - 2; ++j) {
        const TwistedChar tc(theta, j, p);
        if (!tc.is_even() || tc.is_trivial()) continue;
        const LambdaResult r = lambda_crosscheck(tc, params);
        out.total += r.lambda_corr;
        out.lower_bound = out.lower_bound || r.lower_bound;
        if (r.lambda_corr > 0 || r.lower_bound) out.parts.emplace_back(j, r);
    }
    return out;
}

std::vector<DirichletChar> FieldSpec::characters() const {
    long long M = 1;
    for (const auto& g : generators) {
        if (!g.is_even()) throw DomainError("FieldSpec: generator " + g.label() + " is odd (field not totally real)");
        M = arith::lcm(M, g.modulus());
    }
    std::map<std::string, DirichletChar> found;
    std::vector<DirichletChar> frontier{DirichletChar::trivial(M)};
    std::set<std::vector<long long>> seen{frontier[0].exponents()};
    std::vector<DirichletChar> lifted;
    for (const auto& g : generators) lifted.push_back(g.induce(M));
    while (!frontier.empty()) {
        std::vector<DirichletChar> next;
        for (const auto& c : frontier) {
            const DirichletChar prim = c.primitive();
            found.emplace(prim.label(), prim);
            for (const auto& g : lifted) {
                const DirichletChar d = c * g;
                if (seen.insert(d.exponents()).second) next.push_back(d);
            }
        }
        frontier = std::move(next);
    }
    std::vector<DirichletChar> out;
    for (auto& [k, c] : found) out.push_back(c);
    return out;
}

std::string FieldSpec::label() const {
    std::string s;
    for (const auto& g : generators) s += (s.empty() ? "" : "+") + g.primitive().label();
    return s.empty() ? "Q" : s;
}

LambdaTot lambda_tot_field(const FieldSpec& F, long long p, const LambdaParams& params) {
    LambdaTot out;
    for (const auto& c : F.characters()) {
        const LambdaTot t = lambda_tot(c, p, params);
        out.total += t.total;
        out.lower_bound = out.lower_bound || t.lower_bound;
        out.parts.insert(out.parts.end(), t.parts.begin(), t.parts.end());
    }
    return out;
}

bool is_field_regular(const FieldSpec& F, long long p, bool strict, BernoulliCache* cache) {
    bool ok = true;
    for (const auto& c : F.characters()) ok = is_chi_regular(c, p, strict, cache).regular && ok;
    return ok;
}

}  // namespace iwlambda
