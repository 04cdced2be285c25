#include "doctest.h"
#include "iwlambda/arith.hpp"
#include "iwlambda/error.hpp"
#include "iwlambda/regularity.hpp"

using namespace iwlambda;

namespace {

// v_p of a nonzero rational
int vp(const BigRational& x, long long p) {
    int v = 0;
    BigInt num = x.get_num(), den = x.get_den();
    const BigInt P = static_cast<long>(p);
    while (num % P == 0) {
        num /= P;
        ++v;
    }
    while (den % P == 0) {
        den /= P;
        --v;
    }
    return v;
}

}  // namespace

TEST_CASE("chi-regularity examples") {
    const DirichletChar chi4 = DirichletChar::parse("4.1");
    // B_{1} = -1/2 and B_{3} = 3/2 are 5-units
    CHECK(generalized_bernoulli(1, chi4).coefficients()[0] == BigRational(-1, 2));
    CHECK(generalized_bernoulli(3, chi4).coefficients()[0] == BigRational(3, 2));
    const RegularityReport r4 = is_chi_regular(chi4, 5);
    CHECK(r4.regular);
    CHECK(r4.witness_text() == "-");

    const DirichletChar triv = DirichletChar::trivial(1);
    const RegularityReport r37 = is_chi_regular(triv, 37);
    CHECK(!r37.regular);
    REQUIRE(r37.witnesses.size() == 1);
    CHECK(r37.witnesses[0].first == 32);
    CHECK(vp(bernoulli_number(32), 37) == r37.witnesses[0].second);
    CHECK(r37.verdict() == "irregular");

    CHECK(is_chi_regular(triv, 7).regular);
    for (int n : {2, 4}) CHECK(vp(bernoulli_number(n), 7) == 0);
    CHECK(vp(bernoulli_number(6), 7) == -1);  // the pole n = p - 1 is skipped

    // classical irregular primes below 100
    for (long long p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97}) {
        bool oracle = true;
        for (int n = 2; n <= p - 3; n += 2) oracle = oracle && vp(bernoulli_number(n), p) == 0;
        CHECK(is_chi_regular(triv, p).regular == oracle);
    }

    CHECK_THROWS_AS(is_chi_regular(chi4, 2), DomainError);
    CHECK_THROWS_AS(is_chi_regular(DirichletChar::parse("5.2"), 5), DomainError);
}

TEST_CASE("quadratic regularity against rational oracle") {
    for (long long N = 3; N < 60; ++N) {
        for (const auto& theta : enumerate_characters(N, CharFilter{2, std::nullopt, true})) {
            for (long long p : {3, 5, 7, 11, 13}) {
                if (N % p == 0) continue;
                bool oracle = true;
                const bool even = theta.is_even();
                for (int n = even ? 2 : 1; n <= (even ? p - 1 : p - 2); n += 2) {
                    const BigRational b = generalized_bernoulli(n, theta).coefficients()[0];
                    oracle = oracle && b != 0 && vp(b, p) == 0;
                }
                INFO(theta.label() << " p=" << p);
                CHECK(is_chi_regular(theta, p).regular == oracle);
            }
        }
    }
}

TEST_CASE("total lambda") {
    const DirichletChar triv = DirichletChar::trivial(1);
    const LambdaTot t37 = lambda_tot(triv, 37);
    CHECK(t37.total >= 1);
    bool at32 = false;
    for (const auto& [j, r] : t37.parts) at32 = at32 || (j == 32 && r.lambda == 1);
    CHECK(at32);
    CHECK(lambda_tot(triv, 5).total == 0);
    CHECK(lambda_tot(triv, 5).parts.empty());
}

TEST_CASE("Kummer criterion equivalence") {
    LambdaParams params;
    params.C = 10;
    int tested = 0;
    for (long long N = 3; N < 40; ++N) {
        for (long long ord : {1, 2, 3, 4}) {
            for (const auto& theta : enumerate_characters(N, CharFilter{ord, std::nullopt, true})) {
                for (long long p : {3, 5, 7, 11}) {
                    if (N % p == 0 || ord % p == 0) continue;
                    const LambdaTot t = lambda_tot(theta, p, params);
                    INFO(theta.label() << " p=" << p);
                    CHECK(!t.lower_bound);
                    const RegularityReport rep = is_chi_regular(theta, p);
                    // with a trivial zero B_{1,theta} no longer governs lambda^corr
                    if (!rep.notes.empty()) continue;
                    CHECK(rep.regular == (t.total == 0));
                    for (const auto& [j, r] : t.parts) CHECK(r.lambda_corr >= 0);
                    ++tested;
                }
            }
        }
    }
    CHECK(tested > 100);
    // trivial-zero pairs where the two notions split
    const LambdaTot a = lambda_tot(DirichletChar::parse("23.11"), 3, params);
    CHECK(!is_chi_regular(DirichletChar::parse("23.11"), 3).regular);
    CHECK(a.total == 0);
    const LambdaTot b = lambda_tot(DirichletChar::parse("11.5"), 5, params);
    CHECK(is_chi_regular(DirichletChar::parse("11.5"), 5).regular);
    CHECK(b.total == 1);
}

TEST_CASE("fields") {
    const FieldSpec Q{};
    CHECK(Q.characters().size() == 1);
    CHECK(Q.label() == "Q");
    CHECK(!is_field_regular(Q, 37));
    CHECK(is_field_regular(Q, 7));

    const DirichletChar chi5 = DirichletChar::parse("5.2");
    const FieldSpec K5 = FieldSpec::cyclic(chi5);
    CHECK(K5.degree() == 2);
    CHECK(is_field_regular(K5, 7) == (is_chi_regular(DirichletChar::trivial(1), 7).regular && is_chi_regular(chi5, 7).regular));

    const FieldSpec cubic = FieldSpec::cyclic(DirichletChar::parse("7.2"));
    CHECK(cubic.degree() == 3);
    const FieldSpec biquad{{chi5, DirichletChar::parse("13.6")}};
    const auto chars = biquad.characters();
    CHECK(chars.size() == 4);
    bool has65 = false;
    for (const auto& c : chars) has65 = has65 || c.modulus() == 65;
    CHECK(has65);
    CHECK_THROWS_AS(FieldSpec::cyclic(DirichletChar::parse("4.1")).characters(), DomainError);

    // additivity over characters
    for (long long p : {3, 7, 11}) {
        int sum = 0;
        for (const auto& c : biquad.characters()) sum += lambda_tot(c, p).total;
        CHECK(lambda_tot_field(biquad, p).total == sum);
    }
    CHECK_THROWS_AS(is_field_regular(K5, 5), DomainError);
}

TEST_CASE("strict mode") {
    for (long long N = 7; N < 80; ++N) {
        for (const auto& theta : enumerate_characters(N, CharFilter{3, 1, true})) {
            for (long long p : {5, 11, 13}) {
                if (N % p == 0) continue;
                const bool loose = is_chi_regular(theta, p).regular;
                const bool strict = is_chi_regular(theta, p, true).regular;
                CHECK((!strict || loose));
                CHECK(strict == (loose && is_chi_regular(theta.pow(2), p).regular));
            }
        }
    }
}
