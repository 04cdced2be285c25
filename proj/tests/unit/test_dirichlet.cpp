#include <algorithm>
#include <map>
#include <numeric>

#include "doctest.h"
#include "iwlambda/dirichlet.hpp"
#include "iwlambda/error.hpp"

using namespace iwlambda;

namespace {

long long brute_conductor(const DirichletChar& chi) {
    const long long N = chi.modulus();
    for (long long d = 1; d <= N; ++d) {
        if (N % d != 0) continue;
        bool ok = true;
        for (long long a = 1; a < N && ok; a += d) {
            if (std::gcd(a, N) == 1 && *chi.value_exponent(a) != 0) ok = false;
        }
        if (ok) return d;
    }
    return N;
}

}  // namespace

TEST_CASE("enumeration") {
    auto five = enumerate_characters(5);
    std::vector<long long> orders;
    for (const auto& c : five) orders.push_back(c.order());
    std::sort(orders.begin(), orders.end());
    CHECK(orders == std::vector<long long>{1, 2, 4, 4});
    auto eight = enumerate_characters(8);
    CHECK(eight.size() == 4);
    for (const auto& c : eight) CHECK(c.order() <= 2);
    for (long long N = 1; N <= 150; ++N) {
        auto all = enumerate_characters(N);
        CHECK(static_cast<long long>(all.size()) == char_group(N)->phi());
        long long phi = 0;
        for (long long a = 1; a <= N; ++a) phi += std::gcd(a, N) == 1 ? 1 : 0;
        CHECK(static_cast<long long>(all.size()) == phi);
        if (N > 2) {
            long long even = std::count_if(all.begin(), all.end(), [](const DirichletChar& c) { return c.is_even(); });
            CHECK(2 * even == phi);
        }
        CharFilter prim;
        prim.primitive_only = true;
        std::size_t nprim = 0;
        for (const auto& c : all) nprim += c.is_primitive() ? 1 : 0;
        CHECK(enumerate_characters(N, prim).size() == nprim);
        CharFilter ord3;
        ord3.order = 3;
        ord3.parity = 1;
        for (const auto& c : enumerate_characters(N, ord3)) {
            CHECK(c.order() == 3);
            CHECK(c.is_even());
        }
    }
}

TEST_CASE("evaluation") {
    const DirichletChar chi4 = DirichletChar::parse("4.1");
    CHECK(chi4.evaluate(1) == CycRational::from_rational(2, 1));
    CHECK(chi4.evaluate(3) == CycRational::from_rational(2, -1));
    CHECK(chi4.evaluate(2).is_zero());
    CHECK(!chi4.is_even());
    for (long long N : {5, 12, 16, 21, 36, 45, 63, 100}) {
        for (const auto& chi : enumerate_characters(N)) {
            CHECK(chi.evaluate(1) == CycRational::from_rational(static_cast<int>(chi.order()), 1));
            // multiplicativity and orthogonality
            CycRational sum(static_cast<int>(chi.order()));
            for (long long a = 1; a <= N; ++a) {
                sum += chi.evaluate(a);
                for (long long b = 1; b <= N; b += 3) CHECK(chi.evaluate(a * b) == chi.evaluate(a) * chi.evaluate(b));
            }
            CHECK(sum.is_zero() == !chi.is_trivial());
            CHECK(DirichletChar::parse(chi.label()) == chi);
        }
    }
}

TEST_CASE("conductors and primitive characters") {
    CHECK(DirichletChar::trivial(30).conductor() == 1);
    CHECK(DirichletChar::parse("5.2").conductor() == 5);
    // the order-2 character mod 9 is lifted from mod 3
    const DirichletChar nine = DirichletChar::parse("9.3");
    CHECK(nine.order() == 2);
    CHECK(nine.conductor() == 3);
    CHECK(nine.primitive().label() == "3.1");
    for (long long N = 1; N <= 120; ++N) {
        for (const auto& chi : enumerate_characters(N)) {
            CHECK(chi.conductor() == brute_conductor(chi));
            const DirichletChar prim = chi.primitive();
            CHECK(prim.modulus() == chi.conductor());
            CHECK(prim.is_primitive());
            CHECK(prim.order() == chi.order());
            for (long long a = 1; a <= N; ++a) {
                if (std::gcd(a, N) == 1) CHECK(prim.evaluate(a) == chi.evaluate(a));
            }
            for (long long k = 2; k <= 4; ++k) CHECK(chi.conductor() % chi.pow(k).conductor() == 0);
        }
    }
    CHECK_THROWS_AS(DirichletChar::parse("5.9"), DomainError);
    CHECK_THROWS_AS(DirichletChar::parse("x"), DomainError);
}

TEST_CASE("twisted characters") {
    const DirichletChar triv = DirichletChar::trivial(1);
    TwistedChar t0(triv, 0, 7);
    CHECK(t0.is_even());
    CHECK(!t0.trivial_zero_flag());
    const DirichletChar chi4 = DirichletChar::parse("4.1");
    TwistedChar t5(chi4, 1, 5);
    CHECK(t5.is_even());
    CHECK(t5.trivial_zero_flag());
    TwistedChar t3(chi4, 1, 3);
    CHECK(t3.is_even());
    CHECK(!t3.trivial_zero_flag());
    CHECK_THROWS_AS(TwistedChar(DirichletChar::parse("5.2"), 0, 5), DomainError);

    auto F = build_extension(5, 2, 4);
    // a = 7 is 3 mod 4 and 2 mod 5: theta(7) = -1, omega(7) = omega(2) = 7 mod 25
    const UnramifiedElem v = evaluate_twist_padic(TwistedChar(chi4, 1, 5), 7, F, 2);
    CHECK(v.residue(2) == std::vector<BigInt>{BigInt(25 - 7)});
    CHECK(evaluate_twist_padic(t5, 1, F, 4).equals_at_precision(UnramifiedElem::one(F)));
    CHECK(evaluate_twist_padic(t5, 10, F, 4).is_zero());

    const DirichletChar chi7 = DirichletChar::parse("7.2");  // order 3
    auto G = build_extension(5, 3, 6);
    TwistedChar tw(chi7, 0, 5);
    TwistedChar tw2(chi7, 3, 5);
    for (long long a = 1; a < 40; ++a) {
        if (a % 5 == 0 || a % 7 == 0) continue;
        CHECK(evaluate_twist_padic(tw, a, G, 6).equals_at_precision(embed_cyclotomic(chi7.evaluate(a), G)));
        for (long long b = 1; b < 12; ++b) {
            if (b % 5 == 0 || b % 7 == 0) continue;
            CHECK(evaluate_twist_padic(tw2, a * b, G, 6).equals_at_precision(evaluate_twist_padic(tw2, a, G, 6) * evaluate_twist_padic(tw2, b, G, 6)));
        }
    }
}
