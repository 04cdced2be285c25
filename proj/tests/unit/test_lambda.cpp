#include <random>

#include "doctest.h"
#include "iwlambda/arith.hpp"
#include "iwlambda/bernoulli.hpp"
#include "iwlambda/error.hpp"
#include "iwlambda/lambda.hpp"

using namespace iwlambda;

namespace {

const DirichletChar chi4 = DirichletChar::parse("4.1");

// B_{1,psi} = (1/f) sum psi(a) a for psi = theta omega^k of conductor f, as a p-adic number.
UnramifiedElem b1_twist(const DirichletChar& theta, int k, long long p, const FieldPtr& F) {
    const TwistedChar psi(theta, k, p);
    const long long f = theta.conductor() * (k % (p - 1) == 0 ? 1 : p);
    UnramifiedElem s = UnramifiedElem::zero(F, F->K + 10);
    for (long long a = 1; a < f; ++a) {
        const UnramifiedElem v = k % (p - 1) == 0 ? embed_cyclotomic(theta.evaluate(a), F) : evaluate_twist_padic(psi, a, F, F->K);
        s = s + v * PadicScalar::from_integer(p, BigInt(static_cast<long>(a)), F->K + 10);
    }
    return s / PadicScalar::from_integer(p, BigInt(static_cast<long>(f)), F->K + 10);
}

UnramifiedElem eval_series(const PowerSeriesApprox& s, const PadicScalar& t) {
    UnramifiedElem acc = s.coeffs.back();
    for (std::size_t j = s.coeffs.size() - 1; j-- > 0;) acc = acc * t + s.coeffs[j];
    return acc;
}

}  // namespace

TEST_CASE("interpolation nodes") {
    const auto nodes = interpolation_nodes(5, 2, 4, 8);
    REQUIRE(nodes.size() == 4);
    CHECK(nodes[0].first == 6);
    CHECK(nodes[3].first == 18);
    // t_1 = 6^5 - 1 = 7775
    CHECK(nodes[0].second.residue(8) == BigInt(7775 % 390625));
    for (const auto& nd : nodes) CHECK(nd.second.valuation() >= 1);
    CHECK_THROWS_AS(interpolation_nodes(5, 4, 4, 8), DomainError);
}

TEST_CASE("L-values at nodes") {
    // trivial theta: -(1 - p^{n-1}) B_n / n
    const long long p = 7;
    auto F = build_extension(p, 1, 20);
    const DirichletChar triv = DirichletChar::trivial(1);
    for (int n : {8, 14, 20}) {
        const BigRational B = bernoulli_number(n);
        BigRational expect = -(1 - BigRational(arith::ipow(7, n - 1))) * B / n;
        expect.canonicalize();
        const UnramifiedElem v = lvalue_at_node(triv, 2, n, F);
        CHECK(v.equals_at_precision(UnramifiedElem::from_scalar(F, PadicScalar::from_rational(p, expect, 20))));
    }
    CHECK_THROWS_AS(lvalue_at_node(triv, 2, 9, F), DomainError);
    // theta(p) enters the Euler factor: chi_{-4}(5) = 1, chi_{-4}(7) = -1
    auto G = build_extension(7, 2, 20);
    const BigRational b7 = generalized_bernoulli(7, chi4).coefficients().at(0);
    BigRational expect = -(1 + BigRational(arith::ipow(7, 6))) * b7 / 7;
    expect.canonicalize();
    CHECK(lvalue_at_node(chi4, 1, 7, G).equals_at_precision(UnramifiedElem::from_scalar(G, PadicScalar::from_rational(7, expect, 20))));
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(lambda_method_one(TwistedChar(chi4, 0, 3)), DomainError);
    CHECK_THROWS_AS(lambda_method_one(TwistedChar(DirichletChar::trivial(1), 0, 5)), DomainError);
    CHECK_THROWS_AS(lambda_method_two(TwistedChar(chi4, 2, 5)), DomainError);
    // order of theta divisible by p
    CHECK_THROWS_AS(lambda_method_one(TwistedChar(DirichletChar::parse("7.2"), 0, 3)), DomainError);
}

TEST_CASE("worked examples") {
    const LambdaResult a = lambda_crosscheck(TwistedChar(chi4, 1, 3));
    CHECK(a.lambda == 0);
    CHECK(!a.lower_bound);
    CHECK(!a.trivial_zero);
    CHECK(a.agreement);

    // 37 is irregular with 37 | B_32
    const LambdaResult b = lambda_method_one(TwistedChar(DirichletChar::trivial(1), 32, 37));
    CHECK(b.lambda == 1);
    CHECK(!b.lower_bound);
    CHECK(b.lambda_corr == 1);
    CHECK(b.f == 1);

    const LambdaResult c = lambda_crosscheck(TwistedChar(chi4, 1, 5));
    CHECK(c.trivial_zero);
    CHECK(c.lambda >= 1);
    CHECK(c.lambda_corr == c.lambda - 1);
    CHECK(c.lambda_text() == std::to_string(c.lambda));
}

TEST_CASE("method two constant term") {
    const std::vector<std::tuple<std::string, int, long long>> cases = {
        {"4.1", 1, 3}, {"4.1", 1, 5}, {"5.2", 0, 3}, {"7.2", 2, 5}, {"13.3", 3, 5}, {"1", 2, 7}, {"8.1.1", 1, 7}, {"7.2", 2, 11}, {"1", 2, 5}};
    for (const auto& [label, i, p] : cases) {
        const DirichletChar theta = DirichletChar::parse(label).primitive();
        const TwistedChar tc(theta, i, p);
        LambdaParams params;
        params.N = 5;
        if (p == 11 || p == 5) params.c = 3;
        const MethodTwoSeries s = method_two_series(tc, params);
        const long long c = s.c;
        auto F = build_extension(p, static_cast<int>(theta.order()), 12);
        const int k = static_cast<int>(arith::mod(i - 1, p - 1));
        const TwistedChar psi(theta, k, p);
        UnramifiedElem expect = b1_twist(theta, k, p, F);
        expect = expect * (UnramifiedElem::one(F) - evaluate_twist_padic(psi, c, F, 12) * PadicScalar::from_integer(p, BigInt(static_cast<long>(c)), 12));
        if (k == 0) expect = expect * (UnramifiedElem::one(F) - embed_cyclotomic(theta.evaluate(p), F));
        INFO(label << " i=" << i << " p=" << p);
        CHECK(s.lhs.coeffs[0].residue(params.N - 2) == expect.residue(params.N - 2));
        // factor: b_0 = 1 - chi(c) <c> = 1 - psi(c) c
        CHECK(s.factor.coeffs[0].residue(2) ==
              (UnramifiedElem::one(F) - evaluate_twist_padic(psi, c, F, 12) * PadicScalar::from_integer(p, BigInt(static_cast<long>(c)), 12)).residue(2));
    }
}

TEST_CASE("regularization factor") {
    // c = 2, chi = omega^2 at p = 5: 1 - 4 <2>^{...} has b_0 = 1 - chi(2)*2 with chi(2) = omega(2)^2 = -1, so b_0 = 3 is a unit
    const MethodTwoSeries s = method_two_series(TwistedChar(DirichletChar::trivial(1), 2, 5));
    CHECK(s.c == 2);
    CHECK(s.factor.coeffs[0].valuation() == 0);
    // c advances past divisors of cond * p
    const MethodTwoSeries t = method_two_series(TwistedChar(chi4, 1, 3));
    CHECK(t.c == 5);
    LambdaParams params;
    params.c = 7;
    CHECK(method_two_series(TwistedChar(chi4, 1, 3), params).c == 7);
}

TEST_CASE("methods agree on random characters") {
    std::mt19937_64 rng(12345);
    int checked = 0;
    const std::vector<long long> primes = {3, 5, 7, 11, 13};
    for (int trial = 0; trial < 400 && checked < 40; ++trial) {
        const long long N = 3 + static_cast<long long>(rng() % 40);
        const long long p = primes[rng() % primes.size()];
        auto chars = enumerate_characters(N, CharFilter{std::nullopt, std::nullopt, true});
        if (chars.empty()) continue;
        const DirichletChar theta = chars[rng() % chars.size()];
        if (theta.conductor() % p == 0 || theta.order() % p == 0 || theta.order() > 12) continue;
        const int i = static_cast<int>(rng() % static_cast<unsigned long long>(p - 1));
        const TwistedChar tc(theta, i, p);
        if (!tc.is_even() || tc.is_trivial()) continue;
        LambdaParams params;
        params.C = 10;
        INFO(tc.label() << " p=" << p);
        CHECK_NOTHROW(lambda_crosscheck(tc, params));
        ++checked;
    }
    CHECK(checked >= 30);
}

TEST_CASE("stability in C") {
    for (const auto& [label, i, p] : std::vector<std::tuple<std::string, int, long long>>{{"1", 32, 37}, {"4.1", 1, 5}, {"5.2", 0, 3}, {"29.7", 1, 3}}) {
        const TwistedChar tc(DirichletChar::parse(label).primitive(), i, p);
        LambdaParams small, big;
        small.C = 10;
        big.C = 15;
        const LambdaResult a = lambda_method_one(tc, small);
        const LambdaResult b = lambda_method_one(tc, big);
        if (!a.lower_bound) {
            CHECK(a.lambda == b.lambda);
            CHECK(!b.lower_bound);
        } else {
            CHECK(b.lambda >= a.lambda);
        }
        const std::size_t n = std::min(a.series.coeffs.size(), b.series.coeffs.size());
        for (std::size_t j = 0; j < n; ++j) {
            const int e = std::min(a.series.precision[j], b.series.precision[j]);
            if (e < 1) continue;
            CHECK(a.series.coeffs[j].residue(1) == b.series.coeffs[j].residue(1));
        }
    }
}

TEST_CASE("held-out node") {
    const TwistedChar tc(DirichletChar::parse("7.2"), 2, 5);
    LambdaParams params;
    params.C = 10;
    const LambdaResult r = lambda_method_one(tc, params);
    FieldPtr F = r.series.field;
    const auto nodes = interpolation_nodes(5, 2, 11, F->K);
    const UnramifiedElem predicted = eval_series(r.series, nodes.back().second);
    const UnramifiedElem actual = lvalue_at_node(tc.theta, 2, nodes.back().first, F);
    CHECK(predicted.residue(4) == actual.residue(4));
}

TEST_CASE("Galois conjugate embeddings") {
    // p = 13 splits Phi_3 into two linear factors whose roots are squares of each other
    const DirichletChar theta = DirichletChar::parse("7.2");
    REQUIRE(theta.order() == 3);
    for (int i : {0, 2, 4, 6}) {
        LambdaParams p0, p1;
        p1.factor_index = 1;
        p0.C = p1.C = 10;
        const LambdaResult a = lambda_method_one(TwistedChar(theta, i, 13), p1);
        const LambdaResult b = lambda_method_one(TwistedChar(theta.pow(2), i, 13), p0);
        CHECK(a.lambda == b.lambda);
        CHECK(a.lower_bound == b.lower_bound);
        const LambdaResult c = lambda_method_two(TwistedChar(theta, i, 13), p1);
        CHECK(c.lambda == a.lambda);
    }
}

TEST_CASE("method two widens the series when lambda is large") {
    const TwistedChar tc(DirichletChar::parse("239.119"), 1, 3);
    LambdaParams narrow;
    narrow.J = 5;
    const LambdaResult one = lambda_method_one(tc);
    const LambdaResult two = lambda_method_two(tc, narrow);
    CHECK(!one.lower_bound);
    CHECK(one.lambda == 6);
    CHECK(!two.lower_bound);
    CHECK(two.lambda == one.lambda);
    CHECK(two.parameter > narrow.N);
}
