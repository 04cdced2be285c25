#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "iwlambda/bernoulli.hpp"
#include "iwlambda/padic.hpp"

using namespace iwlambda;
namespace fs = std::filesystem;

namespace {

BigRational poly_at(const std::vector<BigRational>& c, const BigRational& x) {
    BigRational r = 0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

// d^{n-1} sum_{a=1}^{d} chi(a) B_n(a/d) over the primitive character.
CycRational defining_sum(int n, const DirichletChar& chi_in) {
    const DirichletChar chi = chi_in.primitive();
    const long long d = chi.conductor();
    const auto Bn = bernoulli_polynomial(n);
    CycRational acc(static_cast<int>(chi.order()));
    for (long long a = 1; a <= d; ++a) {
        const auto k = chi.value_exponent(a);
        if (!k) continue;
        acc += root_of_unity_power(static_cast<int>(chi.order()), *k) * poly_at(Bn, BigRational(BigInt(static_cast<long>(a)), BigInt(static_cast<long>(d))));
    }
    BigInt dn;
    mpz_ui_pow_ui(dn.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(n));
    return acc * (BigRational(dn) / BigRational(static_cast<long>(d)));
}

}  // namespace

TEST_CASE("plain Bernoulli numbers and polynomials") {
    CHECK(bernoulli_number(0) == 1);
    CHECK(bernoulli_number(1) == BigRational(-1, 2));
    CHECK(bernoulli_number(3) == 0);
    CHECK(bernoulli_number(12) == BigRational(-691, 2730));
    CHECK(bernoulli_polynomial(0) == std::vector<BigRational>{1});
    CHECK(bernoulli_polynomial(1) == std::vector<BigRational>{BigRational(-1, 2), 1});
    CHECK(bernoulli_polynomial(2) == std::vector<BigRational>{BigRational(1, 6), -1, 1});
    // von Staudt-Clausen: v_p(B_n) = -1 when (p-1) | n
    for (int n = 2; n <= 60; n += 2) {
        for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
            if (n % (p - 1) != 0) continue;
            const BigRational b = bernoulli_number(n);
            CHECK(mpz_divisible_ui_p(b.get_den_mpz_t(), static_cast<unsigned long>(p)) != 0);
            CHECK(mpz_divisible_ui_p(b.get_den_mpz_t(), static_cast<unsigned long>(p * p)) == 0);
        }
    }
    // 37 divides the numerator of B_32
    CHECK(mpz_divisible_ui_p(bernoulli_number(32).get_num_mpz_t(), 37) != 0);
}

TEST_CASE("generalized Bernoulli numbers") {
    const DirichletChar chi4 = DirichletChar::parse("4.1");
    CHECK(generalized_bernoulli(1, chi4) == CycRational::from_rational(2, BigRational(-1, 2)));
    CHECK(defining_sum(1, chi4) == CycRational::from_rational(2, BigRational(-1, 2)));
    CHECK(generalized_bernoulli(3, chi4) == CycRational::from_rational(2, BigRational(3, 2)));
    CHECK(generalized_bernoulli(2, chi4).is_zero());
    const DirichletChar chi5 = DirichletChar::parse("5.2");
    CHECK(generalized_bernoulli(2, chi5) == CycRational::from_rational(2, BigRational(4, 5)));
    CHECK(defining_sum(2, chi5) == CycRational::from_rational(2, BigRational(4, 5)));
    const DirichletChar triv = DirichletChar::trivial(1);
    CHECK(generalized_bernoulli(1, triv) == CycRational::from_rational(1, BigRational(1, 2)));
    for (int n = 2; n <= 30; ++n) CHECK(generalized_bernoulli(n, triv) == CycRational::from_rational(1, bernoulli_number(n)));
    CHECK(generalized_bernoulli(4, DirichletChar::parse("15.1.2")) == generalized_bernoulli(4, DirichletChar::parse("15.1.2").primitive()));

    for (const char* label : {"5.1", "7.2", "8.1.1", "12.1.1", "13.4", "21.1.2", "16.0.1", "9.1"}) {
        const DirichletChar chi = DirichletChar::parse(label);
        const auto range = generalized_bernoulli_range(12, chi);
        for (int n = 0; n <= 12; ++n) {
            CHECK(range[static_cast<std::size_t>(n)] == defining_sum(n, chi));
            if ((n % 2 == 0) != chi.primitive().is_even()) CHECK(range[static_cast<std::size_t>(n)].is_zero());
        }
    }
}

TEST_CASE("Kummer congruences") {
    for (const char* label : {"5.2", "4.1", "7.2", "8.0.1", "13.4", "1"}) {
        const DirichletChar theta = DirichletChar::parse(label).primitive();
        const int m = static_cast<int>(theta.order());
        for (long long p : {3LL, 5LL, 7LL, 11LL}) {
            if (theta.conductor() % p == 0 || m % p == 0) continue;
            auto F = build_extension(p, m, 8);
            const auto tp = theta.value_exponent(p);
            auto euler_term = [&](int n) {
                BigInt pn;
                mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n - 1));
                const CycRational factor = CycRational::from_rational(m, 1) - root_of_unity_power(m, *tp) * BigRational(pn);
                return factor * generalized_bernoulli(n, theta) * BigRational(1, n);
            };
            for (int n = 1; n <= 20; ++n) {
                if (n % p == 0 || (n % (p - 1)) == 0 || (n % 2 == 0) != theta.is_even()) continue;
                if (theta.is_trivial() && n == 1) continue;
                const int n2 = n + static_cast<int>(p - 1);
                if (n2 % p == 0) continue;
                const auto v = valuation_at_residue(euler_term(n) - euler_term(n2), F);
                CHECK((!v || *v >= 1));
            }
        }
    }
}

TEST_CASE("Bernoulli cache") {
    const fs::path dir = fs::temp_directory_path() / ("iwl_bern_" + std::to_string(std::random_device{}()));
    const DirichletChar chi4 = DirichletChar::parse("4.1");
    std::vector<int> ns;
    for (int n = 1; n <= 20; ++n) ns.push_back(n);
    {
        BernoulliCache cache(dir);
        CHECK(bulk_bernoulli(chi4, {}, cache).empty());
        const auto first = bulk_bernoulli(chi4, ns, cache);
        const long long computed = cache.compute_count();
        CHECK(computed == 20);
        const auto second = bulk_bernoulli(chi4, ns, cache);
        CHECK(cache.compute_count() == computed);
        for (std::size_t k = 0; k < ns.size(); ++k) {
            CHECK(first[k] == second[k]);
            CHECK(first[k] == defining_sum(ns[k], chi4));
        }
    }
    {
        BernoulliCache fresh(dir);
        const auto loaded = bulk_bernoulli(chi4, ns, fresh);
        CHECK(fresh.compute_count() == 0);
        CHECK(loaded[0] == CycRational::from_rational(2, BigRational(-1, 2)));
    }
    {
        const fs::path block = dir / "bernoulli" / "4" / "4.1" / "0.txt";
        REQUIRE(fs::exists(block));
        std::ofstream(block, std::ios::trunc) << "m 2\n1\tgarbage\n";
        BernoulliCache fresh(dir);
        const auto again = bulk_bernoulli(chi4, ns, fresh);
        CHECK(fresh.compute_count() == 20);
        CHECK(again[2] == CycRational::from_rational(2, BigRational(3, 2)));
        BernoulliCache repaired(dir);
        bulk_bernoulli(chi4, ns, repaired);
        CHECK(repaired.compute_count() == 0);
    }
    fs::remove_all(dir);
}
