#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "iwlambda/arith.hpp"
#include "iwlambda/error.hpp"
#include "iwlambda/experiments.hpp"

using namespace iwlambda;
namespace fs = std::filesystem;

namespace {

bool squarefree(long long n) {
    for (long long d = 2; d * d <= n; ++d)
        if (n % (d * d) == 0) return false;
    return true;
}

bool fundamental(long long D) {
    const long long a = D < 0 ? -D : D;
    if (arith::mod(D, 4) == 1) return squarefree(a);
    if (a % 4 != 0) return false;
    const long long m = D / 4;
    return (arith::mod(m, 4) == 2 || arith::mod(m, 4) == 3) && squarefree(m < 0 ? -m : m);
}

}  // namespace

TEST_CASE("config") {
    ScanConfig c;
    c.set("prime", "3,5, 7");
    CHECK(c.primes == std::vector<long long>{3, 5, 7});
    c.set("twists", "0,2");
    REQUIRE(c.twists);
    CHECK(*c.twists == std::vector<int>{0, 2});
    c.set("twists", "all");
    CHECK(!c.twists);
    c.set("points", "12");
    CHECK(c.params.C == 12);
    CHECK_THROWS_AS(c.set("bogus", "1"), DomainError);
    CHECK_THROWS_AS(c.set("order", "x"), DomainError);

    const fs::path path = fs::temp_directory_path() / "iwlambda_test.conf";
    std::ofstream(path) << "# scan\norder = 2\ncond-max=500  # bound\nseries-depth = 5\nomit-trivial-zero = no\n";
    ScanConfig d;
    d.load(path);
    CHECK(d.order == 2);
    CHECK(d.cond_max == 500);
    CHECK(d.params.N == 5);
    CHECK(!d.omit_trivial_zero);
    std::ofstream(path) << "order 2\n";
    CHECK_THROWS_AS(d.load(path), DomainError);
    fs::remove(path);

    ScanConfig bad;
    bad.primes = {4};
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("primitive characters") {
    long long expect = 0;
    for (long long D = -99; D <= 99; ++D)
        if (D != 1 && D != 0 && D != -1 && fundamental(D)) ++expect;
    CHECK(static_cast<long long>(primitive_characters(2, 1, 100).size()) == expect);
    const auto cubic = primitive_characters(3, 1, 100);
    for (const auto& c : cubic) {
        CHECK(c.order() == 3);
        CHECK(c.is_primitive());
    }
    for (std::size_t k = 1; k < cubic.size(); ++k) CHECK(cubic[k - 1].modulus() <= cubic[k].modulus());
    CHECK(primitive_characters(3, 1, 7).empty());
}

TEST_CASE("order scans") {
    ScanConfig empty;
    empty.cond_max = 7;
    CHECK(scan_order(empty).rows.empty());

    ScanConfig cfg;
    cfg.primes = {5, 7};
    cfg.order = 3;
    cfg.cond_max = 150;
    const DistributionTable a = scan_order(cfg);
    cfg.jobs = 3;
    const DistributionTable b = scan_order(cfg);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.failures.empty());
    for (const auto& row : a.rows) {
        long long s = 0;
        for (long long c : row.counts) s += c;
        CHECK(s == row.N);
        double t = 0;
        for (int r = 0; r <= kLambdaBins; ++r) t += row.proportion(r);
        CHECK(std::fabs(t - 1) < 1e-9);
    }
    // rows reproduce single-shot runs
    long long zeros = 0;
    for (const auto& theta : primitive_characters(3, 1, 150))
        if (theta.conductor() % 7 != 0 && lambda_crosscheck(TwistedChar(theta, 2, 7), cfg.params).lambda_corr == 0) ++zeros;
    for (const auto& row : a.rows)
        if (row.p == 7 && row.twist == 2) CHECK(row.counts[0] == zeros);

    // trivial-zero policy
    ScanConfig q;
    q.primes = {5};
    q.order = 2;
    q.cond_max = 60;
    const DistributionTable omit = scan_order(q);
    q.omit_trivial_zero = false;
    const DistributionTable keep = scan_order(q);
    long long omitted = 0, n_omit = 0, n_keep = 0;
    for (const auto& r : omit.rows) {
        omitted += r.omitted_trivial_zero;
        n_omit += r.N;
    }
    for (const auto& r : keep.rows) n_keep += r.N;
    CHECK(omitted > 0);
    CHECK(n_keep == n_omit + omitted);
    CHECK(omit.to_csv().find("5;pred;-;0.7603;0.1901;0.0396") != std::string::npos);
}

TEST_CASE("regularity scans") {
    CHECK(regular_scan(2, 100, 0, 1).N == 0);
    const RegularSummary s = regular_scan(2, 60, 10, 1);
    CHECK(s.N > 0);
    CHECK(s.min <= s.mean);
    CHECK(s.mean <= s.max);
    for (const auto& c : s.characters) {
        CHECK(c.reports.size() == 10);
        for (const auto& r : c.reports) {
            CHECK(r.regular == r.witnesses.empty());
            CHECK(is_chi_regular(DirichletChar::parse(r.label), r.p).regular == r.regular);
        }
    }
    const std::string csv = s.to_csv();
    CHECK(csv.rfind("label;p;f;verdict;witnesses\n", 0) == 0);
    const RegularSummary cubic = regular_scan(3, 100, 5, 2);
    for (const auto& c : cubic.characters)
        for (const auto& r : c.reports) CHECK(r.p % 3 == 2);
}

TEST_CASE("field scans") {
    const FieldScan q5 = field_scan(1, 100, 5);
    REQUIRE(q5.rows.size() == 1);
    CHECK(q5.rows[0].field == "Q");
    CHECK(q5.rows[0].lambda_tot == 0);
    const FieldScan q37 = field_scan(1, 100, 37);
    CHECK(q37.rows[0].lambda_tot == 1);

    const FieldScan cubic = field_scan(3, 400, 5);
    CHECK(!cubic.rows.empty());
    CHECK(cubic.histogram[1] == 0);
    CHECK(cubic.histogram[3] == 0);
    // one field per conjugate pair
    long long chars = 0;
    for (const auto& c : primitive_characters(3, 2, 400, 1)) chars += c.conductor() % 5 != 0;
    CHECK(static_cast<long long>(cubic.rows.size()) * 2 == chars);
    CHECK(cubic.to_csv().rfind("field;p;lambda_tot\n", 0) == 0);
    CHECK_THROWS_AS(field_scan(5, 100, 5), DomainError);
}

TEST_CASE("appendix") {
    const AppendixTable t = appendix_tables(5, 60, 10);
    CHECK(t.failures.empty());
    bool chi4 = false;
    for (const auto& r : t.rows) {
        const LambdaResult x = lambda_crosscheck(TwistedChar(DirichletChar::parse(r.label), r.twist, 5));
        CHECK(x.lambda_text() == r.lambda);
        CHECK(x.trivial_zero == r.trivial_zero);
        CHECK((r.trivial_zero ? x.lambda > 1 : x.lambda > 0));
        if (r.label == "4.1" && r.twist == 1) chi4 = true;
    }
    const LambdaResult c4 = lambda_crosscheck(TwistedChar(DirichletChar::parse("4.1"), 1, 5));
    CHECK(chi4 == (c4.lambda >= 2));
    // every unlisted character has lambda 0 (or 1 with a trivial zero)
    for (const auto& theta : primitive_characters(0, 1, 30)) {
        if (theta.conductor() % 5 == 0 || theta.order() % 5 == 0) continue;
        for (int i = 0; i < 4; ++i) {
            const TwistedChar tc(theta, i, 5);
            if (!tc.is_even() || tc.is_trivial()) continue;
            const LambdaResult r = lambda_crosscheck(tc);
            bool listed = false;
            for (const auto& row : t.rows) listed = listed || (row.label == theta.label() && row.twist == i);
            CHECK(listed == (r.trivial_zero ? r.lambda > 1 : r.lambda > 0));
        }
    }
    for (std::size_t k = 1; k < t.rows.size(); ++k) CHECK(t.rows[k - 1].modulus <= t.rows[k].modulus);
    const std::string csv = t.to_csv();
    CHECK(csv.rfind("lambda;modulus;char_label;twist_i;order;f;trivial_zero\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(t.rows.size()) + 1);
}

TEST_CASE("csv helpers") {
    const std::string p = predict_csv({7, 13}, 3, 3);
    CHECK(p.find("lambda;7;3;1;0;0.8368") != std::string::npos);
    CHECK(p.find("chi_regular;-;3;-;-;0.8033") != std::string::npos);
    CHECK(p.find("field_regular;7;3;1;-;0.2231") != std::string::npos);
    const DegreeHistogram h = montecarlo(3, 2, 500, 1);
    const std::string r = rmt_csv(h, 3, 2);
    CHECK(r.rfind("r;count;empirical;exact;rho\n", 0) == 0);
    CHECK(std::count(r.begin(), r.end(), '\n') == 5);
    CHECK(format_fixed(0.56012, 4) == "0.5601");
}
