#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "iwlambda/heuristics.hpp"
#include "iwlambda/lambda.hpp"
#include "iwlambda/regularity.hpp"
#include "iwlambda/rmt.hpp"

namespace iwlambda {

struct ScanConfig {
    std::vector<long long> primes{5};
    long long order = 3;
    long long cond_max = 1000;               // conductors strictly below
    std::optional<std::vector<int>> twists;  // all even twists when unset
    bool omit_trivial_zero = true;
    LambdaParams params;
    int jobs = 1;
    std::uint64_t seed = 0;
    std::optional<std::string> cache_dir;
    std::optional<std::string> out;

    int prime_count = 25;  // regular-scan
    int f = 1;             // regular-scan residue degree
    bool strict = false;   // regular-scan: also test Galois conjugates
    int f_max = 10;        // appendix: residue degree strictly below
    int n = 8;             // rmt-sim
    long long q = 3;
    long long samples = 100000;
    int r_max = 7;         // predict

    // key = value, keys as the long CLI flags without dashes. Throws DomainError on bad input.
    void set(const std::string& key, const std::string& value);
    void load(const std::filesystem::path& path);
    void validate() const;
};

// Runs fn(0..n-1) on up to `jobs` threads; callers write into preallocated slots so order never matters.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t k; (k = next++) < n;) fn(k);
        });
    for (auto& th : pool) th.join();
}

// Primitive characters of the given order with cond_min <= conductor < cond_max, sorted by (modulus, exponents).
std::vector<DirichletChar> primitive_characters(long long order, long long cond_min, long long cond_max,
                                                std::optional<int> parity = std::nullopt);

struct Failure {
    std::string label;
    long long p = 0;
    int twist = -1;
    std::string message;
};

constexpr int kLambdaBins = 8;  // lambda = 0..7, larger values go to the overflow column

struct DistributionRow {
    long long p = 0;
    int twist = 0;
    long long N = 0;
    std::vector<long long> counts = std::vector<long long>(kLambdaBins + 1, 0);
    long long omitted_trivial_zero = 0;
    long long excluded = 0;

    double proportion(int r) const { return N ? static_cast<double>(counts[static_cast<std::size_t>(r)]) / static_cast<double>(N) : 0.0; }
};

struct DistributionTable {
    long long order = 0;
    std::vector<DistributionRow> rows;
    std::map<long long, LambdaPrediction> predictions;
    std::vector<Failure> failures;

    // pooled over every twist row of p: (count with lambda^corr = r, N)
    std::pair<long long, long long> pooled(long long p, int r) const;
    // p;twist;N;l0;...;l7;l8+  plus a "pred" row per prime
    std::string to_csv() const;
};

DistributionTable scan_order(const ScanConfig& cfg);

struct CharRegularity {
    std::string label;
    std::vector<RegularityReport> reports;
    double proportion = 0;
};

struct RegularSummary {
    long long order = 0;
    int f = 1;
    std::vector<CharRegularity> characters;
    std::vector<Failure> failures;
    long long N = 0;
    double mean = 0, stddev = 0, min = 0, max = 0;

    std::string to_csv() const;      // label;p;f;verdict;witnesses
    std::string summary() const;     // N;proportion;stddev;min;max
};

// The first prime_count odd primes p with ord_{order}(p) = f, p not dividing cond, per primitive character.
RegularSummary regular_scan(long long order, long long cond_max, int prime_count, int f, const ScanConfig& cfg = {});

struct FieldRow {
    std::string field;
    long long lambda_tot = 0;
    bool lower_bound = false;
};

struct FieldScan {
    long long p = 0;
    long long degree = 0;
    std::vector<FieldRow> rows;
    std::vector<long long> histogram = std::vector<long long>(kLambdaBins + 1, 0);
    std::vector<Failure> failures;

    std::string to_csv() const;  // field;p;lambda_tot
};

// Cyclic totally real fields of the given degree and conductor below cond_max, one per kernel.
FieldScan field_scan(long long degree, long long cond_max, long long p, const ScanConfig& cfg = {});

struct AppendixRow {
    std::string lambda;
    long long modulus = 0;
    std::string label;
    std::vector<long long> exponents;
    int twist = 0;
    long long order = 0;
    int f = 1;
    bool trivial_zero = false;
};

struct AppendixTable {
    long long p = 0;
    std::vector<AppendixRow> rows;
    std::vector<Failure> failures;

    std::string to_csv() const;  // lambda;modulus;char_label;twist_i;order;f;trivial_zero
};

AppendixTable appendix_tables(long long p, long long cond_max, int f_max, const ScanConfig& cfg = {});

// r;count;empirical;exact;rho
std::string rmt_csv(const DegreeHistogram& h, int n, long long q);

// Predicted lambda distributions per prime, chi-regular proportion and field-regular probabilities.
std::string predict_csv(const std::vector<long long>& primes, long long order, int r_max);

std::string format_fixed(double x, int digits = 4);
std::string format_failures(const std::vector<Failure>& failures);

}  // namespace iwlambda
