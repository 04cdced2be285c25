#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "iwlambda/padic.hpp"
#include "iwlambda/real.hpp"

namespace iwlambda {

/// F_q = F_p[x]/(g) with elements encoded as base-p digit strings c_0 + c_1 p + ...
class FiniteField {
public:
    // q a prime power up to 1024. Shared and cached.
    static std::shared_ptr<const FiniteField> get(long long q);

    long long p() const { return p_; }
    int degree() const { return f_; }
    int q() const { return q_; }
    const std::vector<int>& modulus() const { return g_; }  // monic, constant term first

    int add(int a, int b) const { return add_[static_cast<std::size_t>(a * q_ + b)]; }
    int sub(int a, int b) const { return add_[static_cast<std::size_t>(a * q_ + neg_[static_cast<std::size_t>(b)])]; }
    int mul(int a, int b) const { return mul_[static_cast<std::size_t>(a * q_ + b)]; }
    int neg(int a) const { return neg_[static_cast<std::size_t>(a)]; }
    int inv(int a) const;

    FiniteField(long long p, int f);

private:
    long long p_;
    int f_;
    int q_;
    std::vector<int> g_;
    std::vector<int> add_, mul_, neg_, inv_;
};

using FqPtr = std::shared_ptr<const FiniteField>;

struct FqMatrix {
    FqPtr F;
    int n = 0;
    std::vector<int> a;  // row major

    FqMatrix() = default;
    FqMatrix(FqPtr F_, int n_);
    static FqMatrix identity(FqPtr F, int n);
    static FqMatrix from_rows(FqPtr F, const std::vector<std::vector<int>>& rows);

    int& at(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
    int at(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }

    FqMatrix operator*(const FqMatrix& o) const;
    FqMatrix operator-(const FqMatrix& o) const;
    int rank() const;
    bool invertible() const { return rank() == n; }
    FqMatrix inverse() const;
};

// n - rank((A - I)^n): dimension of the generalized 1-eigenspace. Throws DomainError for singular A.
int assoc_poly_degree(const FqMatrix& A);

// rho(q, r) = q^{-r} prod_{t > r} (1 - q^{-t}), by direct product.
Real rho(long long q, int r);

// #GL(n, F_q).
BigInt gl_order(int n, long long q);

// Finite-n proportions of GL(n, F_q) with associated degree r = 0..n, exactly.
std::vector<BigRational> exact_distribution(int n, long long q);

struct EnumerationResult {
    int n = 0;
    long long q = 0;
    BigInt group_order;                   // invertible matrices found
    std::vector<long long> counts;        // per r
    std::vector<BigRational> proportions; // per r
    std::vector<long long> unipotent;     // r x r unipotent matrices, r = 0..n
    std::vector<long long> neither;       // k x k invertible with A - I invertible, k = 0..n
    std::vector<BigInt> subspace;         // #GL(n) / (#GL(r) #GL(n - r))
};

// Brute force over all n x n matrices; throws BudgetExceeded when q^{n^2} > budget.
EnumerationResult enumerate_small(int n, long long q, long long budget = 20000);

struct DegreeHistogram {
    long long samples = 0;
    long long attempts = 0;  // draws including rejected singular matrices
    std::vector<long long> counts;
    std::uint64_t seed = 0;
};

// Uniform GL(n, F_q) by rejection, split into fixed seeded streams so the result is independent of jobs.
DegreeHistogram montecarlo(int n, long long q, long long samples, std::uint64_t seed, int jobs = 1);

// Uniform invertible matrix from the given stream.
template <class Rng>
FqMatrix random_invertible(const FqPtr& F, int n, Rng& rng, long long* attempts = nullptr);

}  // namespace iwlambda

#include <random>

namespace iwlambda {

template <class Rng>
FqMatrix random_invertible(const FqPtr& F, int n, Rng& rng, long long* attempts) {
    std::uniform_int_distribution<int> dist(0, F->q() - 1);
    FqMatrix A(F, n);
    for (;;) {
        if (attempts) ++*attempts;
        for (auto& x : A.a) x = dist(rng);
        if (A.invertible()) return A;
    }
}

}  // namespace iwlambda
