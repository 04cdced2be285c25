#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iwlambda/bernoulli.hpp"
#include "iwlambda/dirichlet.hpp"
#include "iwlambda/padic.hpp"

namespace iwlambda {

/// Leading coefficients of an Iwasawa power series with the number of
/// p-adic digits each one is guaranteed to.
struct PowerSeriesApprox {
    FieldPtr field;
    std::vector<UnramifiedElem> coeffs;
    std::vector<int> precision;

    // "c0;c1;..." with each coefficient's residue vector mod p.
    std::string residues_mod_p() const;
};

struct LambdaParams {
    int C = 15;            // Method I interpolation points
    int K = 0;             // Method I working precision; 0 picks C + 10 plus the divided-difference loss
    int N = 4;             // Method II: F = cond(theta) p^N
    int J = 0;             // Method II coefficients; 0 means p + 2
    long long c = 2;       // Method II regularization point (advanced to the next integer prime to cond*p)
    int factor_index = 0;  // which factor of Phi_m mod p defines the embedding
    BernoulliCache* cache = nullptr;
};

struct LambdaResult {
    int lambda = 0;
    bool lower_bound = false;  // lambda is only known to be >= the stored value
    int lambda_corr = 0;
    bool trivial_zero = false;
    long long order = 1;       // order of theta
    int f = 1;
    std::string method;        // "I", "II" or "I+II"
    int parameter = 0;         // C for Method I, N for Method II
    bool cross_checked = false;
    bool agreement = false;
    PowerSeriesApprox series;

    // "3", or ">=15" for a lower bound.
    std::string lambda_text() const;
    std::string lambda_corr_text() const;
};

// n_k = i + k(p-1) for k = 1..C and t_k = (1+p)^{n_k - 1} - 1 mod p^K.
std::vector<std::pair<int, PadicScalar>> interpolation_nodes(long long p, int i, int C, int K);

// -(1 - theta(p) p^{n-1}) B_{n,theta} / n in Q_q.
UnramifiedElem lvalue_at_node(const DirichletChar& theta, int i, int n, const FieldPtr& field,
                              BernoulliCache* cache = nullptr);

// Throws DomainError unless chi = theta omega^i is even, nontrivial and unramified at p.
void check_lambda_preconditions(const TwistedChar& tc);

LambdaResult lambda_method_one(const TwistedChar& tc, const LambdaParams& params = {});

struct MethodTwoSeries {
    PowerSeriesApprox lhs;     // regularized Dirichlet series coefficients a_j
    PowerSeriesApprox factor;  // coefficients b_j of 1 - chi(c)<c>^{1-s}
    long long c = 2;
};

MethodTwoSeries method_two_series(const TwistedChar& tc, const LambdaParams& params = {});
LambdaResult lambda_method_two(const TwistedChar& tc, const LambdaParams& params = {});

// Runs both methods; throws MethodDisagreement if their answers are incompatible.
LambdaResult lambda_crosscheck(const TwistedChar& tc, const LambdaParams& params = {});

}  // namespace iwlambda
