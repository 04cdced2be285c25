#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iwlambda/lambda.hpp"

namespace iwlambda {

struct RegularityReport {
    std::string label;
    long long p = 0;
    int f = 1;
    bool regular = true;
    std::vector<std::pair<int, int>> witnesses;  // (n, v(B_{n,theta})) with v > 0
    std::vector<std::string> notes;

    std::string verdict() const { return regular ? "regular" : "irregular"; }
    std::string witness_text() const;  // "32:1,..." or "-"
};

// Kummer-type test on B_{n,theta} mod the prime above p; strict also runs every Galois conjugate of theta.
RegularityReport is_chi_regular(const DirichletChar& theta, long long p, bool strict = false, BernoulliCache* cache = nullptr);

struct LambdaTot {
    int total = 0;
    bool lower_bound = false;
    std::vector<std::pair<int, LambdaResult>> parts;  // (twist i, result) for nonzero lambda^corr
};

// sum of lambda^corr(theta omega^j) over even twists, the pole (trivial theta, j = 0) excluded.
LambdaTot lambda_tot(const DirichletChar& theta, long long p, const LambdaParams& params = {});

/// Totally real abelian field cut out by even generating characters.
struct FieldSpec {
    std::vector<DirichletChar> generators;

    static FieldSpec cyclic(const DirichletChar& theta) { return FieldSpec{{theta}}; }
    // All characters of Gal(F/Q) as primitive characters, sorted by label, trivial included.
    std::vector<DirichletChar> characters() const;
    long long degree() const { return static_cast<long long>(characters().size()); }
    std::string label() const;
};

LambdaTot lambda_tot_field(const FieldSpec& F, long long p, const LambdaParams& params = {});
bool is_field_regular(const FieldSpec& F, long long p, bool strict = false, BernoulliCache* cache = nullptr);

}  // namespace iwlambda
