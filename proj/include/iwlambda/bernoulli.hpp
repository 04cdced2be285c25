#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "iwlambda/cyclotomic.hpp"
#include "iwlambda/dirichlet.hpp"

namespace iwlambda {

// B_n with B_1 = -1/2; results are memoized process-wide.
BigRational bernoulli_number(int n);

// Coefficients of B_n(x), constant term first.
std::vector<BigRational> bernoulli_polynomial(int n);

// B_{n,chi} over the primitive character inducing chi. B_{1,1} = +1/2.
CycRational generalized_bernoulli(int n, const DirichletChar& chi);

// B_{n,chi} for every n in [0, n_max] in one pass (primitive chi).
std::vector<CycRational> generalized_bernoulli_range(int n_max, const DirichletChar& chi);

/// Memory cache of generalized Bernoulli numbers with optional write-through to
/// <dir>/bernoulli/<modulus>/<label>/<block>.txt, 64 indices per block.
class BernoulliCache {
public:
    explicit BernoulliCache(std::optional<std::filesystem::path> dir = std::nullopt);

    std::vector<CycRational> get(const DirichletChar& chi, const std::vector<int>& ns);
    CycRational get(const DirichletChar& chi, int n);

    // Number of values computed from scratch (not served from memory or disk).
    long long compute_count() const { return computed_.load(); }
    const std::optional<std::filesystem::path>& directory() const { return dir_; }
    void clear_memory();

private:
    using Block = std::map<int, CycRational>;

    std::filesystem::path block_path(const DirichletChar& chi, int block) const;
    bool load_block(const DirichletChar& chi, int block, Block& out) const;
    void store_block(const DirichletChar& chi, int block, const Block& values) const;

    std::optional<std::filesystem::path> dir_;
    std::map<std::string, Block> memory_;
    mutable std::mutex mu_;
    std::atomic<long long> computed_{0};
};

// Process-wide cache used by the lambda engine. Disk storage comes from set_default_cache_dir
// or the IWLAMBDA_CACHE_DIR environment variable.
BernoulliCache& default_bernoulli_cache();
void set_default_cache_dir(std::optional<std::filesystem::path> dir);

std::vector<CycRational> bulk_bernoulli(const DirichletChar& theta, const std::vector<int>& ns, BernoulliCache& cache);

}  // namespace iwlambda
