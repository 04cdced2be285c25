#include "iwlambda/bernoulli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "iwlambda/error.hpp"

namespace iwlambda {

namespace fs = std::filesystem;

namespace {

std::mutex g_plain_mu;
std::vector<BigRational> g_plain = {BigRational(1)};

BigInt binomial(int n, int k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

}  // namespace

BigRational bernoulli_number(int n) {
    if (n < 0) throw DomainError("bernoulli_number: negative index");
    std::lock_guard<std::mutex> lock(g_plain_mu);
    while (static_cast<int>(g_plain.size()) <= n) {
        const int k = static_cast<int>(g_plain.size());
        if (k > 1 && k % 2 == 1) {
            g_plain.emplace_back(0);
            continue;
        }
        // sum_{j=0}^{k} C(k+1, j) B_j = 0
        BigRational s = 0;
        for (int j = 0; j < k; ++j) {
            if (g_plain[static_cast<std::size_t>(j)] == 0) continue;
            s += BigRational(binomial(k + 1, j)) * g_plain[static_cast<std::size_t>(j)];
        }
        BigRational b = -s / BigRational(k + 1);
        b.canonicalize();
        g_plain.push_back(b);
    }
    return g_plain[static_cast<std::size_t>(n)];
}

std::vector<BigRational> bernoulli_polynomial(int n) {
    std::vector<BigRational> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(n - k)] = BigRational(binomial(n, k)) * bernoulli_number(k);
    return c;
}

std::vector<CycRational> generalized_bernoulli_range(int n_max, const DirichletChar& chi_in) {
    const DirichletChar chi = chi_in.primitive();
    const int m = static_cast<int>(chi.order());
    std::vector<CycRational> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    std::vector<BigRational> B;
    B.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int k = 0; k <= n_max; ++k) B.push_back(bernoulli_number(k));
    if (chi.is_trivial()) {
        for (int n = 0; n <= n_max; ++n) out.push_back(CycRational::from_rational(1, n == 1 ? BigRational(1, 2) : B[static_cast<std::size_t>(n)]));
        return out;
    }
    const long long d = chi.conductor();
    std::vector<int> bucket(static_cast<std::size_t>(d) + 1, -1);
    for (long long a = 1; a <= d; ++a) {
        const auto k = chi.value_exponent(a);
        if (k) bucket[static_cast<std::size_t>(a)] = static_cast<int>(*k);
    }
    // S[j][e] = sum of a^j over a in [1, d] with chi(a) = zeta^e.
    std::vector<std::vector<BigInt>> S(static_cast<std::size_t>(n_max) + 1, std::vector<BigInt>(static_cast<std::size_t>(m), 0));
    for (long long a = 1; a <= d; ++a) {
        const int e = bucket[static_cast<std::size_t>(a)];
        if (e < 0) continue;
        BigInt pw = 1;
        for (int j = 0; j <= n_max; ++j) {
            S[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)] += pw;
            pw *= static_cast<long>(a);
        }
    }
    const int parity = chi.parity();
    BigInt dz = static_cast<long>(d);
    for (int n = 0; n <= n_max; ++n) {
        if ((n % 2 == 0 ? 1 : -1) != parity) {
            out.emplace_back(m);
            continue;
        }
        std::vector<BigRational> acc(static_cast<std::size_t>(m), 0);
        // sum_k C(n,k) B_k d^{k-1} S_{n-k}
        BigInt dpow = 1;  // d^k
        for (int k = 0; k <= n; ++k) {
            const BigRational& bk = B[static_cast<std::size_t>(k)];
            if (bk != 0) {
                const BigRational w = BigRational(binomial(n, k) * dpow) * bk / BigRational(dz);
                const auto& s = S[static_cast<std::size_t>(n - k)];
                for (int e = 0; e < m; ++e) {
                    if (s[static_cast<std::size_t>(e)] != 0) acc[static_cast<std::size_t>(e)] += w * BigRational(s[static_cast<std::size_t>(e)]);
                }
            }
            dpow *= dz;
        }
        out.push_back(CycRational::from_coefficients(m, std::move(acc)));
    }
    return out;
}

CycRational generalized_bernoulli(int n, const DirichletChar& chi) {
    if (n < 0) throw DomainError("generalized_bernoulli: negative index");
    const DirichletChar prim = chi.primitive();
    if (!prim.is_trivial() && (n % 2 == 0 ? 1 : -1) != prim.parity()) return CycRational(static_cast<int>(prim.order()));
    return generalized_bernoulli_range(n, prim).back();
}

// ------------------------------------------------------------------ cache

BernoulliCache::BernoulliCache(std::optional<fs::path> dir) : dir_(std::move(dir)) {}

void BernoulliCache::clear_memory() {
    std::lock_guard<std::mutex> lock(mu_);
    memory_.clear();
}

fs::path BernoulliCache::block_path(const DirichletChar& chi, int block) const {
    return *dir_ / "bernoulli" / std::to_string(chi.modulus()) / chi.label() / (std::to_string(block) + ".txt");
}

bool BernoulliCache::load_block(const DirichletChar& chi, int block, Block& out) const {
    const fs::path path = block_path(chi, block);
    std::ifstream in(path);
    if (!in) return false;
    const int m = static_cast<int>(chi.order());
    Block values;
    std::string line;
    bool complete = false;
    try {
        if (!std::getline(in, line) || line != "m " + std::to_string(m)) throw Error("bad header");
        while (std::getline(in, line)) {
            if (line.rfind("end ", 0) == 0) {
                if (std::stoul(line.substr(4)) != values.size()) throw Error("bad count");
                complete = true;
                break;
            }
            const auto tab = line.find('\t');
            if (tab == std::string::npos) throw Error("bad line");
            const int n = std::stoi(line.substr(0, tab));
            if (n / 64 != block || n < 0) throw Error("index outside block");
            values.emplace(n, CycRational::parse(m, line.substr(tab + 1)));
        }
        if (!complete) throw Error("truncated");
    } catch (const std::exception& e) {
        std::cerr << "warning: ignoring corrupt Bernoulli cache file " << path << " (" << e.what() << ")\n";
        return false;
    }
    for (auto& [n, v] : values) out.insert_or_assign(n, std::move(v));
    return true;
}

void BernoulliCache::store_block(const DirichletChar& chi, int block, const Block& values) const {
    const fs::path path = block_path(chi, block);
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
        std::cerr << "warning: cannot create cache directory " << path.parent_path() << "\n";
        return;
    }
    std::ostringstream body;
    body << "m " << chi.order() << "\n";
    std::size_t count = 0;
    for (const auto& [n, v] : values) {
        if (n / 64 != block) continue;
        body << n << "\t" << v.to_string() << "\n";
        ++count;
    }
    body << "end " << count << "\n";
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::string>{}(body.str()) % 1000000);
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << body.str();
        if (!out) {
            std::cerr << "warning: cannot write cache file " << tmp << "\n";
            return;
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) fs::remove(tmp, ec);
}

std::vector<CycRational> BernoulliCache::get(const DirichletChar& chi_in, const std::vector<int>& ns) {
    const DirichletChar chi = chi_in.primitive();
    const std::string key = chi.label();
    std::vector<int> missing;
    std::set<int> touched_blocks;
    {
        std::lock_guard<std::mutex> lock(mu_);
        Block& mem = memory_[key];
        std::set<int> tried;
        for (int n : ns) {
            if (n < 0) throw DomainError("BernoulliCache: negative index");
            if (mem.count(n)) continue;
            const int block = n / 64;
            if (dir_ && !tried.count(block)) {
                tried.insert(block);
                load_block(chi, block, mem);
                if (mem.count(n)) continue;
            }
            missing.push_back(n);
        }
    }
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
        auto values = generalized_bernoulli_range(missing.back(), chi);
        computed_ += static_cast<long long>(missing.size());
        std::lock_guard<std::mutex> lock(mu_);
        Block& mem = memory_[key];
        for (int n : missing) {
            mem.insert_or_assign(n, values[static_cast<std::size_t>(n)]);
            touched_blocks.insert(n / 64);
        }
        // the rest of the range comes for free
        for (int n = 0; n <= missing.back(); ++n) {
            if (values[static_cast<std::size_t>(n)].is_zero() || mem.count(n)) continue;
            mem.emplace(n, values[static_cast<std::size_t>(n)]);
            touched_blocks.insert(n / 64);
        }
        if (dir_) {
            for (int b : touched_blocks) store_block(chi, b, mem);
        }
    }
    std::vector<CycRational> out;
    out.reserve(ns.size());
    std::lock_guard<std::mutex> lock(mu_);
    const Block& mem = memory_[key];
    for (int n : ns) out.push_back(mem.at(n));
    return out;
}

CycRational BernoulliCache::get(const DirichletChar& chi, int n) { return get(chi, std::vector<int>{n}).front(); }

namespace {
std::mutex g_default_mu;
std::unique_ptr<BernoulliCache> g_default;
}  // namespace

BernoulliCache& default_bernoulli_cache() {
    std::lock_guard<std::mutex> lock(g_default_mu);
    if (!g_default) {
        std::optional<fs::path> dir;
        if (const char* env = std::getenv("IWLAMBDA_CACHE_DIR"); env && *env) dir = env;
        g_default = std::make_unique<BernoulliCache>(dir);
    }
    return *g_default;
}

void set_default_cache_dir(std::optional<fs::path> dir) {
    std::lock_guard<std::mutex> lock(g_default_mu);
    g_default = std::make_unique<BernoulliCache>(std::move(dir));
}

std::vector<CycRational> bulk_bernoulli(const DirichletChar& theta, const std::vector<int>& ns, BernoulliCache& cache) {
    if (ns.empty()) return {};
    return cache.get(theta, ns);
}

}  // namespace iwlambda
