#include "iwlambda/rmt.hpp"

#include <map>
#include <mutex>
#include <thread>

#include "iwlambda/arith.hpp"
#include "iwlambda/error.hpp"

namespace iwlambda {

namespace {

std::vector<int> poly_mulmod(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& g, long long p) {
    const std::size_t f = g.size() - 1;
    std::vector<long long> prod(2 * f, 0);
    for (std::size_t i = 0; i < f; ++i)
        for (std::size_t j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + static_cast<long long>(a[i]) * b[j]) % p;
    for (std::size_t k = 2 * f - 1; k >= f; --k) {
        const long long c = prod[k];
        if (c == 0) continue;
        for (std::size_t t = 0; t < f; ++t) prod[k - f + t] = arith::mod(prod[k - f + t] - c * g[t], p);
        prod[k] = 0;
    }
    std::vector<int> r(f);
    for (std::size_t i = 0; i < f; ++i) r[i] = static_cast<int>(prod[i]);
    return r;
}

std::vector<int> digits(int x, long long p, int f) {
    std::vector<int> d(static_cast<std::size_t>(f));
    for (int i = 0; i < f; ++i) {
        d[static_cast<std::size_t>(i)] = static_cast<int>(x % p);
        x = static_cast<int>(x / p);
    }
    return d;
}

int undigits(const std::vector<int>& d, long long p) {
    int x = 0;
    for (std::size_t i = d.size(); i-- > 0;) x = static_cast<int>(x * p + d[i]);
    return x;
}

}  // namespace

FiniteField::FiniteField(long long p, int f) : p_(p), f_(f) {
    if (!arith::is_prime(p) || f < 1) throw DomainError("FiniteField: q must be a prime power");
    q_ = static_cast<int>(arith::ipow(static_cast<arith::u64>(p), f));
    if (q_ > 1024) throw DomainError("FiniteField: q > 1024 not supported");
    const auto Q = static_cast<std::size_t>(q_);
    add_.assign(Q * Q, 0);
    neg_.assign(Q, 0);
    for (int a = 0; a < q_; ++a) {
        const auto da = digits(a, p, f);
        std::vector<int> n(da.size());
        for (std::size_t i = 0; i < da.size(); ++i) n[i] = static_cast<int>(arith::mod(-da[i], p));
        neg_[static_cast<std::size_t>(a)] = undigits(n, p);
        for (int b = 0; b < q_; ++b) {
            const auto db = digits(b, p, f);
            std::vector<int> s(da.size());
            for (std::size_t i = 0; i < da.size(); ++i) s[i] = static_cast<int>((da[i] + db[i]) % p);
            add_[static_cast<std::size_t>(a) * Q + static_cast<std::size_t>(b)] = undigits(s, p);
        }
    }
    // first monic g of degree f (constant term varying fastest) without zero divisors
    for (int code = 0; code < q_; ++code) {
        std::vector<int> g = digits(code, p, f);
        g.push_back(1);
        std::vector<int> table(Q * Q, 0);
        bool field = true;
        for (int a = 1; a < q_ && field; ++a) {
            const auto da = digits(a, p, f);
            for (int b = a; b < q_; ++b) {
                const int c = undigits(poly_mulmod(da, digits(b, p, f), g, p), p);
                if (c == 0) {
                    field = false;
                    break;
                }
                table[static_cast<std::size_t>(a) * Q + static_cast<std::size_t>(b)] = c;
                table[static_cast<std::size_t>(b) * Q + static_cast<std::size_t>(a)] = c;
            }
        }
        if (!field) continue;
        g_ = g;
        mul_ = std::move(table);
        break;
    }
    inv_.assign(Q, 0);
    for (int a = 1; a < q_; ++a)
        for (int b = 1; b < q_; ++b)
            if (mul(a, b) == 1) inv_[static_cast<std::size_t>(a)] = b;
}

int FiniteField::inv(int a) const {
    if (a == 0) throw DomainError("FiniteField: inverse of zero");
    return inv_[static_cast<std::size_t>(a)];
}

FqPtr FiniteField::get(long long q) {
    static std::map<long long, FqPtr> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    if (q < 2) throw DomainError("FiniteField: q must be at least 2");
    const auto fac = arith::factorize(q);
    if (fac.size() != 1) throw DomainError("FiniteField: q must be a prime power");
    auto F = std::make_shared<const FiniteField>(fac[0].first, fac[0].second);
    cache.emplace(q, F);
    return F;
}

FqMatrix::FqMatrix(FqPtr F_, int n_) : F(std::move(F_)), n(n_), a(static_cast<std::size_t>(n_ * n_), 0) {}

FqMatrix FqMatrix::identity(FqPtr F, int n) {
    FqMatrix I(std::move(F), n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

FqMatrix FqMatrix::from_rows(FqPtr F, const std::vector<std::vector<int>>& rows) {
    FqMatrix A(std::move(F), static_cast<int>(rows.size()));
    for (int i = 0; i < A.n; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != A.n) throw DomainError("FqMatrix: not square");
        for (int j = 0; j < A.n; ++j) {
            const int x = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (x < 0 || x >= A.F->q()) throw DomainError("FqMatrix: entry out of range");
            A.at(i, j) = x;
        }
    }
    return A;
}

FqMatrix FqMatrix::operator*(const FqMatrix& o) const {
    FqMatrix C(F, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const int x = at(i, k);
            if (x == 0) continue;
            for (int j = 0; j < n; ++j) C.at(i, j) = F->add(C.at(i, j), F->mul(x, o.at(k, j)));
        }
    return C;
}

FqMatrix FqMatrix::operator-(const FqMatrix& o) const {
    FqMatrix C(F, n);
    for (std::size_t k = 0; k < a.size(); ++k) C.a[k] = F->sub(a[k], o.a[k]);
    return C;
}

int FqMatrix::rank() const {
    std::vector<int> m = a;
    auto el = [&](int i, int j) -> int& { return m[static_cast<std::size_t>(i * n + j)]; };
    int r = 0;
    for (int col = 0; col < n && r < n; ++col) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (el(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        for (int j = 0; j < n; ++j) std::swap(el(r, j), el(piv, j));
        const int s = F->inv(el(r, col));
        for (int j = col; j < n; ++j) el(r, j) = F->mul(el(r, j), s);
        for (int i = r + 1; i < n; ++i) {
            const int c = el(i, col);
            if (c == 0) continue;
            for (int j = col; j < n; ++j) el(i, j) = F->sub(el(i, j), F->mul(c, el(r, j)));
        }
        ++r;
    }
    return r;
}

FqMatrix FqMatrix::inverse() const {
    std::vector<int> m = a;
    FqMatrix inv = identity(F, n);
    auto el = [&](int i, int j) -> int& { return m[static_cast<std::size_t>(i * n + j)]; };
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (el(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) throw DomainError("FqMatrix: singular matrix");
        for (int j = 0; j < n; ++j) {
            std::swap(el(col, j), el(piv, j));
            std::swap(inv.at(col, j), inv.at(piv, j));
        }
        const int s = F->inv(el(col, col));
        for (int j = 0; j < n; ++j) {
            el(col, j) = F->mul(el(col, j), s);
            inv.at(col, j) = F->mul(inv.at(col, j), s);
        }
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            const int c = el(i, col);
            if (c == 0) continue;
            for (int j = 0; j < n; ++j) {
                el(i, j) = F->sub(el(i, j), F->mul(c, el(col, j)));
                inv.at(i, j) = F->sub(inv.at(i, j), F->mul(c, inv.at(col, j)));
            }
        }
    }
    return inv;
}

int assoc_poly_degree(const FqMatrix& A) {
    if (!A.invertible()) throw DomainError("assoc_poly_degree: singular matrix");
    FqMatrix B = A - FqMatrix::identity(A.F, A.n);
    // any power >= n has the same kernel
    for (int e = 1; e < A.n; e *= 2) B = B * B;
    return A.n - B.rank();
}

Real rho(long long q, int r) {
    if (q < 2 || r < 0) throw DomainError("rho: need q >= 2 and r >= 0");
    const Real y = Real(1) / Real(q);
    const Real eps("1e-60");
    Real yt = pow(y, r + 1);
    Real prod = 1;
    while (yt > eps) {
        prod *= 1 - yt;
        yt *= y;
    }
    return pow(y, r) * prod;
}

BigInt gl_order(int n, long long q) {
    BigInt Q = static_cast<long>(q), qn, qi = 1, out = 1;
    mpz_pow_ui(qn.get_mpz_t(), Q.get_mpz_t(), static_cast<unsigned long>(n));
    for (int i = 0; i < n; ++i) {
        out *= qn - qi;
        qi *= Q;
    }
    return out;
}

std::vector<BigRational> exact_distribution(int n, long long q) {
    if (n < 1 || q < 2) throw DomainError("exact_distribution: need n >= 1 and q >= 2");
    const BigRational Q = BigInt(static_cast<long>(q));
    std::vector<BigRational> out;
    for (int r = 0; r <= n; ++r) {
        BigRational lead = 1, qr = 1;
        for (int i = 1; i <= r; ++i) {
            qr /= Q;
            BigRational qi = 1;
            for (int t = 0; t < i; ++t) qi /= Q;
            lead /= (1 - qi);
        }
        lead *= qr;
        BigRational tail = 1, den = 1, qi = 1;
        for (int i = 1; i <= n - r; ++i) {
            qi *= Q;
            den *= (qi - 1);
            tail += BigRational((i % 2) ? -1 : 1) / den;
        }
        BigRational v = lead * tail;
        v.canonicalize();
        out.push_back(v);
    }
    return out;
}

namespace {

// Calls fn on every k x k matrix over F (entries as a counter).
template <class Fn>
void for_all_matrices(const FqPtr& F, int k, Fn fn) {
    FqMatrix A(F, k);
    const std::size_t N = A.a.size();
    for (;;) {
        fn(A);
        std::size_t i = 0;
        while (i < N && ++A.a[i] == F->q()) A.a[i++] = 0;
        if (i == N) break;
    }
}

}  // namespace

EnumerationResult enumerate_small(int n, long long q, long long budget) {
    if (n < 1) throw DomainError("enumerate_small: n must be positive");
    long double size = 1;
    for (int i = 0; i < n * n; ++i) size *= static_cast<long double>(q);
    if (size > static_cast<long double>(budget)) throw BudgetExceeded("enumerate_small: q^(n^2) exceeds the budget");
    const FqPtr F = FiniteField::get(q);
    EnumerationResult res;
    res.n = n;
    res.q = q;
    res.counts.assign(static_cast<std::size_t>(n) + 1, 0);
    long long total = 0;
    for_all_matrices(F, n, [&](const FqMatrix& A) {
        if (!A.invertible()) return;
        ++total;
        ++res.counts[static_cast<std::size_t>(assoc_poly_degree(A))];
    });
    res.group_order = static_cast<long>(total);
    for (long long c : res.counts) {
        BigRational v(BigInt(static_cast<long>(c)), BigInt(static_cast<long>(total)));
        v.canonicalize();
        res.proportions.push_back(v);
    }
    res.unipotent.push_back(1);
    res.neither.push_back(1);
    for (int k = 1; k <= n; ++k) {
        long long u = 0, nb = 0;
        for_all_matrices(F, k, [&](const FqMatrix& A) {
            if (!A.invertible()) return;
            if (assoc_poly_degree(A) == k) ++u;
            if ((A - FqMatrix::identity(F, k)).invertible()) ++nb;
        });
        res.unipotent.push_back(u);
        res.neither.push_back(nb);
    }
    const BigInt gn = gl_order(n, q);
    for (int r = 0; r <= n; ++r) res.subspace.push_back(gn / (gl_order(r, q) * gl_order(n - r, q)));
    return res;
}

DegreeHistogram montecarlo(int n, long long q, long long samples, std::uint64_t seed, int jobs) {
    if (n < 1 || samples < 0) throw DomainError("montecarlo: bad arguments");
    const FqPtr F = FiniteField::get(q);
    const int streams = 64;
    std::vector<DegreeHistogram> parts(streams);
    auto run = [&](int s) {
        DegreeHistogram& h = parts[static_cast<std::size_t>(s)];
        h.counts.assign(static_cast<std::size_t>(n) + 1, 0);
        const long long count = samples / streams + (s < samples % streams ? 1 : 0);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(s)};
        std::mt19937_64 rng(seq);
        for (long long k = 0; k < count; ++k) {
            const FqMatrix A = random_invertible(F, n, rng, &h.attempts);
            ++h.counts[static_cast<std::size_t>(assoc_poly_degree(A))];
            ++h.samples;
        }
    };
    jobs = std::max(1, std::min(jobs, streams));
    if (jobs == 1) {
        for (int s = 0; s < streams; ++s) run(s);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&, t] {
                for (int s = t; s < streams; s += jobs) run(s);
            });
        for (auto& th : pool) th.join();
    }
    DegreeHistogram out;
    out.seed = seed;
    out.counts.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& h : parts) {
        out.samples += h.samples;
        out.attempts += h.attempts;
        for (std::size_t r = 0; r < h.counts.size(); ++r) out.counts[r] += h.counts[r];
    }
    return out;
}

}  // namespace iwlambda
