#include "iwlambda/cyclotomic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "iwlambda/arith.hpp"
#include "iwlambda/error.hpp"

namespace iwlambda {

namespace {

IntPoly compute_cyclotomic(int m) {
    // x^m - 1 divided by Phi_d for every proper divisor d.
    IntPoly num(static_cast<std::size_t>(m) + 1, 0);
    num[0] = -1;
    num[static_cast<std::size_t>(m)] = 1;
    for (int d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        const IntPoly& den = cyclotomic_polynomial(d);
        // Exact division by a monic polynomial.
        const std::size_t dd = den.size() - 1;
        IntPoly quot(num.size() - dd, 0);
        for (std::size_t i = num.size() - 1; i + 1 > dd; --i) {
            const BigInt c = num[i];
            const std::size_t shift = i - dd;
            quot[shift] = c;
            if (c != 0) {
                for (std::size_t k = 0; k <= dd; ++k) num[shift + k] -= c * den[k];
            }
            if (i == dd) break;
        }
        num = std::move(quot);
    }
    return num;
}

std::mutex& cache_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

const IntPoly& cyclotomic_polynomial(int m) {
    if (m < 1) throw DomainError("cyclotomic_polynomial: m must be >= 1");
    static std::map<int, std::unique_ptr<IntPoly>> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex());
        auto it = cache.find(m);
        if (it != cache.end()) return *it->second;
    }
    IntPoly poly = compute_cyclotomic(m);
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto [it, inserted] = cache.emplace(m, std::make_unique<IntPoly>(std::move(poly)));
    return *it->second;
}

const std::vector<IntPoly>& root_of_unity_table(int m) {
    static std::map<int, std::unique_ptr<std::vector<IntPoly>>> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return *it->second;
    }
    const IntPoly& phi = cyclotomic_polynomial(m);
    const std::size_t deg = phi.size() - 1;
    auto table = std::make_unique<std::vector<IntPoly>>();
    IntPoly cur(deg, 0);
    cur[0] = 1;
    for (int k = 0; k < m; ++k) {
        table->push_back(cur);
        // Multiply by x and reduce with the monic Phi_m.
        BigInt top = cur[deg - 1];
        for (std::size_t i = deg - 1; i > 0; --i) cur[i] = cur[i - 1];
        cur[0] = 0;
        if (top != 0) {
            for (std::size_t i = 0; i < deg; ++i) cur[i] -= top * phi[i];
        }
    }
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(m, std::move(table));
    return *it->second;
}

CycRational::CycRational(int m) : m_(m) {
    if (m < 1) throw DomainError("CycRational: order must be >= 1");
    coeffs_.assign(static_cast<std::size_t>(arith::euler_phi(m)), BigRational(0));
}

CycRational CycRational::from_rational(int m, const BigRational& q) {
    CycRational out(m);
    out.coeffs_[0] = q;
    out.coeffs_[0].canonicalize();
    return out;
}

CycRational CycRational::from_coefficients(int m, std::vector<BigRational> coeffs) {
    CycRational out(m);
    const IntPoly& phi = cyclotomic_polynomial(m);
    const std::size_t deg = phi.size() - 1;
    for (auto& c : coeffs) c.canonicalize();
    for (std::size_t i = coeffs.size(); i-- > deg;) {
        const BigRational c = coeffs[i];
        if (c == 0) continue;
        const std::size_t shift = i - deg;
        for (std::size_t k = 0; k <= deg; ++k) coeffs[shift + k] -= c * phi[k];
    }
    for (std::size_t i = 0; i < deg && i < coeffs.size(); ++i) out.coeffs_[i] = coeffs[i];
    return out;
}

bool CycRational::is_zero() const {
    for (const auto& c : coeffs_) {
        if (c != 0) return false;
    }
    return true;
}

CycRational& CycRational::operator+=(const CycRational& rhs) {
    if (rhs.m_ != m_) throw DomainError("CycRational: mismatched cyclotomic orders");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

CycRational& CycRational::operator-=(const CycRational& rhs) {
    if (rhs.m_ != m_) throw DomainError("CycRational: mismatched cyclotomic orders");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

CycRational& CycRational::operator*=(const BigRational& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

CycRational CycRational::operator-() const {
    CycRational out(*this);
    for (auto& c : out.coeffs_) c = -c;
    return out;
}

CycRational operator*(const CycRational& a, const CycRational& b) {
    if (a.m_ != b.m_) throw DomainError("CycRational: mismatched cyclotomic orders");
    std::vector<BigRational> prod(a.coeffs_.size() + b.coeffs_.size(), BigRational(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return CycRational::from_coefficients(a.m_, std::move(prod));
}

bool operator==(const CycRational& a, const CycRational& b) {
    return a.m_ == b.m_ && a.coeffs_ == b.coeffs_;
}

std::string CycRational::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i > 0) os << ',';
        os << coeffs_[i].get_str();
    }
    return os.str();
}

CycRational CycRational::parse(int m, const std::string& text) {
    CycRational out(m);
    std::stringstream ss(text);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= out.coeffs_.size()) throw Error("CycRational::parse: too many coefficients");
        BigRational q;
        if (q.set_str(item, 10) != 0) throw Error("CycRational::parse: bad rational '" + item + "'");
        if (q.get_den() == 0) throw Error("CycRational::parse: zero denominator");
        q.canonicalize();
        out.coeffs_[i++] = q;
    }
    if (i != out.coeffs_.size()) throw Error("CycRational::parse: wrong coefficient count");
    return out;
}

CycRational root_of_unity_power(int m, long long k) {
    const auto& table = root_of_unity_table(m);
    const IntPoly& v = table[static_cast<std::size_t>(arith::mod(k, m))];
    CycRational out(m);
    std::vector<BigRational> coeffs(v.begin(), v.end());
    return CycRational::from_coefficients(m, std::move(coeffs));
}

}  // namespace iwlambda
