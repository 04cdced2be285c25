#include "iwlambda/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "iwlambda/arith.hpp"
#include "iwlambda/error.hpp"

namespace iwlambda {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw DomainError("config: '" + key + "' expects an integer, got '" + v + "'");
    }
}

std::vector<long long> to_list(const std::string& key, const std::string& v) {
    std::vector<long long> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_int(key, item));
    }
    if (out.empty()) throw DomainError("config: '" + key + "' is empty");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw DomainError("config: '" + key + "' expects a boolean, got '" + v + "'");
}

BernoulliCache& cache_of(const ScanConfig& cfg) { return cfg.params.cache ? *cfg.params.cache : default_bernoulli_cache(); }

// Largest Bernoulli index Method I asks for at this prime.
int method_one_nmax(long long p, const LambdaParams& params) { return static_cast<int>((p - 2) + static_cast<long long>(params.C) * (p - 1)); }

bool exponents_less(const DirichletChar& a, const DirichletChar& b) {
    if (a.modulus() != b.modulus()) return a.modulus() < b.modulus();
    return a.exponents() < b.exponents();
}

struct Outcome {
    int twist = 0;
    enum Kind { Counted, Omitted, Failed } kind = Counted;
    int lambda = 0;  // lambda^corr, kLambdaBins for overflow
    std::string message;
};

}  // namespace

std::string format_fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string format_failures(const std::vector<Failure>& failures) {
    std::ostringstream os;
    for (const auto& f : failures) os << f.label << ";" << f.p << ";" << f.twist << ";" << f.message << "\n";
    return os.str();
}

void ScanConfig::set(const std::string& key_in, const std::string& value_in) {
    const std::string key = trim(key_in), v = trim(value_in);
    if (key == "prime" || key == "primes") {
        primes = to_list(key, v);
    } else if (key == "order") {
        order = to_int(key, v);
    } else if (key == "cond-max") {
        cond_max = to_int(key, v);
    } else if (key == "twists") {
        if (v == "all") {
            twists.reset();
        } else {
            std::vector<int> t;
            for (long long x : to_list(key, v)) t.push_back(static_cast<int>(x));
            twists = t;
        }
    } else if (key == "points") {
        params.C = static_cast<int>(to_int(key, v));
    } else if (key == "series-depth") {
        params.N = static_cast<int>(to_int(key, v));
    } else if (key == "precision") {
        params.K = static_cast<int>(to_int(key, v));
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(to_int(key, v));
    } else if (key == "jobs") {
        jobs = static_cast<int>(to_int(key, v));
    } else if (key == "cache-dir") {
        cache_dir = v;
    } else if (key == "out") {
        out = v;
    } else if (key == "prime-count") {
        prime_count = static_cast<int>(to_int(key, v));
    } else if (key == "f") {
        f = static_cast<int>(to_int(key, v));
    } else if (key == "strict") {
        strict = to_bool(key, v);
    } else if (key == "f-max") {
        f_max = static_cast<int>(to_int(key, v));
    } else if (key == "n") {
        n = static_cast<int>(to_int(key, v));
    } else if (key == "q") {
        q = to_int(key, v);
    } else if (key == "samples") {
        samples = to_int(key, v);
    } else if (key == "r-max") {
        r_max = static_cast<int>(to_int(key, v));
    } else if (key == "omit-trivial-zero") {
        omit_trivial_zero = to_bool(key, v);
    } else {
        throw DomainError("config: unknown key '" + key + "'");
    }
}

void ScanConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("config: line " + std::to_string(lineno) + " has no '='");
        set(line.substr(0, eq), line.substr(eq + 1));
    }
}

void ScanConfig::validate() const {
    for (long long p : primes)
        if (p < 3 || !arith::is_prime(p)) throw DomainError("config: " + std::to_string(p) + " is not an odd prime");
    if (cond_max < 3) throw DomainError("config: cond-max must be at least 3");
    if (order < 1) throw DomainError("config: order must be positive");
    if (params.C < 2) throw DomainError("config: points must be at least 2");
    if (params.N < 3) throw DomainError("config: series-depth must be at least 3");
    if (jobs < 1) throw DomainError("config: jobs must be positive");
}

std::vector<DirichletChar> primitive_characters(long long order, long long cond_min, long long cond_max, std::optional<int> parity) {
    std::vector<DirichletChar> out;
    CharFilter filter;
    if (order > 0) filter.order = order;
    filter.parity = parity;
    filter.primitive_only = true;
    for (long long N = std::max<long long>(1, cond_min); N < cond_max; ++N) {
        auto chars = enumerate_characters(N, filter);
        out.insert(out.end(), std::make_move_iterator(chars.begin()), std::make_move_iterator(chars.end()));
    }
    std::sort(out.begin(), out.end(), exponents_less);
    return out;
}

std::pair<long long, long long> DistributionTable::pooled(long long p, int r) const {
    long long hit = 0, total = 0;
    for (const auto& row : rows) {
        if (row.p != p) continue;
        hit += row.counts[static_cast<std::size_t>(r)];
        total += row.N;
    }
    return {hit, total};
}

std::string DistributionTable::to_csv() const {
    std::ostringstream os;
    os << "p;twist;N";
    for (int r = 0; r < kLambdaBins; ++r) os << ";l" << r;
    os << ";l" << kLambdaBins << "+;omitted_trivial_zero;excluded\n";
    for (const auto& [p, pred] : predictions) {
        os << p << ";pred;-";
        for (int r = 0; r < kLambdaBins; ++r) {
            os << ";" << (r < static_cast<int>(pred.rho.size()) ? format_fixed(pred.rho[static_cast<std::size_t>(r)].convert_to<double>()) : "-");
        }
        os << ";-;-;-\n";
        for (const auto& row : rows) {
            if (row.p != p) continue;
            os << row.p << ";" << row.twist << ";" << row.N;
            for (int r = 0; r <= kLambdaBins; ++r) os << ";" << format_fixed(row.proportion(r));
            os << ";" << row.omitted_trivial_zero << ";" << row.excluded << "\n";
        }
    }
    return os.str();
}

DistributionTable scan_order(const ScanConfig& cfg) {
    cfg.validate();
    DistributionTable table;
    table.order = cfg.order;
    const auto chars = primitive_characters(cfg.order, 1, cfg.cond_max);
    BernoulliCache& bc = cache_of(cfg);

    struct Task {
        std::size_t chi;
        long long p;
    };
    std::vector<Task> tasks;
    for (long long p : cfg.primes) {
        if (cfg.order % p == 0) throw DomainError("scan_order: p divides the character order");
        table.predictions.emplace(p, predicted_lambda_distribution(p, cfg.order, kLambdaBins - 1));
        for (std::size_t k = 0; k < chars.size(); ++k)
            if (chars[k].conductor() % p != 0) tasks.push_back({k, p});
    }
    std::vector<std::vector<Outcome>> results(tasks.size());
    parallel_for(tasks.size(), cfg.jobs, [&](std::size_t t) {
        const DirichletChar& theta = chars[tasks[t].chi];
        const long long p = tasks[t].p;
        std::vector<int> twists;
        if (cfg.twists) {
            for (int i : *cfg.twists) twists.push_back(static_cast<int>(arith::mod(i, p - 1)));
        } else {
            for (int i = 0; i <= p - 2; ++i) twists.push_back(i);
        }
        bool prefetched = false;
        for (int i : twists) {
            Outcome o;
            o.twist = i;
            const TwistedChar tc(theta, i, p);
            if (!tc.is_even() || tc.is_trivial()) continue;
            if (tc.trivial_zero_flag() && cfg.omit_trivial_zero) {
                o.kind = Outcome::Omitted;
                results[t].push_back(o);
                continue;
            }
            try {
                if (!prefetched) {
                    bc.get(theta, method_one_nmax(p, cfg.params));
                    prefetched = true;
                }
                const LambdaResult r = lambda_crosscheck(tc, cfg.params);
                if (r.lower_bound && r.lambda_corr < kLambdaBins) {
                    o.kind = Outcome::Failed;
                    o.message = "only a lower bound " + r.lambda_corr_text();
                } else {
                    o.lambda = std::min(r.lambda_corr, kLambdaBins);
                }
            } catch (const Error& e) {
                o.kind = Outcome::Failed;
                o.message = e.what();
            }
            results[t].push_back(o);
        }
    });

    std::map<std::pair<long long, int>, DistributionRow> rows;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const long long p = tasks[t].p;
        for (const auto& o : results[t]) {
            DistributionRow& row = rows[{p, o.twist}];
            row.p = p;
            row.twist = o.twist;
            switch (o.kind) {
                case Outcome::Counted:
                    ++row.N;
                    ++row.counts[static_cast<std::size_t>(o.lambda)];
                    break;
                case Outcome::Omitted:
                    ++row.omitted_trivial_zero;
                    break;
                case Outcome::Failed:
                    ++row.excluded;
                    table.failures.push_back({chars[tasks[t].chi].label(), p, o.twist, o.message});
                    break;
            }
        }
    }
    for (long long p : cfg.primes)
        for (auto& [key, row] : rows)
            if (key.first == p) table.rows.push_back(row);
    return table;
}

std::string RegularSummary::to_csv() const {
    std::ostringstream os;
    os << "label;p;f;verdict;witnesses\n";
    for (const auto& c : characters)
        for (const auto& r : c.reports) os << r.label << ";" << r.p << ";" << r.f << ";" << r.verdict() << ";" << r.witness_text() << "\n";
    return os.str();
}

std::string RegularSummary::summary() const {
    std::ostringstream os;
    os << "order;f;N;proportion;stddev;min;max\n";
    os << order << ";pred;-;" << format_fixed(f == 1 ? std::exp(-0.5) : 1.0) << ";-;-;-\n";
    os << order << ";" << f << ";" << N << ";" << format_fixed(mean) << ";" << format_fixed(stddev) << ";" << format_fixed(min, 2) << ";"
       << format_fixed(max, 2) << "\n";
    return os.str();
}

RegularSummary regular_scan(long long order, long long cond_max, int prime_count, int f, const ScanConfig& cfg) {
    RegularSummary out;
    out.order = order;
    out.f = f;
    if (prime_count <= 0) return out;
    const auto chars = primitive_characters(order, 2, cond_max);
    BernoulliCache& bc = cache_of(cfg);
    std::vector<CharRegularity> results(chars.size());
    std::vector<std::vector<Failure>> fails(chars.size());
    parallel_for(chars.size(), cfg.jobs, [&](std::size_t k) {
        const DirichletChar& theta = chars[k];
        std::vector<long long> primes;
        for (long long p = 3; static_cast<int>(primes.size()) < prime_count; p += 2) {
            if (!arith::is_prime(p) || theta.conductor() % p == 0 || order % p == 0) continue;
            if (arith::multiplicative_order(p % order, order) != f) continue;
            if (order == 1 && f != 1) break;
            primes.push_back(p);
        }
        CharRegularity& cr = results[k];
        cr.label = theta.label();
        if (primes.empty()) return;
        try {
            bc.get(theta, static_cast<int>(primes.back() - 1));
        } catch (const Error&) {
        }
        long long regular = 0;
        for (long long p : primes) {
            try {
                cr.reports.push_back(is_chi_regular(theta, p, cfg.strict, &bc));
                regular += cr.reports.back().regular ? 1 : 0;
            } catch (const Error& e) {
                fails[k].push_back({theta.label(), p, -1, e.what()});
            }
        }
        if (!cr.reports.empty()) cr.proportion = static_cast<double>(regular) / static_cast<double>(cr.reports.size());
    });
    double sum = 0, sum2 = 0;
    out.min = 1;
    out.max = 0;
    for (std::size_t k = 0; k < chars.size(); ++k) {
        out.failures.insert(out.failures.end(), fails[k].begin(), fails[k].end());
        if (results[k].reports.empty()) continue;
        const double x = results[k].proportion;
        sum += x;
        sum2 += x * x;
        out.min = std::min(out.min, x);
        out.max = std::max(out.max, x);
        ++out.N;
        out.characters.push_back(std::move(results[k]));
    }
    if (out.N) {
        out.mean = sum / static_cast<double>(out.N);
        out.stddev = std::sqrt(std::max(0.0, sum2 / static_cast<double>(out.N) - out.mean * out.mean));
    } else {
        out.min = out.max = 0;
    }
    return out;
}

std::string FieldScan::to_csv() const {
    std::ostringstream os;
    os << "field;p;lambda_tot\n";
    for (const auto& r : rows) os << r.field << ";" << p << ";" << (r.lower_bound ? ">=" : "") << r.lambda_tot << "\n";
    return os.str();
}

FieldScan field_scan(long long degree, long long cond_max, long long p, const ScanConfig& cfg) {
    if (degree < 1) throw DomainError("field_scan: degree must be positive");
    if (degree % p == 0) throw DomainError("field_scan: p divides the degree");
    FieldScan out;
    out.p = p;
    out.degree = degree;
    std::vector<FieldSpec> fields;
    if (degree == 1) {
        fields.push_back(FieldSpec{});
    } else {
        for (const auto& theta : primitive_characters(degree, 2, cond_max, 1)) {
            if (theta.conductor() % p == 0) continue;
            bool canonical = true;
            for (long long k = 2; k < degree && canonical; ++k)
                if (arith::gcd(k, degree) == 1 && exponents_less(theta.pow(k), theta)) canonical = false;
            if (canonical) fields.push_back(FieldSpec::cyclic(theta));
        }
    }
    // the trivial character is shared by every field
    LambdaTot trivial;
    std::optional<std::string> trivial_error;
    try {
        trivial = lambda_tot(DirichletChar::trivial(1), p, cfg.params);
    } catch (const Error& e) {
        trivial_error = e.what();
    }
    std::vector<FieldRow> rows(fields.size());
    std::vector<std::optional<std::string>> errs(fields.size());
    parallel_for(fields.size(), cfg.jobs, [&](std::size_t k) {
        FieldRow& row = rows[k];
        row.field = fields[k].label();
        if (trivial_error) {
            errs[k] = *trivial_error;
            return;
        }
        row.lambda_tot = trivial.total;
        row.lower_bound = trivial.lower_bound;
        try {
            for (const auto& c : fields[k].characters()) {
                if (c.is_trivial()) continue;
                const LambdaTot t = lambda_tot(c, p, cfg.params);
                row.lambda_tot += t.total;
                row.lower_bound = row.lower_bound || t.lower_bound;
            }
        } catch (const Error& e) {
            errs[k] = e.what();
        }
    });
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (errs[k]) {
            out.failures.push_back({rows[k].field, p, -1, *errs[k]});
            continue;
        }
        if (rows[k].lower_bound && rows[k].lambda_tot < kLambdaBins) {
            out.failures.push_back({rows[k].field, p, -1, "only a lower bound"});
            continue;
        }
        ++out.histogram[static_cast<std::size_t>(std::min<long long>(rows[k].lambda_tot, kLambdaBins))];
        out.rows.push_back(rows[k]);
    }
    return out;
}

std::string AppendixTable::to_csv() const {
    std::ostringstream os;
    os << "lambda;modulus;char_label;twist_i;order;f;trivial_zero\n";
    for (const auto& r : rows)
        os << r.lambda << ";" << r.modulus << ";" << r.label << ";" << r.twist << ";" << r.order << ";" << r.f << ";" << (r.trivial_zero ? "yes" : "no") << "\n";
    return os.str();
}

AppendixTable appendix_tables(long long p, long long cond_max, int f_max, const ScanConfig& cfg) {
    if (p < 3 || !arith::is_prime(p)) throw DomainError("appendix_tables: p must be an odd prime");
    AppendixTable out;
    out.p = p;
    std::vector<DirichletChar> chars;
    for (const auto& theta : primitive_characters(0, 1, cond_max)) {
        if (theta.conductor() % p == 0 || theta.order() % p == 0) continue;
        if (arith::multiplicative_order(p % theta.order(), theta.order()) >= f_max) continue;
        chars.push_back(theta);
    }
    BernoulliCache& bc = cache_of(cfg);
    std::vector<std::vector<AppendixRow>> rows(chars.size());
    std::vector<std::vector<Failure>> fails(chars.size());
    parallel_for(chars.size(), cfg.jobs, [&](std::size_t k) {
        const DirichletChar& theta = chars[k];
        bool prefetched = false;
        for (int i = 0; i <= p - 2; ++i) {
            const TwistedChar tc(theta, i, p);
            if (!tc.is_even() || tc.is_trivial()) continue;
            try {
                if (!prefetched) {
                    bc.get(theta, method_one_nmax(p, cfg.params));
                    prefetched = true;
                }
                const LambdaResult r = lambda_crosscheck(tc, cfg.params);
                const bool listed = r.trivial_zero ? r.lambda > 1 : r.lambda > 0;
                if (!listed) continue;
                AppendixRow row;
                row.lambda = r.lambda_text();
                row.modulus = theta.modulus();
                row.label = theta.label();
                row.exponents = theta.exponents();
                row.twist = i;
                const long long ow = (p - 1) / arith::gcd(i, p - 1);
                row.order = arith::lcm(theta.order(), ow);
                row.f = r.f;
                row.trivial_zero = r.trivial_zero;
                rows[k].push_back(row);
            } catch (const Error& e) {
                fails[k].push_back({theta.label(), p, i, e.what()});
            }
        }
    });
    for (std::size_t k = 0; k < chars.size(); ++k) {
        out.rows.insert(out.rows.end(), rows[k].begin(), rows[k].end());
        out.failures.insert(out.failures.end(), fails[k].begin(), fails[k].end());
    }
    std::sort(out.rows.begin(), out.rows.end(), [](const AppendixRow& a, const AppendixRow& b) {
        return std::tie(a.modulus, a.exponents, a.twist) < std::tie(b.modulus, b.exponents, b.twist);
    });
    return out;
}

std::string rmt_csv(const DegreeHistogram& h, int n, long long q) {
    const auto exact = exact_distribution(n, q);
    std::ostringstream os;
    os << "r;count;empirical;exact;rho\n";
    for (int r = 0; r <= n; ++r) {
        const long long c = h.counts[static_cast<std::size_t>(r)];
        const double emp = h.samples ? static_cast<double>(c) / static_cast<double>(h.samples) : 0.0;
        os << r << ";" << c << ";" << format_fixed(emp, 6) << ";" << format_fixed(exact[static_cast<std::size_t>(r)].get_d(), 6) << ";"
           << format_fixed(rho(q, r).convert_to<double>(), 6) << "\n";
    }
    return os.str();
}

std::string predict_csv(const std::vector<long long>& primes, long long order, int r_max) {
    std::ostringstream os;
    os << "kind;p;m;f;r;value\n";
    for (long long p : primes) {
        const auto pred = predicted_lambda_distribution(p, order, r_max);
        for (int r = 0; r <= r_max; ++r)
            os << "lambda;" << p << ";" << order << ";" << pred.f << ";" << r << ";" << format_fixed(pred.rho[static_cast<std::size_t>(r)].convert_to<double>()) << "\n";
    }
    os << "chi_regular;-;" << order << ";-;-;" << format_fixed(predicted_regular_proportion(order).convert_to<double>()) << "\n";
    for (long long p : primes) {
        const long long f = arith::multiplicative_order(p % order, order);
        os << "field_regular;" << p << ";" << order << ";" << f << ";-;" << format_fixed(predicted_field_regular({order}, p).convert_to<double>()) << "\n";
        os << "field_regular_if_Q_regular;" << p << ";" << order << ";" << f << ";-;"
           << format_fixed(predicted_field_regular({order}, p, true).convert_to<double>()) << "\n";
    }
    return os.str();
}

}  // namespace iwlambda
