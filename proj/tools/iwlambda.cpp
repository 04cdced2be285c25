#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "iwlambda/error.hpp"
#include "iwlambda/experiments.hpp"

using namespace iwlambda;

namespace {

struct Output {
    std::optional<std::string> path;
    std::ostringstream body;
    std::vector<Failure> failures;
    bool header_written = false;

    // appends a CSV block, keeping only the first header line
    void csv(const std::string& text) {
        if (!header_written) {
            body << text;
            header_written = true;
            return;
        }
        const auto nl = text.find('\n');
        if (nl != std::string::npos) body << text.substr(nl + 1);
    }

    int finish() const {
        if (path) {
            std::ofstream f(*path);
            if (!f) throw Error("cannot write " + *path);
            f << body.str();
        } else {
            std::cout << body.str();
        }
        if (failures.empty()) return 0;
        const std::string text = format_failures(failures);
        if (path) {
            std::ofstream(*path + ".failures.csv") << text;
            std::cerr << failures.size() << " excluded row(s), see " << *path << ".failures.csv\n";
        } else {
            std::cerr << text;
        }
        return 2;
    }
};

long long first_prime(const ScanConfig& cfg) {
    if (cfg.primes.empty()) throw DomainError("no prime given");
    return cfg.primes.front();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iwasawa lambda-invariants of twisted p-adic L-functions"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key = value file, overridden by flags")->check(CLI::ExistingFile);

    // flag name -> raw value, fed through ScanConfig::set after the config file
    std::vector<std::pair<std::string, std::string>> flags = {
        {"prime", ""},        {"order", ""},   {"cond-max", ""}, {"twists", ""},   {"points", ""},
        {"series-depth", ""}, {"precision", ""}, {"seed", ""},   {"jobs", ""},     {"cache-dir", ""},
        {"out", ""},          {"prime-count", ""}, {"f", ""},    {"f-max", ""},    {"n", ""},
        {"q", ""},            {"samples", ""}, {"r-max", ""},    {"omit-trivial-zero", ""}};
    const std::map<std::string, std::string> help = {
        {"prime", "odd prime(s), comma separated"},
        {"order", "character order (0 = any)"},
        {"cond-max", "conductors strictly below this bound"},
        {"twists", "\"all\" or a list of twist exponents i"},
        {"points", "Method I interpolation points C"},
        {"series-depth", "Method II level N"},
        {"precision", "Method I working precision K"},
        {"seed", "RNG seed"},
        {"jobs", "worker threads"},
        {"cache-dir", "Bernoulli cache directory"},
        {"out", "output file (stdout when absent)"},
        {"prime-count", "regular-scan: primes per character"},
        {"f", "regular-scan: residue degree"},
        {"f-max", "appendix: residue degree bound"},
        {"n", "rmt-sim: matrix size"},
        {"q", "rmt-sim: field size"},
        {"samples", "rmt-sim: sample count"},
        {"r-max", "predict: largest r"},
        {"omit-trivial-zero", "scan-order: drop trivial-zero rows (yes/no)"}};
    for (auto& [name, value] : flags) app.add_option("--" + name, value, help.at(name));
    bool no_cache = false;
    app.add_flag("--no-cache", no_cache, "keep Bernoulli numbers in memory only");

    auto* predict = app.add_subcommand("predict", "conjectured distributions and regular proportions as CSV");
    auto* lambda = app.add_subcommand("lambda", "single lambda-invariant");
    std::string label;
    int twist = 0;
    std::string method = "both";
    int factor_index = 0;
    lambda->add_option("label", label, "character label, e.g. 4.1 or 7.2")->required();
    lambda->add_option("-i,--twist", twist, "Teichmueller twist exponent");
    lambda->add_option("--method", method, "I, II or both")->check(CLI::IsMember({"I", "II", "both"}));
    lambda->add_option("--factor-index", factor_index, "embedding of the character values");
    auto* scan = app.add_subcommand("scan-order", "lambda distribution over characters of one order");
    auto* regular = app.add_subcommand("regular-scan", "chi-regularity of the first admissible primes");
    bool strict = false;
    regular->add_flag("--strict", strict, "also test Galois conjugates");
    auto* field = app.add_subcommand("field-scan", "lambda_tot over cyclic totally real fields");
    auto* rmt = app.add_subcommand("rmt-sim", "random matrix simulation");
    auto* appendix = app.add_subcommand("appendix", "characters with positive lambda");
    auto* verify = app.add_subcommand("verify", "compare both methods over a character range");
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        ScanConfig cfg;
        if (!config_path.empty()) cfg.load(config_path);
        for (const auto& [name, value] : flags)
            if (app.get_option("--" + name)->count()) cfg.set(name, value);
        if (strict) cfg.strict = true;
        cfg.validate();
        if (no_cache)
            set_default_cache_dir(std::nullopt);
        else if (cfg.cache_dir)
            set_default_cache_dir(std::filesystem::path(*cfg.cache_dir));

        Output out;
        out.path = cfg.out;

        if (predict->parsed()) {
            out.csv(predict_csv(cfg.primes, cfg.order, cfg.r_max));
        } else if (lambda->parsed()) {
            LambdaParams params = cfg.params;
            params.factor_index = factor_index;
            const TwistedChar tc(DirichletChar::parse(label), twist, first_prime(cfg));
            const LambdaResult r = method == "I"    ? lambda_method_one(tc, params)
                                   : method == "II" ? lambda_method_two(tc, params)
                                                    : lambda_crosscheck(tc, params);
            out.body << "label;p;twist;lambda;lambda_corr;trivial_zero;order;f;method;parameter;coefficients_mod_p\n"
                     << tc.theta.label() << ";" << tc.p << ";" << twist << ";" << r.lambda_text() << ";" << r.lambda_corr_text() << ";"
                     << (r.trivial_zero ? "yes" : "no") << ";" << r.order << ";" << r.f << ";" << r.method << ";" << r.parameter << ";"
                     << r.series.residues_mod_p() << "\n";
        } else if (scan->parsed()) {
            const DistributionTable t = scan_order(cfg);
            out.csv(t.to_csv());
            out.failures = t.failures;
        } else if (regular->parsed()) {
            const RegularSummary s = regular_scan(cfg.order, cfg.cond_max, cfg.prime_count, cfg.f, cfg);
            out.csv(s.to_csv());
            std::cerr << s.summary();
            out.failures = s.failures;
        } else if (field->parsed()) {
            for (long long p : cfg.primes) {
                const FieldScan s = field_scan(cfg.order, cfg.cond_max, p, cfg);
                out.csv(s.to_csv());
                std::cerr << "p=" << p << " degree=" << cfg.order << " N=" << s.rows.size() << " histogram";
                for (long long c : s.histogram) std::cerr << " " << c;
                std::cerr << "\n";
                out.failures.insert(out.failures.end(), s.failures.begin(), s.failures.end());
            }
        } else if (rmt->parsed()) {
            const DegreeHistogram h = montecarlo(cfg.n, cfg.q, cfg.samples, cfg.seed, cfg.jobs);
            out.csv(rmt_csv(h, cfg.n, cfg.q));
        } else if (appendix->parsed()) {
            for (long long p : cfg.primes) {
                const AppendixTable t = appendix_tables(p, cfg.cond_max, cfg.f_max, cfg);
                out.csv(t.to_csv());
                out.failures.insert(out.failures.end(), t.failures.begin(), t.failures.end());
            }
        } else if (verify->parsed()) {
            out.body << "label;p;twist;method_I;method_II;status\n";
            const auto chars = primitive_characters(cfg.order, 1, cfg.cond_max);
            for (long long p : cfg.primes) {
                std::vector<TwistedChar> tasks;
                for (const auto& theta : chars) {
                    if (theta.conductor() % p == 0 || theta.order() % p == 0) continue;
                    for (long long i = 0; i + 1 < p; ++i) {
                        if (cfg.twists && std::find(cfg.twists->begin(), cfg.twists->end(), i) == cfg.twists->end()) continue;
                        TwistedChar tc(theta, static_cast<int>(i), p);
                        if (tc.is_even() && !tc.is_trivial()) tasks.push_back(std::move(tc));
                    }
                }
                std::vector<std::string> lines(tasks.size());
                std::vector<std::optional<Failure>> failed(tasks.size());
                parallel_for(tasks.size(), cfg.jobs, [&](std::size_t k) {
                    const TwistedChar& tc = tasks[k];
                    std::ostringstream line;
                    line << tc.theta.label() << ";" << p << ";" << tc.i << ";";
                    try {
                        const LambdaResult one = lambda_method_one(tc, cfg.params);
                        const LambdaResult two = lambda_method_two(tc, cfg.params);
                        const bool agree = one.lower_bound || two.lower_bound
                                               ? (one.lower_bound || one.lambda >= two.lambda) && (two.lower_bound || two.lambda >= one.lambda)
                                               : one.lambda == two.lambda;
                        line << one.lambda_text() << ";" << two.lambda_text() << ";" << (agree ? "ok" : "DISAGREE");
                        if (!agree) failed[k] = Failure{tc.theta.label(), p, tc.i, "methods disagree"};
                    } catch (const Error& e) {
                        line << "-;-;error";
                        failed[k] = Failure{tc.theta.label(), p, tc.i, e.what()};
                    }
                    lines[k] = line.str();
                });
                for (std::size_t k = 0; k < tasks.size(); ++k) {
                    out.body << lines[k] << "\n";
                    if (failed[k]) out.failures.push_back(*failed[k]);
                }
            }
        }
        return out.finish();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
