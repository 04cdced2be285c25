#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iwlambda/bernoulli.hpp"
#include "iwlambda/error.hpp"
#include "iwlambda/experiments.hpp"

namespace py = pybind11;
using namespace iwlambda;

namespace {

// GMP rationals cross the boundary as fractions.Fraction
py::object to_fraction(const BigRational& q) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(py::int_(py::str(q.get_num().get_str())), py::int_(py::str(q.get_den().get_str())));
}

double to_double(const Real& x) { return x.convert_to<double>(); }

}  // namespace

PYBIND11_MODULE(_iwlambda, m) {
    m.doc() = "Iwasawa lambda-invariants of twisted p-adic L-functions";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<PrecisionExhausted>(m, "PrecisionExhausted", base.ptr());
    py::register_exception<NonIntegrality>(m, "NonIntegrality", base.ptr());
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
    py::register_exception<MethodDisagreement>(m, "MethodDisagreement", base.ptr());

    py::class_<DirichletChar>(m, "DirichletChar")
        .def(py::init(&DirichletChar::parse), py::arg("label"))
        .def_static("trivial", &DirichletChar::trivial, py::arg("modulus") = 1)
        .def_property_readonly("label", &DirichletChar::label)
        .def_property_readonly("modulus", &DirichletChar::modulus)
        .def_property_readonly("conductor", &DirichletChar::conductor)
        .def_property_readonly("order", &DirichletChar::order)
        .def_property_readonly("exponents", &DirichletChar::exponents)
        .def_property_readonly("is_even", &DirichletChar::is_even)
        .def_property_readonly("is_primitive", &DirichletChar::is_primitive)
        .def("primitive", &DirichletChar::primitive)
        .def("pow", &DirichletChar::pow)
        .def("__call__", [](const DirichletChar& c, long long a) { return c.evaluate(a).to_string(); })
        .def("__eq__", [](const DirichletChar& a, const DirichletChar& b) { return a == b; })
        .def("__repr__", [](const DirichletChar& c) { return "DirichletChar('" + c.label() + "')"; });

    py::class_<TwistedChar>(m, "TwistedChar")
        .def(py::init<DirichletChar, int, long long>(), py::arg("theta"), py::arg("i"), py::arg("p"))
        .def_readonly("theta", &TwistedChar::theta)
        .def_readonly("i", &TwistedChar::i)
        .def_readonly("p", &TwistedChar::p)
        .def_property_readonly("is_even", &TwistedChar::is_even)
        .def_property_readonly("trivial_zero", &TwistedChar::trivial_zero_flag)
        .def_property_readonly("label", &TwistedChar::label);

    py::class_<LambdaParams>(m, "LambdaParams")
        .def(py::init([](int C, int K, int N, int J, long long c, int factor_index) {
                 LambdaParams p;
                 p.C = C;
                 p.K = K;
                 p.N = N;
                 p.J = J;
                 p.c = c;
                 p.factor_index = factor_index;
                 return p;
             }),
             py::arg("C") = 15, py::arg("K") = 0, py::arg("N") = 4, py::arg("J") = 0, py::arg("c") = 2, py::arg("factor_index") = 0)
        .def_readwrite("C", &LambdaParams::C)
        .def_readwrite("K", &LambdaParams::K)
        .def_readwrite("N", &LambdaParams::N)
        .def_readwrite("J", &LambdaParams::J)
        .def_readwrite("c", &LambdaParams::c)
        .def_readwrite("factor_index", &LambdaParams::factor_index);

    py::class_<LambdaResult>(m, "LambdaResult")
        .def_readonly("value", &LambdaResult::lambda)
        .def_readonly("lower_bound", &LambdaResult::lower_bound)
        .def_readonly("corrected", &LambdaResult::lambda_corr)
        .def_readonly("trivial_zero", &LambdaResult::trivial_zero)
        .def_readonly("order", &LambdaResult::order)
        .def_readonly("f", &LambdaResult::f)
        .def_readonly("method", &LambdaResult::method)
        .def_readonly("parameter", &LambdaResult::parameter)
        .def_property_readonly("coefficients_mod_p", [](const LambdaResult& r) { return r.series.residues_mod_p(); })
        .def("__str__", &LambdaResult::lambda_text)
        .def("__repr__", [](const LambdaResult& r) { return "LambdaResult(" + r.lambda_text() + ", method=" + r.method + ")"; });

    m.def("lambda_method_one", &lambda_method_one, py::arg("chi"), py::arg("params") = LambdaParams{},
          py::call_guard<py::gil_scoped_release>());
    m.def("lambda_method_two", &lambda_method_two, py::arg("chi"), py::arg("params") = LambdaParams{},
          py::call_guard<py::gil_scoped_release>());
    m.def("lambda_crosscheck", &lambda_crosscheck, py::arg("chi"), py::arg("params") = LambdaParams{},
          py::call_guard<py::gil_scoped_release>());

    m.def("bernoulli_number", [](int n) { return to_fraction(bernoulli_number(n)); }, py::arg("n"));
    m.def("generalized_bernoulli", [](int n, const DirichletChar& chi) { return generalized_bernoulli(n, chi).to_string(); },
          py::arg("n"), py::arg("chi"), "B_{n,chi} as a polynomial in zeta_m");
    m.def("set_cache_dir", [](std::optional<std::string> dir) {
        set_default_cache_dir(dir ? std::optional<std::filesystem::path>(*dir) : std::nullopt);
    }, py::arg("path"));

    m.def("predicted_lambda_distribution", [](long long p, long long order, int r_max) {
        const LambdaPrediction pred = predicted_lambda_distribution(p, order, r_max);
        std::vector<double> out;
        for (const auto& x : pred.rho) out.push_back(to_double(x));
        return py::make_tuple(pred.f, out);
    }, py::arg("p"), py::arg("order"), py::arg("r_max") = 7, "(f, [rho_0, ..., rho_rmax])");
    m.def("predicted_regular_proportion", [](long long order) { return to_double(predicted_regular_proportion(order)); });
    m.def("predicted_field_regular", [](const std::vector<long long>& orders, long long p, bool assume_p_regular) {
        return to_double(predicted_field_regular(orders, p, assume_p_regular));
    }, py::arg("orders"), py::arg("p"), py::arg("assume_p_regular") = false);
    m.def("rho", [](long long q, int r) { return to_double(rho(q, r)); });

    m.def("exact_distribution", [](int n, long long q) {
        py::list out;
        for (const auto& x : exact_distribution(n, q)) out.append(to_fraction(x));
        return out;
    }, py::arg("n"), py::arg("q"));
    m.def("montecarlo", [](int n, long long q, long long samples, std::uint64_t seed, int jobs) {
        return montecarlo(n, q, samples, seed, jobs).counts;
    }, py::arg("n"), py::arg("q"), py::arg("samples"), py::arg("seed") = 0, py::arg("jobs") = 1,
          py::call_guard<py::gil_scoped_release>());

    m.def("is_chi_regular", [](const DirichletChar& theta, long long p, bool strict) {
        const RegularityReport r = is_chi_regular(theta, p, strict);
        return py::make_tuple(r.regular, r.witnesses);
    }, py::arg("theta"), py::arg("p"), py::arg("strict") = false, "(regular, [(n, valuation), ...])");

    m.def("primitive_characters", [](long long order, long long cond_max) { return primitive_characters(order, 1, cond_max); },
          py::arg("order"), py::arg("cond_max"));
    m.def("scan_order", [](std::vector<long long> primes, long long order, long long cond_max, int jobs) {
        ScanConfig cfg;
        cfg.primes = std::move(primes);
        cfg.order = order;
        cfg.cond_max = cond_max;
        cfg.jobs = jobs;
        cfg.validate();
        py::gil_scoped_release release;
        return scan_order(cfg).to_csv();
    }, py::arg("primes"), py::arg("order"), py::arg("cond_max"), py::arg("jobs") = 1, "distribution table as CSV text");
    m.def("predict_csv", &predict_csv, py::arg("primes"), py::arg("order"), py::arg("r_max") = 7);
}
