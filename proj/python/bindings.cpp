#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include "tensorrank/errors.hpp"
#include "tensorrank/experiments.hpp"
#include "tensorrank/json_io.hpp"

namespace py = pybind11;
using namespace tensorrank;

namespace {

// JSON crosses the boundary as text; the Python layer decodes it.
std::string dump(const Json& j) { return j.dump(); }

Tensor tensor_from_text(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ParseError(e.what());
    }
    return tensor_from_json(j);
}

Certificate certificate_from_text(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ParseError(e.what());
    }
    return certificate_from_json(j);
}

std::vector<LowerMethod> methods_from_names(const std::vector<std::string>& names)
{
    std::vector<LowerMethod> out;
    for (const auto& n : names) {
        if (n == "flattening")
            out.push_back(LowerMethod::flattening);
        else if (n == "substitution")
            out.push_back(LowerMethod::substitution);
        else if (n == "brute_force")
            out.push_back(LowerMethod::brute_force);
        else if (n == "pencil")
            out.push_back(LowerMethod::pencil);
        else
            throw InvalidArgument("unknown method '" + n + "'");
    }
    return out;
}

void export_errors(py::module_& m)
{
    static py::exception<Error> base(m, "TensorRankError");
    static py::exception<ParseError> parse(m, "ParseError", base.ptr());
    static py::exception<InvalidField> field(m, "InvalidField", base.ptr());
    static py::exception<FieldTooSmall> small(m, "FieldTooSmall", base.ptr());
    static py::exception<InvalidCertificate> cert(m, "InvalidCertificate", base.ptr());
    static py::exception<BudgetExceeded> budget(m, "BudgetExceeded", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const ParseError& e) {
            py::set_error(parse, e.what());
        } catch (const InvalidField& e) {
            py::set_error(field, e.what());
        } catch (const FieldTooSmall& e) {
            py::set_error(small, e.what());
        } catch (const InvalidCertificate& e) {
            py::set_error(cert, e.what());
        } catch (const BudgetExceeded& e) {
            py::set_error(budget, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });
}

void export_tensor(py::module_& m)
{
    py::class_<FieldSpec>(m, "Field")
        .def(py::init(&FieldSpec::parse), py::arg("spec") = "q")
        .def_property_readonly("is_finite", &FieldSpec::is_finite)
        .def_property_readonly("cardinality", &FieldSpec::cardinality)
        .def("__str__", &FieldSpec::to_string)
        .def("__repr__", [](const FieldSpec& f) { return "Field('" + f.to_string() + "')"; })
        .def(py::self == py::self);

    py::class_<Tensor>(m, "Tensor")
        .def_static("from_json", &tensor_from_text, py::arg("text"))
        .def("to_json", [](const Tensor& t) { return dump(tensor_to_json(t)); })
        .def_property_readonly("field", &Tensor::field)
        .def_property_readonly("dims", [](const Tensor& t) { return t.shape().dims(); })
        .def_property_readonly("order", &Tensor::order)
        .def("nonzero_count", &Tensor::nonzero_count)
        .def("__eq__", [](const Tensor& a, const Tensor& b) { return a == b; })
        .def("__repr__", [](const Tensor& t) {
            return "<Tensor " + t.shape().to_string() + " over " + t.field().to_string() + ">";
        });

    m.def("unit_tensor", &unit_tensor, py::arg("field"), py::arg("r"), py::arg("k"));
    m.def("w_tensor", &w_tensor, py::arg("field"), py::arg("k"));
    m.def("strassen_tensor", &strassen_tensor, py::arg("field"), py::arg("q"), py::arg("k") = 3);
    m.def("matmul_tensor", &matmul_tensor, py::arg("field"), py::arg("n1"), py::arg("n2"), py::arg("n3"));
    m.def("chi_tensor", &chi_tensor, py::arg("field"), py::arg("d"), py::arg("k"));
    m.def("tensor_product", &tensor_product);
    m.def("kronecker_product", &kronecker_product);
}

void export_certificates(py::module_& m)
{
    auto cert_json = [](auto body) {
        Certificate c;
        c.body = std::move(body);
        return dump(certificate_to_json(c));
    };
    m.def("w_degeneration", [=](const FieldSpec& f, std::size_t k) { return cert_json(w_degeneration(f, k)); },
          py::arg("field"), py::arg("k"));
    m.def("strassen_degeneration",
          [=](const FieldSpec& f, std::size_t q, std::size_t k) { return cert_json(strassen_degeneration(f, q, k)); },
          py::arg("field"), py::arg("q"), py::arg("k") = 3);
    m.def("w3_squared_decomposition", [=](const FieldSpec& f) { return cert_json(w3_squared_decomposition(f)); });
    m.def("strassen7_decomposition", [=](const FieldSpec& f) { return cert_json(strassen7_decomposition(f)); });
    m.def("matmul224_decomposition", [=](const FieldSpec& f) { return cert_json(matmul224_decomposition(f)); });
    m.def(
        "power_decomposition",
        [=](const std::string& degeneration, std::size_t n) {
            Certificate c = certificate_from_text(degeneration);
            if (!std::holds_alternative<Degeneration>(c.body))
                throw ParseError("power_decomposition needs a degeneration certificate");
            return cert_json(power_decomposition(std::get<Degeneration>(c.body), n));
        },
        py::arg("degeneration"), py::arg("n"));
    m.def(
        "verify",
        [](const std::string& certificate, const Tensor& target) {
            return dump(verify_result_to_json(verify_certificate(certificate_from_text(certificate), target)));
        },
        py::arg("certificate"), py::arg("target"));
}

void export_bounds(py::module_& m)
{
    m.def("flattening_lower_bound", &flattening_lower_bound, py::arg("t"));
    m.def(
        "substitution_lower_bound",
        [](const Tensor& t, std::uint64_t budget) {
            SubstitutionResult r = substitution_lower_bound(t, budget);
            return py::make_tuple(r.bound, r.exhaustive);
        },
        py::arg("t"), py::arg("node_budget") = 2'000'000);
    m.def(
        "brute_force_rank",
        [](const Tensor& t, std::size_t rmax) -> std::optional<std::size_t> { return brute_force_rank(t, rmax).rank; },
        py::arg("t"), py::arg("rmax"));
    m.def(
        "certify_rank",
        [](const Tensor& t, const std::vector<std::string>& methods, const std::optional<std::string>& decomposition) {
            std::optional<Decomposition> dec;
            if (decomposition) {
                Certificate c = certificate_from_text(*decomposition);
                if (!std::holds_alternative<Decomposition>(c.body))
                    throw ParseError("certify_rank needs a decomposition certificate");
                dec = std::get<Decomposition>(c.body);
            }
            return dump(rank_report_to_json(certify_rank(t, dec, methods_from_names(methods))));
        },
        py::arg("t"), py::arg("methods") = std::vector<std::string>{"flattening"},
        py::arg("decomposition") = py::none());
    m.def(
        "pencil",
        [](const Tensor& t, bool extrapolate, std::uint64_t seed) {
            auto [cf, bc] = kronecker_canonical_form(t, seed);
            PencilRank pr =
                pencil_rank(cf, extrapolate ? PencilPolicy::extrapolate : PencilPolicy::require_hypothesis);
            return dump(pencil_to_json(cf, bc, pr));
        },
        py::arg("t"), py::arg("extrapolate") = false, py::arg("seed") = 0x5eed);
}

void export_experiments(py::module_& m)
{
    m.def("experiment_names", &experiment_names);
    m.def(
        "run_experiment",
        [](const std::string& name, const std::optional<FieldSpec>& field, std::uint64_t seed, std::size_t k,
           std::size_t n, std::size_t q, std::size_t d, std::size_t count) {
            ExperimentOptions o;
            o.field = field;
            o.seed = seed;
            o.k = k;
            o.n = n;
            o.q = q;
            o.d = d;
            o.count = count;
            return dump(report_to_json(run_experiment(name, o)));
        },
        py::arg("name"), py::arg("field") = py::none(), py::arg("seed") = kDefaultSeed, py::arg("k") = 3,
        py::arg("n") = 2, py::arg("q") = 7, py::arg("d") = 1, py::arg("count") = 100);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Exact tensor rank and border-rank certificates";
    export_errors(m);
    export_tensor(m);
    export_certificates(m);
    export_bounds(m);
    export_experiments(m);
}
