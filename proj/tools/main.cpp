// tensorrank command-line driver.
//
// Exit codes: 0 success / verified, 1 certificate invalid or an experiment
// claim failed, 2 malformed input or invalid parameters.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tensorrank/errors.hpp"
#include "tensorrank/experiments.hpp"
#include "tensorrank/json_io.hpp"

using namespace tensorrank;

namespace {

struct Common {
    std::string field = "q";
    bool rationals = false;
    std::uint64_t seed = kDefaultSeed;
    bool json = false;
    std::string out;
};

std::size_t param(const std::vector<std::string>& params, std::size_t i, const std::string& what)
{
    if (i >= params.size())
        throw InvalidArgument("missing parameter <" + what + ">");
    try {
        std::size_t pos = 0;
        unsigned long v = std::stoul(params[i], &pos);
        if (pos != params[i].size())
            throw std::invalid_argument(params[i]);
        return v;
    } catch (const std::logic_error&) {
        throw InvalidArgument("parameter <" + what + "> is not a non-negative integer: '" + params[i] + "'");
    }
}

void expect_count(const std::vector<std::string>& params, std::size_t n, const std::string& usage)
{
    if (params.size() != n)
        throw InvalidArgument("expected " + usage);
}

void emit(const Common& c, const Json& j, const std::string& text)
{
    if (!c.out.empty())
        write_json_file(c.out, j);
    if (c.json)
        std::cout << j.dump(2) << '\n';
    else if (!text.empty())
        std::cout << text;
}

Tensor build_tensor(const std::string& family, const std::vector<std::string>& p, const FieldSpec& f)
{
    if (family == "unit") {
        expect_count(p, 2, "unit <r> <k>");
        return unit_tensor(f, param(p, 0, "r"), param(p, 1, "k"));
    }
    if (family == "W" || family == "w") {
        expect_count(p, 1, "W <k>");
        return w_tensor(f, param(p, 0, "k"));
    }
    if (family == "strassen") {
        expect_count(p, 2, "strassen <q> <k>");
        return strassen_tensor(f, param(p, 0, "q"), param(p, 1, "k"));
    }
    if (family == "matmul") {
        expect_count(p, 3, "matmul <n1> <n2> <n3>");
        return matmul_tensor(f, param(p, 0, "n1"), param(p, 1, "n2"), param(p, 2, "n3"));
    }
    if (family == "chi") {
        expect_count(p, 2, "chi <d> <k>");
        return chi_tensor(f, param(p, 0, "d"), param(p, 1, "k"));
    }
    throw InvalidArgument("unknown family '" + family + "' (unit, W, strassen, matmul, chi)");
}

Certificate export_certificate(const std::string& what, const std::vector<std::string>& p, const FieldSpec& f)
{
    Certificate c;
    if (what == "w-degeneration") {
        expect_count(p, 1, "w-degeneration <k>");
        std::size_t k = param(p, 0, "k");
        c.body = w_degeneration(f, k);
        c.meta = {{"family", "W"}, {"params", {{"k", k}}}};
    } else if (what == "strassen-degeneration") {
        expect_count(p, 2, "strassen-degeneration <q> <k>");
        std::size_t q = param(p, 0, "q"), k = param(p, 1, "k");
        c.body = strassen_degeneration(f, q, k);
        c.meta = {{"family", "strassen"}, {"params", {{"q", q}, {"k", k}}}};
    } else if (what == "w-interpolation") {
        expect_count(p, 1, "w-interpolation <k>");
        std::size_t k = param(p, 0, "k");
        Degeneration g = w_degeneration(f, k);
        Restriction r = interpolate_to_restriction(g);
        c.body = r;
        c.source = kronecker_product(unit_tensor(f, 2, k), unit_tensor(f, g.claimed_e + 1, k));
        c.meta = {{"family", "W"}, {"params", {{"k", k}}}};
    } else if (what == "w-power") {
        expect_count(p, 2, "w-power <k> <n>");
        std::size_t k = param(p, 0, "k"), n = param(p, 1, "n");
        c.body = power_decomposition(w_degeneration(f, k), n);
        c.meta = {{"family", "W-power"}, {"params", {{"k", k}, {"n", n}}}};
    } else if (what == "w3-squared") {
        expect_count(p, 0, "w3-squared");
        c.body = w3_squared_decomposition(f);
        c.meta = {{"family", "W-power"}, {"params", {{"k", 3}, {"n", 2}}}};
    } else if (what == "strassen7") {
        expect_count(p, 0, "strassen7");
        c.body = strassen7_decomposition(f);
        c.meta = {{"family", "matmul"}, {"params", {{"n", {2, 2, 2}}}}};
    } else if (what == "matmul224") {
        expect_count(p, 0, "matmul224");
        c.body = matmul224_decomposition(f);
        c.meta = {{"family", "matmul"}, {"params", {{"n", {2, 2, 4}}}}};
    } else {
        throw InvalidArgument("unknown certificate '" + what +
                              "' (w-degeneration, strassen-degeneration, w-interpolation, w-power, "
                              "w3-squared, strassen7, matmul224)");
    }
    return c;
}

std::vector<LowerMethod> parse_methods(const std::vector<std::string>& names)
{
    std::vector<LowerMethod> out;
    for (const auto& n : names) {
        if (n == "flattening")
            out.push_back(LowerMethod::flattening);
        else if (n == "substitution")
            out.push_back(LowerMethod::substitution);
        else if (n == "brute-force" || n == "brute_force")
            out.push_back(LowerMethod::brute_force);
        else if (n == "pencil")
            out.push_back(LowerMethod::pencil);
        else
            throw InvalidArgument("unknown method '" + n + "'");
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact tensor rank and border-rank certificates"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--field", c.field, "Ground field: q, fp:<p> or qsqrt:<D>");
    app.add_flag("--rationals", c.rationals, "Force the rationals for experiments with a prime default");
    app.add_option("--seed", c.seed, "Seed for randomized checks");
    app.add_flag("--json", c.json, "Print JSON instead of text");
    app.add_option("--out", c.out, "Also write the JSON result to this path");
    bool field_given = false;

    auto* build = app.add_subcommand("build", "Build a tensor from a named family");
    std::string family;
    std::vector<std::string> build_params;
    build->add_option("family", family, "unit, W, strassen, matmul or chi")->required();
    build->add_option("params", build_params, "Integer parameters");

    auto* verify = app.add_subcommand("verify", "Verify a certificate against a tensor");
    std::string cert_path, tensor_path;
    verify->add_option("certificate", cert_path)->required();
    verify->add_option("tensor", tensor_path)->required();

    auto* bound = app.add_subcommand("bound", "Rank bounds for a tensor");
    std::string bound_path, dec_path;
    std::vector<std::string> method_names;
    bound->add_option("tensor", bound_path)->required();
    bound->add_option("--decomposition", dec_path, "Decomposition giving the upper bound");
    bound->add_option("--methods", method_names,
                      "flattening, substitution, brute-force, pencil (default: flattening, plus substitution "
                      "over prime fields)")
        ->delimiter(',');

    auto* pencil = app.add_subcommand("pencil", "Kronecker canonical form and rank of a pencil");
    std::string pencil_path;
    bool extrapolate = false;
    pencil->add_option("tensor", pencil_path)->required();
    pencil->add_flag("--extrapolate", extrapolate, "Apply the rank formula even when the field is too small");

    auto* experiment = app.add_subcommand("experiment", "Run a named experiment");
    std::string exp_name;
    ExperimentOptions eo;
    experiment->add_option("name", exp_name)->required();
    experiment->add_option("-k", eo.k);
    experiment->add_option("-n", eo.n);
    experiment->add_option("-q", eo.q);
    experiment->add_option("-d", eo.d);
    experiment->add_option("--count", eo.count);

    auto* exp = app.add_subcommand("export", "Write a built-in certificate");
    std::string what;
    std::vector<std::string> export_params;
    exp->add_option("certificate", what)->required();
    exp->add_option("params", export_params, "Integer parameters");

    for (auto* sub : {build, verify, bound, pencil, experiment, exp})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    field_given = app.count("--field") > 0;

    try {
        FieldSpec field = c.rationals ? FieldSpec::rationals() : FieldSpec::parse(c.field);

        if (*build) {
            Tensor t = build_tensor(family, build_params, field);
            emit(c, tensor_to_json(t), c.out.empty() ? tensor_to_json(t).dump(2) + "\n" : "");
            return 0;
        }
        if (*verify) {
            Certificate cert = certificate_from_json(read_json_file(cert_path));
            Tensor target = tensor_from_json(read_json_file(tensor_path));
            VerifyResult v = verify_certificate(cert, target);
            std::string text = cert.type() + (v.ok ? ": verified" : ": INVALID");
            if (v.d && v.e)
                text += " (d,e) = (" + std::to_string(*v.d) + "," + std::to_string(*v.e) + ")";
            if (!v.ok)
                text += "\n  " + v.message;
            emit(c, verify_result_to_json(v), text + "\n");
            return v.ok ? 0 : 1;
        }
        if (*bound) {
            Tensor t = tensor_from_json(read_json_file(bound_path));
            std::optional<Decomposition> dec;
            if (!dec_path.empty()) {
                Json j = read_json_file(dec_path);
                if (j.contains("type")) {
                    Certificate cert = certificate_from_json(j);
                    if (!std::holds_alternative<Decomposition>(cert.body))
                        throw InvalidArgument("--decomposition needs a decomposition certificate");
                    dec = std::get<Decomposition>(cert.body);
                } else {
                    dec = decomposition_from_json(j);
                }
            }
            if (method_names.empty()) {
                method_names.push_back("flattening");
                if (t.field().is_finite() && t.order() == 3)
                    method_names.push_back("substitution");
            }
            RankBoundReport r = certify_rank(t, dec, parse_methods(method_names));
            std::string text = "lower " + r.lower.get_str() + " (integer " + std::to_string(r.lower_int) + "), upper " +
                               (r.upper ? std::to_string(*r.upper) : std::string("unknown")) +
                               (r.determined ? ", rank determined\n" : "\n");
            for (const auto& m : r.methods)
                text += "  " + m + "\n";
            emit(c, rank_report_to_json(r), text);
            return 0;
        }
        if (*pencil) {
            Tensor t = tensor_from_json(read_json_file(pencil_path));
            auto [cf, bc] = kronecker_canonical_form(t, c.seed);
            PencilRank pr = pencil_rank(cf, extrapolate ? PencilPolicy::extrapolate : PencilPolicy::require_hypothesis);
            Json j = pencil_to_json(cf, bc, pr);
            std::string text = "zero block " + std::to_string(cf.zero_rows) + "x" + std::to_string(cf.zero_cols) +
                               ", eps " + Json(cf.eps).dump() + ", eta " + Json(cf.eta).dump() +
                               "\ninvariant factors " + j["invariant_factors"].dump() + "\nrank " +
                               std::to_string(pr.rank) + " = " + pr.formula + "\n";
            emit(c, j, text);
            return 0;
        }
        if (*experiment) {
            if (field_given || c.rationals)
                eo.field = field;
            eo.seed = c.seed;
            ExperimentReport r = run_experiment(exp_name, eo);
            emit(c, report_to_json(r), report_to_text(r));
            return r.ok() ? 0 : 1;
        }
        if (*exp) {
            Certificate cert = export_certificate(what, export_params, field);
            Json j = certificate_to_json(cert);
            emit(c, j, c.out.empty() ? j.dump(2) + "\n" : "");
            return 0;
        }
    } catch (const InvalidCertificate& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
