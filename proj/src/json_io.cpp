#include "tensorrank/json_io.hpp"

#include <fstream>
#include <sstream>

#include "tensorrank/errors.hpp"

namespace tensorrank {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw ParseError(what); }

const Json& member(const Json& j, const char* key)
{
    if (!j.is_object())
        malformed(std::string("expected an object with key '") + key + "'");
    auto it = j.find(key);
    if (it == j.end())
        malformed(std::string("missing key '") + key + "'");
    return *it;
}

std::size_t as_size(const Json& j, const char* what)
{
    if (!j.is_number_integer() || j.get<long long>() < 0)
        malformed(std::string(what) + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

const std::string& as_string(const Json& j, const char* what)
{
    if (!j.is_string())
        malformed(std::string(what) + " must be a string");
    return j.get_ref<const std::string&>();
}

const Json& as_array(const Json& j, const char* what)
{
    if (!j.is_array())
        malformed(std::string(what) + " must be an array");
    return j;
}

Shape shape_from_json(const Json& j, const char* what)
{
    std::vector<std::size_t> dims;
    for (const auto& d : as_array(j, what))
        dims.push_back(as_size(d, what));
    try {
        return Shape(dims);
    } catch (const ShapeError& e) {
        malformed(std::string(what) + ": " + e.what());
    }
}

Json shape_to_json(const Shape& s) { return Json(s.dims()); }

template <class F>
auto reraise_as_parse(const std::string& text, F&& parse)
{
    try {
        return parse(text);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        malformed("bad value '" + text + "': " + e.what());
    }
}

Scalar scalar_from_text(const FieldSpec& field, const std::string& text)
{
    return reraise_as_parse(text, [&](const std::string& s) { return Scalar::parse(field, s); });
}

Poly poly_from_text(const FieldSpec& field, const std::string& text)
{
    return reraise_as_parse(text, [&](const std::string& s) { return Poly::parse(field, s); });
}

Json vector_to_json(const Vector& v)
{
    Json out = Json::array();
    for (const auto& x : v)
        out.push_back(x.to_string());
    return out;
}

Vector vector_from_json(const FieldSpec& field, const Json& j, std::size_t expected)
{
    Vector v;
    for (const auto& x : as_array(j, "vector"))
        v.push_back(scalar_from_text(field, as_string(x, "vector entry")));
    if (v.size() != expected)
        malformed("vector has " + std::to_string(v.size()) + " entries, expected " + std::to_string(expected));
    return v;
}

template <class Entry, class Parse>
std::vector<std::vector<Entry>> rows_from_json(const Json& j, Parse parse)
{
    std::vector<std::vector<Entry>> rows;
    for (const auto& row : as_array(j, "matrix")) {
        std::vector<Entry> r;
        for (const auto& x : as_array(row, "matrix row"))
            r.push_back(parse(as_string(x, "matrix entry")));
        if (!rows.empty() && r.size() != rows.front().size())
            malformed("matrix rows differ in length");
        rows.push_back(std::move(r));
    }
    if (rows.empty() || rows.front().empty())
        malformed("matrix must be nonempty");
    return rows;
}

Json poly_matrix_to_json(const PolyMatrix& m)
{
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j).is_zero() ? std::string("0") : m(i, j).to_string());
        out.push_back(row);
    }
    return out;
}

} // namespace

Json field_to_json(const FieldSpec& field)
{
    switch (field.kind()) {
    case FieldKind::rationals:
        return {{"kind", "rationals"}};
    case FieldKind::prime:
        return {{"kind", "prime"}, {"p", field.modulus()}};
    case FieldKind::quadratic:
        return {{"kind", "quadratic"}, {"D", field.radicand()}};
    }
    return {};
}

FieldSpec field_from_json(const Json& j)
{
    if (j.is_string()) {
        try {
            return FieldSpec::parse(j.get<std::string>());
        } catch (const InvalidField& e) {
            malformed(e.what());
        }
    }
    const std::string& kind = as_string(member(j, "kind"), "field kind");
    try {
        if (kind == "rationals")
            return FieldSpec::rationals();
        if (kind == "prime") {
            const Json& p = member(j, "p");
            if (!p.is_number_integer())
                malformed("field p must be an integer");
            return FieldSpec::prime(p.get<long long>());
        }
        if (kind == "quadratic") {
            const Json& d = member(j, "D");
            if (!d.is_number_integer())
                malformed("field D must be an integer");
            return FieldSpec::quadratic(d.get<long long>());
        }
    } catch (const InvalidField& e) {
        malformed(e.what());
    }
    malformed("unknown field kind '" + kind + "'");
}

Json tensor_to_json(const Tensor& t)
{
    Json entries = Json::array();
    for (const auto& [idx, v] : t.nonzeros()) {
        std::string key;
        for (std::size_t i = 0; i < idx.size(); ++i)
            key += (i ? "," : "") + std::to_string(idx[i] + 1);
        entries.push_back({key, v.to_string()});
    }
    return {{"field", field_to_json(t.field())}, {"dims", shape_to_json(t.shape())}, {"entries", entries}};
}

Tensor tensor_from_json(const Json& j)
{
    FieldSpec field = field_from_json(member(j, "field"));
    Shape shape = shape_from_json(member(j, "dims"), "dims");
    Tensor t(field, shape);
    for (const auto& e : as_array(member(j, "entries"), "entries")) {
        if (!e.is_array() || e.size() != 2)
            malformed("tensor entry must be a pair [index, value]");
        const std::string& key = as_string(e[0], "entry index");
        std::vector<std::size_t> idx;
        std::stringstream ss(key);
        std::string part;
        while (std::getline(ss, part, ',')) {
            std::size_t pos = 0;
            long long v = -1;
            try {
                v = std::stoll(part, &pos);
            } catch (const std::exception&) {
                malformed("bad entry index '" + key + "'");
            }
            if (pos != part.size() || v < 1)
                malformed("bad entry index '" + key + "'");
            idx.push_back(static_cast<std::size_t>(v - 1));
        }
        if (idx.size() != shape.order())
            malformed("entry index '" + key + "' has the wrong length");
        for (std::size_t i = 0; i < idx.size(); ++i)
            if (idx[i] >= shape[i])
                malformed("entry index '" + key + "' out of range");
        t.at(idx) += scalar_from_text(field, as_string(e[1], "entry value"));
    }
    return t;
}

Json decomposition_to_json(const Decomposition& d)
{
    Json terms = Json::array();
    for (const auto& term : d.terms()) {
        Json legs = Json::array();
        for (const auto& v : term.factors)
            legs.push_back(vector_to_json(v));
        terms.push_back(legs);
    }
    return {{"field", field_to_json(d.field())}, {"dims", shape_to_json(d.shape())}, {"terms", terms}};
}

namespace {

Decomposition terms_from_json(const FieldSpec& field, const Shape& shape, const Json& terms)
{
    Decomposition d(field, shape);
    for (const auto& term : as_array(terms, "terms")) {
        if (!term.is_array() || term.size() != shape.order())
            malformed("each term needs one vector per leg");
        SimpleTensor st;
        for (std::size_t leg = 0; leg < shape.order(); ++leg)
            st.factors.push_back(vector_from_json(field, term[leg], shape[leg]));
        d.add(std::move(st));
    }
    return d;
}

} // namespace

Decomposition decomposition_from_json(const Json& j)
{
    FieldSpec field = field_from_json(member(j, "field"));
    return terms_from_json(field, shape_from_json(member(j, "dims"), "dims"), member(j, "terms"));
}

std::string Certificate::type() const
{
    switch (body.index()) {
    case 0:
        return "restriction";
    case 1:
        return "degeneration";
    default:
        return "decomposition";
    }
}

const FieldSpec& Certificate::field() const
{
    return std::visit([](const auto& b) -> const FieldSpec& {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, Decomposition>)
            return b.field();
        else
            return b.field;
    }, body);
}

Tensor Certificate::source_tensor() const
{
    if (source)
        return *source;
    const Shape& s = std::holds_alternative<Restriction>(body) ? std::get<Restriction>(body).source
                                                               : std::get<Degeneration>(body).source;
    for (auto d : s.dims())
        if (d != s[0])
            malformed("certificate without a source tensor needs equal source dimensions (unit tensor)");
    return unit_tensor(field(), s[0], s.order());
}

Json certificate_to_json(const Certificate& c)
{
    Json j;
    j["type"] = c.type();
    j["field"] = field_to_json(c.field());
    j["meta"] = c.meta;
    if (const auto* d = std::get_if<Decomposition>(&c.body)) {
        j["target_dims"] = shape_to_json(d->shape());
        j["terms"] = decomposition_to_json(*d)["terms"];
        return j;
    }
    if (const auto* r = std::get_if<Restriction>(&c.body)) {
        j["source_dims"] = shape_to_json(r->source);
        j["target_dims"] = shape_to_json(r->target);
        Json maps = Json::array();
        for (const auto& m : r->maps)
            maps.push_back(matrix_to_json(m));
        j["maps"] = maps;
    } else {
        const auto& g = std::get<Degeneration>(c.body);
        j["source_dims"] = shape_to_json(g.source);
        j["target_dims"] = shape_to_json(g.target);
        Json maps = Json::array();
        for (const auto& m : g.maps)
            maps.push_back(poly_matrix_to_json(m));
        j["maps"] = maps;
        j["claimed_d"] = g.claimed_d;
        j["claimed_e"] = g.claimed_e;
    }
    if (c.source)
        j["source"] = tensor_to_json(*c.source);
    return j;
}

Certificate certificate_from_json(const Json& j)
{
    if (!j.is_object())
        malformed("certificate must be a JSON object");
    const std::string& type = as_string(member(j, "type"), "type");
    FieldSpec field = field_from_json(member(j, "field"));
    Certificate c;
    if (auto it = j.find("meta"); it != j.end())
        c.meta = *it;
    Shape target = shape_from_json(member(j, "target_dims"), "target_dims");
    if (type == "decomposition") {
        c.body = terms_from_json(field, target, member(j, "terms"));
        return c;
    }
    Shape source = shape_from_json(member(j, "source_dims"), "source_dims");
    const Json& maps = as_array(member(j, "maps"), "maps");
    try {
        if (type == "restriction") {
            Restriction r{field, source, target, {}};
            for (const auto& m : maps) {
                auto rows = rows_from_json<Scalar>(m, [&](const std::string& s) { return scalar_from_text(field, s); });
                r.maps.push_back(Matrix::from_rows(field, rows));
            }
            r.validate();
            c.body = std::move(r);
        } else if (type == "degeneration") {
            Degeneration g{field, source, target, {}, as_size(member(j, "claimed_d"), "claimed_d"),
                           as_size(member(j, "claimed_e"), "claimed_e")};
            for (const auto& m : maps) {
                auto rows = rows_from_json<Poly>(m, [&](const std::string& s) { return poly_from_text(field, s); });
                PolyMatrix pm(field, rows.size(), rows.front().size());
                for (std::size_t a = 0; a < rows.size(); ++a)
                    for (std::size_t b = 0; b < rows[a].size(); ++b)
                        pm(a, b) = rows[a][b];
                g.maps.push_back(std::move(pm));
            }
            g.validate();
            c.body = std::move(g);
        } else {
            malformed("unknown certificate type '" + type + "'");
        }
    } catch (const ShapeError& e) {
        malformed(std::string("certificate maps: ") + e.what());
    }
    if (auto it = j.find("source"); it != j.end()) {
        c.source = tensor_from_json(*it);
        if (c.source->shape() != source)
            malformed("source tensor does not match source_dims");
        if (c.source->field() != field)
            malformed("source tensor field differs from the certificate field");
    }
    return c;
}

VerifyResult verify_certificate(const Certificate& c, const Tensor& target)
{
    if (target.field() != c.field()) {
        VerifyResult v;
        v.message = "target tensor is over " + target.field().to_string() + ", certificate over " +
                    c.field().to_string();
        return v;
    }
    if (const auto* d = std::get_if<Decomposition>(&c.body))
        return verify_decomposition(*d, target);
    if (const auto* r = std::get_if<Restriction>(&c.body))
        return verify_restriction(*r, c.source_tensor(), target);
    return verify_degeneration(std::get<Degeneration>(c.body), c.source_tensor(), target);
}

Json verify_result_to_json(const VerifyResult& v)
{
    Json j{{"ok", v.ok}, {"message", v.message}};
    j["d"] = v.d ? Json(*v.d) : Json(nullptr);
    j["e"] = v.e ? Json(*v.e) : Json(nullptr);
    if (v.mismatch_index) {
        std::vector<std::size_t> one_based;
        for (auto i : *v.mismatch_index)
            one_based.push_back(i + 1);
        j["mismatch_index"] = one_based;
    }
    if (v.mismatch_degree)
        j["mismatch_degree"] = *v.mismatch_degree;
    return j;
}

Json rank_report_to_json(const RankBoundReport& r)
{
    Json j;
    j["upper"] = r.upper ? Json(*r.upper) : Json(nullptr);
    j["lower"] = r.lower.get_str();
    j["lower_int"] = r.lower_int;
    j["methods"] = r.methods;
    j["determined"] = r.determined;
    return j;
}

Json matrix_to_json(const Matrix& m)
{
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        out.push_back(vector_to_json(m.row(i)));
    return out;
}

Json pencil_to_json(const PencilCanonicalForm& cf, const std::optional<BasisChange>& bc,
                    const std::optional<PencilRank>& rank)
{
    Json j;
    j["field"] = field_to_json(cf.field);
    j["dims"] = {2, cf.n, cf.m};
    j["zero"] = {cf.zero_rows, cf.zero_cols};
    j["eps"] = cf.eps;
    j["eta"] = cf.eta;
    Json factors = Json::array();
    for (const auto& f : cf.invariant_factors)
        factors.push_back(f.to_string("x"));
    j["invariant_factors"] = factors;
    j["infinite_divisors"] = cf.infinite_divisors;
    j["chart"] = matrix_to_json(cf.chart);
    j["ell"] = cf.ell();
    if (rank) {
        j["rank"] = rank->rank;
        j["rank_formula"] = rank->formula;
        j["hypothesis_met"] = rank->hypothesis_met;
    } else {
        j["rank"] = nullptr;
    }
    if (bc)
        j["basis_change"] = {{"A", matrix_to_json(bc->A)}, {"B", matrix_to_json(bc->B)}, {"C", matrix_to_json(bc->C)}};
    return j;
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        malformed("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        malformed("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

} // namespace tensorrank
