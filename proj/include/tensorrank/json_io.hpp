#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "tensorrank/bounds.hpp"
#include "tensorrank/pencil.hpp"
#include "tensorrank/transform.hpp"

namespace tensorrank {

using Json = nlohmann::json;

// All *_from_json functions throw ParseError on malformed input, including
// wrong types, bad scalar strings and out-of-range indices.

Json field_to_json(const FieldSpec& field);
FieldSpec field_from_json(const Json& j);

/// { "field", "dims", "entries": [["i1,i2,..", "scalar"], ...] }, 1-based,
/// nonzero entries only.
Json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const Json& j);

/// { "field", "dims", "terms": [[[leg vector], ...], ...] }.
Json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j);

/// A restriction, degeneration or decomposition together with its family
/// metadata and an optional explicit source tensor (the unit tensor of the
/// source dimensions when absent).
struct Certificate {
    std::variant<Restriction, Degeneration, Decomposition> body;
    std::optional<Tensor> source;
    Json meta = Json::object();

    std::string type() const;
    const FieldSpec& field() const;
    /// The explicit source, or unit(r, k) when every source dimension is r.
    /// Throws ParseError if neither applies.
    Tensor source_tensor() const;
};

Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

/// Dispatches to verify_restriction / verify_degeneration /
/// verify_decomposition.
VerifyResult verify_certificate(const Certificate& c, const Tensor& target);

Json verify_result_to_json(const VerifyResult& v);
Json rank_report_to_json(const RankBoundReport& r);
Json pencil_to_json(const PencilCanonicalForm& cf, const std::optional<BasisChange>& bc,
                    const std::optional<PencilRank>& rank);
Json matrix_to_json(const Matrix& m);

/// Reads and parses a JSON file; ParseError on I/O or syntax errors.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

} // namespace tensorrank
