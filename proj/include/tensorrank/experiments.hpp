#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tensorrank/json_io.hpp"

namespace tensorrank {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct ExperimentOptions {
    /// Each experiment has its own default field when unset.
    std::optional<FieldSpec> field;
    std::uint64_t seed = kDefaultSeed;
    std::size_t k = 3;
    std::size_t n = 2;
    std::size_t q = 7;
    std::size_t d = 1;
    std::size_t count = 100;
};

struct Claim {
    std::string statement;
    bool verified = false;
    std::string detail;
};

struct ExperimentReport {
    std::string name;
    FieldSpec field;
    std::uint64_t seed = 0;
    std::vector<Claim> claims;
    Json data = Json::object();

    bool ok() const;
};

/// w3-squared, wk-power, strassen-q, matmul-224, pencil-mult, strassen7,
/// chi-demo.
const std::vector<std::string>& experiment_names();

/// Throws InvalidArgument for an unknown name or out-of-budget parameters.
ExperimentReport run_experiment(const std::string& name, const ExperimentOptions& options);

Json report_to_json(const ExperimentReport& r);
std::string report_to_text(const ExperimentReport& r);

} // namespace tensorrank
