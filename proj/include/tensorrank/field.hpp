#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tensorrank {

enum class FieldKind : std::uint8_t { rationals, prime, quadratic };

/// Ground field descriptor: Q, F_p with p < 2^31, or Q(sqrt(D)) for a
/// square-free non-square integer D. Cheap to copy; compared by value.
class FieldSpec {
public:
    /// The rationals. Also the default-constructed field.
    FieldSpec() = default;

    static FieldSpec rationals() { return FieldSpec(); }
    /// Throws InvalidField unless p is a prime below 2^31.
    static FieldSpec prime(std::int64_t p);
    /// Throws InvalidField unless d is square-free and not a perfect square.
    static FieldSpec quadratic(std::int64_t d);

    /// Parses the command-line notation: "q", "fp:<p>" or "qsqrt:<D>".
    static FieldSpec parse(std::string_view text);

    FieldKind kind() const { return kind_; }
    bool is_finite() const { return kind_ == FieldKind::prime; }
    std::uint32_t modulus() const { return p_; }
    std::int64_t radicand() const { return d_; }
    std::uint32_t characteristic() const { return kind_ == FieldKind::prime ? p_ : 0; }

    /// Number of elements; nullopt for infinite fields.
    std::optional<std::uint64_t> cardinality() const;

    /// Command-line notation, inverse of parse().
    std::string to_string() const;

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

private:
    FieldKind kind_ = FieldKind::rationals;
    std::uint32_t p_ = 0;
    std::int64_t d_ = 0;
};

bool is_prime(std::uint64_t n);

} // namespace tensorrank
