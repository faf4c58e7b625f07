#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "tensorrank/errors.hpp"
#include "tensorrank/field.hpp"

namespace tensorrank {

/// Element of a FieldSpec. The representation is canonical (reduced
/// fractions, residues in [0, p)), so equality is representation equality.
///
/// Mixing elements of different fields raises FieldMismatch; dividing by zero
/// raises DivisionByZero (use try_inverse() for a non-throwing variant).
class Scalar {
public:
    /// Rational zero.
    Scalar() : value_(std::in_place_type<mpq_class>) {}

    static Scalar zero(const FieldSpec& field);
    static Scalar one(const FieldSpec& field);
    static Scalar from_int(const FieldSpec& field, long value);
    /// Throws DivisionByZero in F_p when p divides the denominator.
    static Scalar from_rational(const FieldSpec& field, const mpq_class& value);
    /// a + b*sqrt(D). Requires a quadratic field.
    static Scalar from_parts(const FieldSpec& field, const mpq_class& a, const mpq_class& b);

    /// Parses the external text format of `field`:
    ///   Q:         "a" or "a/b"
    ///   F_p:       a decimal integer (negative values and "a/b" are reduced)
    ///   Q(sqrt D): "a+b*sqrt(D)", "a-b*sqrt(D)", "b*sqrt(D)" or a rational.
    static Scalar parse(const FieldSpec& field, std::string_view text);

    const FieldSpec& field() const { return field_; }

    bool is_zero() const;
    bool is_one() const;

    /// Residue in [0, p); prime fields only.
    std::uint32_t residue() const;
    /// Rational part (the value itself over Q, `a` over Q(sqrt D)).
    mpq_class rational_part() const;
    /// Coefficient of sqrt(D); zero outside quadratic fields.
    mpq_class irrational_part() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& rhs);
    Scalar& operator-=(const Scalar& rhs);
    Scalar& operator*=(const Scalar& rhs);
    Scalar& operator/=(const Scalar& rhs);

    friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
    friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
    friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
    friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }

    /// this += a * b, without a temporary for the prime-field case.
    void add_product(const Scalar& a, const Scalar& b);

    Scalar inverse() const;
    std::optional<Scalar> try_inverse() const;
    Scalar pow(std::uint64_t exponent) const;
    /// A square root inside the same field, if one exists.
    std::optional<Scalar> sqrt() const;
    /// Norm a^2 - D b^2 for quadratic elements, the value itself otherwise.
    mpq_class norm() const;

    std::string to_string() const;

    friend bool operator==(const Scalar& lhs, const Scalar& rhs);
    friend bool operator!=(const Scalar& lhs, const Scalar& rhs) { return !(lhs == rhs); }
    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

private:
    struct Quad {
        mpq_class a;
        mpq_class b;
    };

    Scalar(const FieldSpec& field, std::uint32_t residue) : field_(field), value_(residue) {}
    Scalar(const FieldSpec& field, mpq_class q) : field_(field), value_(std::move(q)) {}
    Scalar(const FieldSpec& field, Quad q) : field_(field), value_(std::move(q)) {}

    void require_same_field(const Scalar& rhs) const;

    FieldSpec field_;
    std::variant<std::uint32_t, mpq_class, Quad> value_;
};

} // namespace tensorrank
