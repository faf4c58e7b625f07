#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tensorrank/scalar.hpp"

namespace tensorrank {

/// Univariate polynomial over a FieldSpec, stored as a coefficient vector
/// indexed by degree with no trailing zeros. Used both for the degeneration
/// parameter eps and for pencil invariant factors.
class Poly {
public:
    Poly() = default;
    explicit Poly(const FieldSpec& field) : field_(field) {}
    Poly(const FieldSpec& field, std::vector<Scalar> coeffs);

    static Poly constant(const Scalar& c);
    /// c * x^degree
    static Poly monomial(const Scalar& c, std::size_t degree);
    /// The variable x itself.
    static Poly x(const FieldSpec& field);

    /// Parses "c0 + c1*eps + c2*eps^2"; terms may appear in any order and
    /// repeated degrees are summed. Coefficients containing a sqrt part may
    /// be parenthesized.
    static Poly parse(const FieldSpec& field, std::string_view text, std::string_view var = "eps");

    const FieldSpec& field() const { return field_; }
    const std::vector<Scalar>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }

    /// nullopt for the zero polynomial (degree -infinity).
    std::optional<std::size_t> degree() const;
    /// Lowest degree with a nonzero coefficient; nullopt (+infinity) for zero.
    std::optional<std::size_t> valuation() const;
    /// Coefficient of x^i, zero beyond the degree.
    Scalar coeff(std::size_t i) const;
    Scalar leading() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& rhs);
    Poly& operator-=(const Poly& rhs);
    Poly& operator*=(const Poly& rhs);
    Poly& operator*=(const Scalar& rhs);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
    friend Poly operator*(const Scalar& s, Poly a) { return a *= s; }

    /// Drops every coefficient above dmax.
    Poly truncate(std::size_t dmax) const;
    Scalar eval(const Scalar& at) const;
    Poly derivative() const;
    Poly monic() const;
    Poly pow(std::size_t exponent) const;

    /// Euclidean division; throws DivisionByZero for a zero divisor.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
    /// Monic gcd (zero if both are zero).
    static Poly gcd(Poly a, Poly b);
    bool divides(const Poly& other) const;

    std::string to_string(std::string_view var = "eps") const;

    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
    void normalize();
    void require_same_field(const Poly& rhs) const;

    FieldSpec field_;
    std::vector<Scalar> coeffs_;
};

using EpsPoly = Poly;

inline Poly poly_mul(const Poly& a, const Poly& b) { return a * b; }
inline Poly poly_truncate(const Poly& a, std::size_t dmax) { return a.truncate(dmax); }
inline std::optional<std::size_t> poly_valuation(const Poly& a) { return a.valuation(); }

} // namespace tensorrank
