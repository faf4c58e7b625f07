#include "tensorrank/field.hpp"

#include <charconv>
#include <cstdlib>

#include "tensorrank/errors.hpp"

namespace tensorrank {

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    if (n % 2 == 0)
        return n == 2;
    for (std::uint64_t f = 3; f * f <= n; f += 2)
        if (n % f == 0)
            return false;
    return true;
}

namespace {

bool is_perfect_square(std::int64_t v)
{
    if (v < 0)
        return false;
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= v)
        ++r;
    return r * r == v;
}

bool is_square_free(std::int64_t v)
{
    std::uint64_t n = static_cast<std::uint64_t>(v < 0 ? -v : v);
    for (std::uint64_t f = 2; f * f <= n; ++f)
        if (n % (f * f) == 0)
            return false;
    return n != 0;
}

std::int64_t parse_int(std::string_view text)
{
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError("invalid integer in field spec: '" + std::string(text) + "'");
    return value;
}

} // namespace

FieldSpec FieldSpec::prime(std::int64_t p)
{
    if (p < 2 || p >= (std::int64_t{1} << 31))
        throw InvalidField("prime modulus must lie in [2, 2^31): " + std::to_string(p));
    if (!is_prime(static_cast<std::uint64_t>(p)))
        throw InvalidField("modulus is not prime: " + std::to_string(p));
    FieldSpec f;
    f.kind_ = FieldKind::prime;
    f.p_ = static_cast<std::uint32_t>(p);
    return f;
}

FieldSpec FieldSpec::quadratic(std::int64_t d)
{
    // |D| is bounded so that trial division and products stay cheap.
    if (d == 0 || d > (std::int64_t{1} << 40) || d < -(std::int64_t{1} << 40))
        throw InvalidField("radicand out of range: " + std::to_string(d));
    if (is_perfect_square(d))
        throw InvalidField("radicand is a perfect square: " + std::to_string(d));
    if (!is_square_free(d))
        throw InvalidField("radicand is not square-free: " + std::to_string(d));
    FieldSpec f;
    f.kind_ = FieldKind::quadratic;
    f.d_ = d;
    return f;
}

FieldSpec FieldSpec::parse(std::string_view text)
{
    if (text == "q" || text == "Q")
        return rationals();
    if (text.starts_with("fp:"))
        return prime(parse_int(text.substr(3)));
    if (text.starts_with("qsqrt:"))
        return quadratic(parse_int(text.substr(6)));
    throw ParseError("unknown field '" + std::string(text) + "' (expected q, fp:<p> or qsqrt:<D>)");
}

std::optional<std::uint64_t> FieldSpec::cardinality() const
{
    if (kind_ == FieldKind::prime)
        return p_;
    return std::nullopt;
}

std::string FieldSpec::to_string() const
{
    switch (kind_) {
    case FieldKind::rationals:
        return "q";
    case FieldKind::prime:
        return "fp:" + std::to_string(p_);
    case FieldKind::quadratic:
        return "qsqrt:" + std::to_string(d_);
    }
    return "?";
}

} // namespace tensorrank
