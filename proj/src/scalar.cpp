#include "tensorrank/scalar.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace tensorrank {

namespace {

std::uint32_t mod_mul(std::uint32_t a, std::uint32_t b, std::uint32_t p)
{
    return static_cast<std::uint32_t>((std::uint64_t{a} * b) % p);
}

std::uint32_t mod_pow(std::uint32_t base, std::uint64_t e, std::uint32_t p)
{
    std::uint32_t result = 1 % p;
    while (e > 0) {
        if (e & 1)
            result = mod_mul(result, base, p);
        base = mod_mul(base, base, p);
        e >>= 1;
    }
    return result;
}

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p)
{
    // Extended Euclid on signed 64-bit values.
    std::int64_t t = 0, new_t = 1, r = p, new_r = a;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (t < 0)
        t += p;
    return static_cast<std::uint32_t>(t);
}

std::uint32_t reduce_mpz(const mpz_class& z, std::uint32_t p)
{
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
    return static_cast<std::uint32_t>(r.get_ui());
}

// Tonelli-Shanks; `a` must be a nonzero quadratic residue modulo odd p.
std::uint32_t mod_sqrt(std::uint32_t a, std::uint32_t p)
{
    std::uint32_t q = p - 1, s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    std::uint32_t z = 2;
    while (mod_pow(z, (p - 1) / 2, p) != p - 1)
        ++z;
    std::uint32_t m = s;
    std::uint32_t c = mod_pow(z, q, p);
    std::uint32_t t = mod_pow(a, q, p);
    std::uint32_t r = mod_pow(a, (q + 1) / 2, p);
    while (t != 1) {
        std::uint32_t i = 0, tt = t;
        while (tt != 1) {
            tt = mod_mul(tt, tt, p);
            ++i;
        }
        std::uint32_t b = c;
        for (std::uint32_t j = 0; j + 1 < m - i; ++j)
            b = mod_mul(b, b, p);
        m = i;
        c = mod_mul(b, b, p);
        t = mod_mul(t, c, p);
        r = mod_mul(r, b, p);
    }
    return r;
}

std::optional<mpq_class> rational_sqrt(const mpq_class& q)
{
    if (sgn(q) < 0)
        return std::nullopt;
    if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 || mpz_perfect_square_p(q.get_den_mpz_t()) == 0)
        return std::nullopt;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    mpq_class r(n, d);
    r.canonicalize();
    return r;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

mpq_class parse_rational(std::string_view text)
{
    std::string_view s = trim(text);
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+'))
        ++i;
    std::size_t digits = 0, slash = std::string_view::npos;
    for (std::size_t j = i; j < s.size(); ++j) {
        if (std::isdigit(static_cast<unsigned char>(s[j])))
            ++digits;
        else if (s[j] == '/' && slash == std::string_view::npos && j > i)
            slash = j;
        else
            throw ParseError("invalid rational '" + std::string(text) + "'");
    }
    if (digits == 0 || (slash != std::string_view::npos && slash + 1 == s.size()))
        throw ParseError("invalid rational '" + std::string(text) + "'");
    std::string body(s[0] == '+' ? s.substr(1) : s);
    mpq_class q;
    if (slash != std::string_view::npos) {
        mpz_class den(body.substr(body.find('/') + 1));
        if (den == 0)
            throw DivisionByZero();
    }
    if (q.set_str(body, 10) != 0)
        throw ParseError("invalid rational '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

mpq_class parse_signed_coefficient(std::string_view s)
{
    if (s.empty() || s == "+")
        return 1;
    if (s == "-")
        return -1;
    return parse_rational(s);
}

} // namespace

Scalar Scalar::zero(const FieldSpec& field)
{
    return from_int(field, 0);
}

Scalar Scalar::one(const FieldSpec& field)
{
    return from_int(field, 1);
}

Scalar Scalar::from_int(const FieldSpec& field, long value)
{
    switch (field.kind()) {
    case FieldKind::prime: {
        long p = field.modulus();
        long r = value % p;
        if (r < 0)
            r += p;
        return Scalar(field, static_cast<std::uint32_t>(r));
    }
    case FieldKind::rationals:
        return Scalar(field, mpq_class(value));
    case FieldKind::quadratic:
        return Scalar(field, Quad{mpq_class(value), mpq_class(0)});
    }
    return {};
}

Scalar Scalar::from_rational(const FieldSpec& field, const mpq_class& value)
{
    switch (field.kind()) {
    case FieldKind::prime: {
        std::uint32_t p = field.modulus();
        std::uint32_t den = reduce_mpz(value.get_den(), p);
        if (den == 0)
            throw DivisionByZero();
        return Scalar(field, mod_mul(reduce_mpz(value.get_num(), p), mod_inverse(den, p), p));
    }
    case FieldKind::rationals:
        return Scalar(field, value);
    case FieldKind::quadratic:
        return Scalar(field, Quad{value, mpq_class(0)});
    }
    return {};
}

Scalar Scalar::from_parts(const FieldSpec& field, const mpq_class& a, const mpq_class& b)
{
    if (field.kind() != FieldKind::quadratic) {
        if (b != 0)
            throw InvalidArgument("sqrt(D) component requires a quadratic field");
        return from_rational(field, a);
    }
    return Scalar(field, Quad{a, b});
}

Scalar Scalar::parse(const FieldSpec& field, std::string_view text)
{
    std::string compact;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            compact.push_back(c);
    if (compact.empty())
        throw ParseError("empty scalar");

    if (field.kind() != FieldKind::quadratic) {
        if (compact.find("sqrt") != std::string::npos)
            throw ParseError("sqrt term outside a quadratic field: '" + compact + "'");
        return from_rational(field, parse_rational(compact));
    }

    std::size_t pos = compact.find("sqrt(");
    if (pos == std::string::npos)
        return from_rational(field, parse_rational(compact));

    std::size_t close = compact.find(')', pos);
    if (close == std::string::npos || close + 1 != compact.size())
        throw ParseError("malformed sqrt term: '" + compact + "'");
    std::string_view radicand(compact.data() + pos + 5, close - pos - 5);
    std::int64_t d = 0;
    auto [ptr, ec] = std::from_chars(radicand.data(), radicand.data() + radicand.size(), d);
    if (ec != std::errc() || ptr != radicand.data() + radicand.size() || d != field.radicand())
        throw ParseError("sqrt radicand does not match field: '" + compact + "'");

    std::string_view coeff(compact.data(), pos);
    if (!coeff.empty() && coeff.back() == '*')
        coeff.remove_suffix(1);
    // Split "a+b" / "a-b" at the last sign that follows a digit.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = 1; i < coeff.size(); ++i)
        if ((coeff[i] == '+' || coeff[i] == '-') && std::isdigit(static_cast<unsigned char>(coeff[i - 1])))
            split = i;
    mpq_class a = 0;
    std::string_view bpart = coeff;
    if (split != std::string_view::npos) {
        a = parse_rational(coeff.substr(0, split));
        bpart = coeff.substr(split);
        if (bpart.size() > 1 && bpart[0] == '+' && (bpart[1] == '-' || bpart[1] == '+'))
            bpart.remove_prefix(1);
    }
    return Scalar(field, Quad{a, parse_signed_coefficient(bpart)});
}

bool Scalar::is_zero() const
{
    switch (value_.index()) {
    case 0:
        return std::get<0>(value_) == 0;
    case 1:
        return sgn(std::get<1>(value_)) == 0;
    default: {
        const auto& q = std::get<2>(value_);
        return sgn(q.a) == 0 && sgn(q.b) == 0;
    }
    }
}

bool Scalar::is_one() const
{
    switch (value_.index()) {
    case 0:
        return std::get<0>(value_) == 1;
    case 1:
        return std::get<1>(value_) == 1;
    default: {
        const auto& q = std::get<2>(value_);
        return q.a == 1 && sgn(q.b) == 0;
    }
    }
}

std::uint32_t Scalar::residue() const
{
    if (value_.index() != 0)
        throw InvalidArgument("residue() requires a prime field element");
    return std::get<0>(value_);
}

mpq_class Scalar::rational_part() const
{
    switch (value_.index()) {
    case 0:
        return mpq_class(std::get<0>(value_));
    case 1:
        return std::get<1>(value_);
    default:
        return std::get<2>(value_).a;
    }
}

mpq_class Scalar::irrational_part() const
{
    if (value_.index() == 2)
        return std::get<2>(value_).b;
    return 0;
}

void Scalar::require_same_field(const Scalar& rhs) const
{
    if (!(field_ == rhs.field_))
        throw FieldMismatch("field mismatch: " + field_.to_string() + " vs " + rhs.field_.to_string());
}

Scalar Scalar::operator-() const
{
    switch (value_.index()) {
    case 0: {
        std::uint32_t v = std::get<0>(value_);
        return Scalar(field_, v == 0 ? 0u : field_.modulus() - v);
    }
    case 1:
        return Scalar(field_, mpq_class(-std::get<1>(value_)));
    default: {
        const auto& q = std::get<2>(value_);
        return Scalar(field_, Quad{-q.a, -q.b});
    }
    }
}

Scalar& Scalar::operator+=(const Scalar& rhs)
{
    require_same_field(rhs);
    switch (value_.index()) {
    case 0: {
        std::uint64_t s = std::uint64_t{std::get<0>(value_)} + std::get<0>(rhs.value_);
        if (s >= field_.modulus())
            s -= field_.modulus();
        std::get<0>(value_) = static_cast<std::uint32_t>(s);
        break;
    }
    case 1:
        std::get<1>(value_) += std::get<1>(rhs.value_);
        break;
    default: {
        auto& q = std::get<2>(value_);
        const auto& r = std::get<2>(rhs.value_);
        q.a += r.a;
        q.b += r.b;
    }
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs)
{
    require_same_field(rhs);
    switch (value_.index()) {
    case 0: {
        std::uint32_t a = std::get<0>(value_), b = std::get<0>(rhs.value_);
        std::get<0>(value_) = a >= b ? a - b : a + (field_.modulus() - b);
        break;
    }
    case 1:
        std::get<1>(value_) -= std::get<1>(rhs.value_);
        break;
    default: {
        auto& q = std::get<2>(value_);
        const auto& r = std::get<2>(rhs.value_);
        q.a -= r.a;
        q.b -= r.b;
    }
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs)
{
    require_same_field(rhs);
    switch (value_.index()) {
    case 0:
        std::get<0>(value_) = mod_mul(std::get<0>(value_), std::get<0>(rhs.value_), field_.modulus());
        break;
    case 1:
        std::get<1>(value_) *= std::get<1>(rhs.value_);
        break;
    default: {
        auto& q = std::get<2>(value_);
        const auto& r = std::get<2>(rhs.value_);
        mpq_class a = q.a * r.a + mpq_class(field_.radicand()) * q.b * r.b;
        mpq_class b = q.a * r.b + q.b * r.a;
        q.a = std::move(a);
        q.b = std::move(b);
    }
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs)
{
    require_same_field(rhs);
    return *this *= rhs.inverse();
}

void Scalar::add_product(const Scalar& a, const Scalar& b)
{
    if (value_.index() == 0 && a.value_.index() == 0 && b.value_.index() == 0 && field_ == a.field_ &&
        field_ == b.field_) {
        std::uint32_t p = field_.modulus();
        std::uint64_t s = std::get<0>(value_) + (std::uint64_t{std::get<0>(a.value_)} * std::get<0>(b.value_)) % p;
        if (s >= p)
            s -= p;
        std::get<0>(value_) = static_cast<std::uint32_t>(s);
        return;
    }
    if (value_.index() == 1 && a.value_.index() == 1 && b.value_.index() == 1 && field_ == a.field_ &&
        field_ == b.field_) {
        mpq_class t = std::get<1>(a.value_) * std::get<1>(b.value_);
        std::get<1>(value_) += t;
        return;
    }
    *this += a * b;
}

std::optional<Scalar> Scalar::try_inverse() const
{
    if (is_zero())
        return std::nullopt;
    switch (value_.index()) {
    case 0:
        return Scalar(field_, mod_inverse(std::get<0>(value_), field_.modulus()));
    case 1: {
        mpq_class inv = 1 / std::get<1>(value_);
        return Scalar(field_, std::move(inv));
    }
    default: {
        const auto& q = std::get<2>(value_);
        mpq_class n = norm();
        return Scalar(field_, Quad{q.a / n, -q.b / n});
    }
    }
}

Scalar Scalar::inverse() const
{
    auto inv = try_inverse();
    if (!inv)
        throw DivisionByZero();
    return *std::move(inv);
}

Scalar Scalar::pow(std::uint64_t exponent) const
{
    Scalar result = one(field_);
    Scalar base = *this;
    while (exponent > 0) {
        if (exponent & 1)
            result *= base;
        exponent >>= 1;
        if (exponent > 0)
            base *= base;
    }
    return result;
}

mpq_class Scalar::norm() const
{
    if (value_.index() == 2) {
        const auto& q = std::get<2>(value_);
        return q.a * q.a - mpq_class(field_.radicand()) * q.b * q.b;
    }
    return rational_part();
}

std::optional<Scalar> Scalar::sqrt() const
{
    if (is_zero())
        return *this;
    switch (value_.index()) {
    case 0: {
        std::uint32_t p = field_.modulus(), a = std::get<0>(value_);
        if (p == 2)
            return *this;
        if (mod_pow(a, (p - 1) / 2, p) != 1)
            return std::nullopt;
        return Scalar(field_, mod_sqrt(a, p));
    }
    case 1: {
        auto r = rational_sqrt(std::get<1>(value_));
        if (!r)
            return std::nullopt;
        return Scalar(field_, *r);
    }
    default: {
        const auto& q = std::get<2>(value_);
        mpq_class d(field_.radicand());
        if (sgn(q.b) == 0) {
            if (auto r = rational_sqrt(q.a))
                return Scalar(field_, Quad{*r, 0});
            mpq_class ratio = q.a / d;
            if (auto y = rational_sqrt(ratio))
                return Scalar(field_, Quad{0, *y});
            return std::nullopt;
        }
        // (x + y sqrt D)^2 = a + b sqrt D  <=>  x^2 + D y^2 = a, 2xy = b.
        auto s = rational_sqrt(norm());
        if (!s)
            return std::nullopt;
        for (const mpq_class& cand : {mpq_class((q.a + *s) / 2), mpq_class((q.a - *s) / 2)}) {
            auto x = rational_sqrt(cand);
            if (!x || sgn(*x) == 0)
                continue;
            mpq_class y = q.b / (2 * *x);
            Scalar r(field_, Quad{*x, y});
            if (r * r == *this)
                return r;
        }
        return std::nullopt;
    }
    }
}

std::string Scalar::to_string() const
{
    switch (value_.index()) {
    case 0:
        return std::to_string(std::get<0>(value_));
    case 1:
        return std::get<1>(value_).get_str();
    default: {
        const auto& q = std::get<2>(value_);
        if (sgn(q.b) == 0)
            return q.a.get_str();
        mpq_class mag = abs(q.b);
        return q.a.get_str() + (sgn(q.b) > 0 ? "+" : "-") + mag.get_str() + "*sqrt(" +
               std::to_string(field_.radicand()) + ")";
    }
    }
}

bool operator==(const Scalar& lhs, const Scalar& rhs)
{
    if (!(lhs.field_ == rhs.field_))
        return false;
    switch (lhs.value_.index()) {
    case 0:
        return std::get<0>(lhs.value_) == std::get<0>(rhs.value_);
    case 1:
        return std::get<1>(lhs.value_) == std::get<1>(rhs.value_);
    default: {
        const auto& a = std::get<2>(lhs.value_);
        const auto& b = std::get<2>(rhs.value_);
        return a.a == b.a && a.b == b.b;
    }
    }
}

} // namespace tensorrank
