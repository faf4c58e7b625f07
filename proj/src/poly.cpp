#include "tensorrank/poly.hpp"

#include <cctype>
#include <charconv>

namespace tensorrank {

Poly::Poly(const FieldSpec& field, std::vector<Scalar> coeffs) : field_(field), coeffs_(std::move(coeffs))
{
    for (const auto& c : coeffs_)
        if (!(c.field() == field_))
            throw FieldMismatch();
    normalize();
}

Poly Poly::constant(const Scalar& c)
{
    return Poly(c.field(), {c});
}

Poly Poly::monomial(const Scalar& c, std::size_t degree)
{
    if (c.is_zero())
        return Poly(c.field());
    std::vector<Scalar> v(degree + 1, Scalar::zero(c.field()));
    v[degree] = c;
    return Poly(c.field(), std::move(v));
}

Poly Poly::x(const FieldSpec& field)
{
    return monomial(Scalar::one(field), 1);
}

void Poly::normalize()
{
    while (!coeffs_.empty() && coeffs_.back().is_zero())
        coeffs_.pop_back();
}

void Poly::require_same_field(const Poly& rhs) const
{
    if (!(field_ == rhs.field_))
        throw FieldMismatch();
}

std::optional<std::size_t> Poly::degree() const
{
    if (coeffs_.empty())
        return std::nullopt;
    return coeffs_.size() - 1;
}

std::optional<std::size_t> Poly::valuation() const
{
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (!coeffs_[i].is_zero())
            return i;
    return std::nullopt;
}

Scalar Poly::coeff(std::size_t i) const
{
    return i < coeffs_.size() ? coeffs_[i] : Scalar::zero(field_);
}

Scalar Poly::leading() const
{
    return coeffs_.empty() ? Scalar::zero(field_) : coeffs_.back();
}

Poly Poly::operator-() const
{
    Poly r = *this;
    for (auto& c : r.coeffs_)
        c = -c;
    return r;
}

Poly& Poly::operator+=(const Poly& rhs)
{
    require_same_field(rhs);
    if (coeffs_.size() < rhs.coeffs_.size())
        coeffs_.resize(rhs.coeffs_.size(), Scalar::zero(field_));
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i)
        coeffs_[i] += rhs.coeffs_[i];
    normalize();
    return *this;
}

Poly& Poly::operator-=(const Poly& rhs)
{
    require_same_field(rhs);
    if (coeffs_.size() < rhs.coeffs_.size())
        coeffs_.resize(rhs.coeffs_.size(), Scalar::zero(field_));
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i)
        coeffs_[i] -= rhs.coeffs_[i];
    normalize();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b)
{
    a.require_same_field(b);
    if (a.is_zero() || b.is_zero())
        return Poly(a.field_);
    std::vector<Scalar> out(a.coeffs_.size() + b.coeffs_.size() - 1, Scalar::zero(a.field_));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i].is_zero())
            continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            out[i + j].add_product(a.coeffs_[i], b.coeffs_[j]);
    }
    return Poly(a.field_, std::move(out));
}

Poly& Poly::operator*=(const Poly& rhs)
{
    return *this = *this * rhs;
}

Poly& Poly::operator*=(const Scalar& rhs)
{
    if (!(rhs.field() == field_))
        throw FieldMismatch();
    for (auto& c : coeffs_)
        c *= rhs;
    normalize();
    return *this;
}

Poly Poly::truncate(std::size_t dmax) const
{
    if (coeffs_.size() <= dmax + 1)
        return *this;
    return Poly(field_, std::vector<Scalar>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(dmax + 1)));
}

Scalar Poly::eval(const Scalar& at) const
{
    Scalar acc = Scalar::zero(field_);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= at;
        acc += *it;
    }
    return acc;
}

Poly Poly::derivative() const
{
    if (coeffs_.size() <= 1)
        return Poly(field_);
    std::vector<Scalar> out;
    out.reserve(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        out.push_back(coeffs_[i] * Scalar::from_int(field_, static_cast<long>(i)));
    return Poly(field_, std::move(out));
}

Poly Poly::monic() const
{
    if (is_zero())
        return *this;
    return *this * leading().inverse();
}

Poly Poly::pow(std::size_t exponent) const
{
    Poly result = constant(Scalar::one(field_));
    Poly base = *this;
    while (exponent > 0) {
        if (exponent & 1)
            result *= base;
        exponent >>= 1;
        if (exponent > 0)
            base *= base;
    }
    return result;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b)
{
    a.require_same_field(b);
    if (b.is_zero())
        throw DivisionByZero();
    Poly rem = a;
    if (rem.coeffs_.size() < b.coeffs_.size())
        return {Poly(a.field_), rem};
    std::vector<Scalar> quot(rem.coeffs_.size() - b.coeffs_.size() + 1, Scalar::zero(a.field_));
    Scalar inv_lead = b.leading().inverse();
    const std::size_t db = b.coeffs_.size() - 1;
    for (std::size_t k = quot.size(); k-- > 0;) {
        Scalar f = rem.coeffs_[k + db] * inv_lead;
        if (f.is_zero())
            continue;
        quot[k] = f;
        for (std::size_t j = 0; j <= db; ++j)
            rem.coeffs_[k + j] -= f * b.coeffs_[j];
    }
    rem.normalize();
    return {Poly(a.field_, std::move(quot)), rem};
}

Poly Poly::gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        Poly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

bool Poly::divides(const Poly& other) const
{
    if (is_zero())
        return other.is_zero();
    return divmod(other, *this).second.is_zero();
}

std::string Poly::to_string(std::string_view var) const
{
    if (is_zero())
        return "0";
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const Scalar& c = coeffs_[i];
        if (c.is_zero())
            continue;
        std::string cs = c.to_string();
        std::string term;
        if (i == 0) {
            term = cs;
        } else {
            std::string power(var);
            if (i > 1)
                power += "^" + std::to_string(i);
            bool compound = sgn(c.irrational_part()) != 0 && sgn(c.rational_part()) != 0;
            if (c.is_one())
                term = power;
            else if ((-c).is_one())
                term = "-" + power;
            else if (compound)
                term = "(" + cs + ")*" + power;
            else
                term = cs + "*" + power;
        }
        if (out.empty())
            out = term;
        else if (term[0] == '-')
            out += " - " + term.substr(1);
        else
            out += " + " + term;
    }
    return out;
}

namespace {

std::size_t parse_exponent(std::string_view s)
{
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("invalid exponent '" + std::string(s) + "'");
    return value;
}

// Finds `var` at parenthesis depth zero.
std::size_t find_var(std::string_view term, std::string_view var)
{
    int depth = 0;
    for (std::size_t i = 0; i < term.size(); ++i) {
        if (term[i] == '(')
            ++depth;
        else if (term[i] == ')')
            --depth;
        else if (depth == 0 && term.substr(i, var.size()) == var)
            return i;
    }
    return std::string_view::npos;
}

} // namespace

Poly Poly::parse(const FieldSpec& field, std::string_view text, std::string_view var)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw ParseError("empty polynomial");

    std::vector<std::string> terms;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(')
            ++depth;
        else if (c == ')')
            --depth;
        else if ((c == '+' || c == '-') && depth == 0 && i > start) {
            char prev = s[i - 1];
            if (prev != '+' && prev != '-' && prev != '*' && prev != '/' && prev != '^') {
                terms.push_back(s.substr(start, i - start));
                start = i;
            }
        }
        if (depth < 0)
            throw ParseError("unbalanced parentheses in '" + s + "'");
    }
    if (depth != 0)
        throw ParseError("unbalanced parentheses in '" + s + "'");
    terms.push_back(s.substr(start));

    Poly result(field);
    for (std::string_view term : terms) {
        bool negate = false;
        if (!term.empty() && term[0] == '+') {
            term.remove_prefix(1);
        } else if (term.size() > 1 && term[0] == '-' &&
                   (term[1] == '(' || term.substr(1, var.size()) == var)) {
            negate = true;
            term.remove_prefix(1);
        }
        if (term.empty())
            throw ParseError("empty term in '" + s + "'");
        std::size_t pos = find_var(term, var);
        std::size_t degree = 0;
        std::string_view coef = term;
        if (pos != std::string_view::npos) {
            std::string_view rest = term.substr(pos + var.size());
            if (rest.empty())
                degree = 1;
            else if (rest[0] == '^')
                degree = parse_exponent(rest.substr(1));
            else
                throw ParseError("unexpected text after variable in '" + std::string(term) + "'");
            coef = term.substr(0, pos);
            if (!coef.empty()) {
                if (coef.back() != '*')
                    throw ParseError("expected '*' before variable in '" + std::string(term) + "'");
                coef.remove_suffix(1);
            }
        }
        if (coef.size() >= 2 && coef.front() == '(' && coef.back() == ')')
            coef = coef.substr(1, coef.size() - 2);
        Scalar c = coef.empty() ? Scalar::one(field) : Scalar::parse(field, coef);
        if (negate)
            c = -c;
        result += monomial(c, degree);
    }
    return result;
}

bool operator==(const Poly& a, const Poly& b)
{
    return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
}

} // namespace tensorrank
