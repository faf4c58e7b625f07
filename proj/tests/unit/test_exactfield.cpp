#include <random>

#include <gtest/gtest.h>

#include "tensorrank/matrix.hpp"
#include "tensorrank/poly.hpp"

using namespace tensorrank;

namespace {

const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F5 = FieldSpec::prime(5);
const FieldSpec Q2 = FieldSpec::quadratic(2);

Scalar random_scalar(const FieldSpec& f, std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    mpq_class a(num(rng), den(rng)), b(num(rng), den(rng));
    a.canonicalize();
    b.canonicalize();
    if (f.kind() == FieldKind::quadratic)
        return Scalar::from_parts(f, a, b);
    if (f.kind() == FieldKind::prime)
        return Scalar::from_int(f, num(rng));
    return Scalar::from_rational(f, a);
}

Poly random_poly(const FieldSpec& f, std::mt19937_64& rng, std::size_t maxdeg)
{
    std::uniform_int_distribution<std::size_t> deg(0, maxdeg);
    std::vector<Scalar> c;
    std::size_t d = deg(rng);
    for (std::size_t i = 0; i <= d; ++i)
        c.push_back(random_scalar(f, rng));
    return Poly(f, c);
}

} // namespace

TEST(FieldSpec, ValidatesParameters)
{
    EXPECT_THROW(FieldSpec::prime(4), InvalidField);
    EXPECT_THROW(FieldSpec::prime(1), InvalidField);
    EXPECT_THROW(FieldSpec::prime(std::int64_t{1} << 31), InvalidField);
    EXPECT_NO_THROW(FieldSpec::prime(2147483647));
    EXPECT_THROW(FieldSpec::quadratic(4), InvalidField);
    EXPECT_THROW(FieldSpec::quadratic(12), InvalidField);
    EXPECT_THROW(FieldSpec::quadratic(1), InvalidField);
    EXPECT_NO_THROW(FieldSpec::quadratic(-1));
    EXPECT_EQ(F5.cardinality(), 5u);
    EXPECT_FALSE(Q.cardinality().has_value());
    EXPECT_FALSE(Q2.cardinality().has_value());
}

TEST(FieldSpec, ParseRoundTrip)
{
    for (const char* s : {"q", "fp:7", "fp:10007", "qsqrt:2", "qsqrt:-3"})
        EXPECT_EQ(FieldSpec::parse(s).to_string(), s);
    EXPECT_THROW(FieldSpec::parse("fp:x"), ParseError);
    EXPECT_THROW(FieldSpec::parse("gf:7"), ParseError);
}

TEST(Scalar, CanonicalForms)
{
    EXPECT_EQ(Scalar::parse(Q, "4/6").to_string(), "2/3");
    EXPECT_EQ(Scalar::parse(Q, "-0/5").to_string(), "0");
    EXPECT_EQ(Scalar::parse(F5, "-1").to_string(), "4");
    EXPECT_EQ(Scalar::parse(F5, "1/2").to_string(), "3");
    EXPECT_EQ(Scalar::parse(Q2, "1/2*sqrt(2)").to_string(), "0+1/2*sqrt(2)");
    EXPECT_EQ(Scalar::parse(Q2, "3-sqrt(2)").to_string(), "3-1*sqrt(2)");
    EXPECT_EQ(Scalar::parse(Q2, "1+-2*sqrt(2)"), Scalar::from_parts(Q2, 1, -2));
    EXPECT_EQ(Scalar::parse(Q2, "-sqrt(2)"), Scalar::from_parts(Q2, 0, -1));
    EXPECT_THROW(Scalar::parse(Q2, "sqrt(3)"), ParseError);
    EXPECT_THROW(Scalar::parse(Q, "1/0"), DivisionByZero);
    EXPECT_THROW(Scalar::parse(Q, "abc"), ParseError);
    EXPECT_THROW(Scalar::parse(Q, "sqrt(2)"), ParseError);
}

TEST(Scalar, DivisionByZeroIsReported)
{
    EXPECT_THROW(Scalar::one(Q) / Scalar::zero(Q), DivisionByZero);
    EXPECT_FALSE(Scalar::zero(F5).try_inverse().has_value());
    EXPECT_THROW(Scalar::from_rational(F5, mpq_class(1, 5)), DivisionByZero);
}

TEST(Scalar, FieldMismatch)
{
    EXPECT_THROW(Scalar::one(Q) + Scalar::one(F5), FieldMismatch);
    EXPECT_THROW(Scalar::one(F5) * Scalar::one(FieldSpec::prime(7)), FieldMismatch);
}

TEST(Scalar, FieldAxiomsOnRandomInstances)
{
    std::mt19937_64 rng(11);
    for (const FieldSpec& f : {Q, F5, Q2, FieldSpec::prime(2), FieldSpec::prime(10007)}) {
        for (int trial = 0; trial < 200; ++trial) {
            Scalar a = random_scalar(f, rng), b = random_scalar(f, rng), c = random_scalar(f, rng);
            EXPECT_EQ(a + b, b + a);
            EXPECT_EQ(a * b, b * a);
            EXPECT_EQ((a + b) + c, a + (b + c));
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_EQ(a - a, Scalar::zero(f));
            if (!a.is_zero())
                EXPECT_EQ(a * a.inverse(), Scalar::one(f));
            Scalar acc = c;
            acc.add_product(a, b);
            EXPECT_EQ(acc, c + a * b);
        }
    }
}

TEST(Scalar, TextRoundTrip)
{
    std::mt19937_64 rng(12);
    for (const FieldSpec& f : {Q, F5, Q2, FieldSpec::quadratic(-7)})
        for (int trial = 0; trial < 100; ++trial) {
            Scalar a = random_scalar(f, rng);
            EXPECT_EQ(Scalar::parse(f, a.to_string()), a) << a.to_string();
        }
}

TEST(Scalar, QuadraticNorm)
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        Scalar x = random_scalar(Q2, rng);
        Scalar conj = Scalar::from_parts(Q2, x.rational_part(), -x.irrational_part());
        mpq_class expected = x.rational_part() * x.rational_part() - 2 * x.irrational_part() * x.irrational_part();
        EXPECT_EQ(x * conj, Scalar::from_rational(Q2, expected));
        EXPECT_EQ(x.norm(), expected);
    }
}

TEST(Scalar, SquareRoots)
{
    // Every square has a root, and the root squares back.
    std::mt19937_64 rng(14);
    for (const FieldSpec& f : {F5, FieldSpec::prime(7), FieldSpec::prime(10007), FieldSpec::prime(2), Q, Q2}) {
        for (int trial = 0; trial < 50; ++trial) {
            Scalar a = random_scalar(f, rng);
            auto r = (a * a).sqrt();
            ASSERT_TRUE(r.has_value());
            EXPECT_EQ(*r * *r, a * a);
        }
    }
    // sqrt(1/2) in Q(sqrt 2) is sqrt(2)/2; in F_7, 1/2 = 4 = 2^2.
    auto half_root = Scalar::from_rational(Q2, mpq_class(1, 2)).sqrt();
    ASSERT_TRUE(half_root.has_value());
    EXPECT_EQ(abs(half_root->irrational_part()), mpq_class(1, 2));
    EXPECT_EQ(half_root->rational_part(), 0);
    EXPECT_FALSE(Scalar::from_int(Q, 2).sqrt().has_value());
    EXPECT_FALSE(Scalar::from_int(F5, 2).sqrt().has_value());
    EXPECT_FALSE(Scalar::from_int(Q2, 3).sqrt().has_value());
    auto s7 = Scalar::from_int(FieldSpec::prime(7), 2).sqrt();
    ASSERT_TRUE(s7.has_value());
    EXPECT_TRUE(s7->residue() == 3 || s7->residue() == 4);
    // (1 + sqrt 2)^2 = 3 + 2 sqrt 2
    auto r = Scalar::from_parts(Q2, 3, 2).sqrt();
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(*r * *r, Scalar::from_parts(Q2, 3, 2));
}

TEST(Poly, MultiplicationExamples)
{
    Poly a = Poly::parse(Q, "1 + eps"), b = Poly::parse(Q, "1 - eps");
    EXPECT_EQ(a * b, Poly::parse(Q, "1 - eps^2"));
    EXPECT_TRUE((Poly(Q) * Poly::parse(Q, "3 + eps^5")).is_zero());
    // Over F_5: (2+3e)(4+e) = 8 + 14e + 3e^2 = 3 + 4e + 3e^2.
    EXPECT_EQ(Poly::parse(F5, "2 + 3*eps") * Poly::parse(F5, "4 + eps"), Poly::parse(F5, "3 + 4*eps + 3*eps^2"));
    EXPECT_THROW(Poly::parse(Q, "1") * Poly::parse(F5, "1"), FieldMismatch);
}

TEST(Poly, ProductMatchesDirectConvolution)
{
    std::mt19937_64 rng(21);
    for (const FieldSpec& f : {Q, F5, Q2})
        for (int trial = 0; trial < 50; ++trial) {
            Poly a = random_poly(f, rng, 5), b = random_poly(f, rng, 5);
            Poly c = a * b;
            for (std::size_t k = 0; k < 11; ++k) {
                Scalar s = Scalar::zero(f);
                for (std::size_t i = 0; i <= k; ++i)
                    s += a.coeff(i) * b.coeff(k - i);
                EXPECT_EQ(c.coeff(k), s);
            }
            if (!a.is_zero() && !b.is_zero()) {
                EXPECT_EQ(*c.degree(), *a.degree() + *b.degree());
                EXPECT_EQ(*c.valuation(), *a.valuation() + *b.valuation());
            }
        }
}

TEST(Poly, TruncateAndValuation)
{
    EXPECT_EQ(Poly::parse(Q, "1 + eps + eps^3").truncate(1), Poly::parse(Q, "1 + eps"));
    EXPECT_TRUE(Poly::parse(Q, "eps^2").truncate(1).is_zero());
    Poly a = Poly::parse(Q, "2 - eps + 7*eps^4");
    EXPECT_EQ(a.truncate(*a.degree()), a);
    EXPECT_EQ(poly_valuation(Poly::parse(Q, "eps^2 + eps^4")), 2u);
    EXPECT_FALSE(poly_valuation(Poly(Q)).has_value());
    EXPECT_EQ(poly_valuation(Poly::parse(Q, "7")), 0u);
    EXPECT_FALSE(Poly(Q).degree().has_value());

    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        Poly p = random_poly(F5, rng, 8);
        for (std::size_t d = 0; d < 6; ++d)
            EXPECT_EQ(p.truncate(d).truncate(d), p.truncate(d));
    }
}

TEST(Poly, TextRoundTrip)
{
    std::mt19937_64 rng(23);
    for (const FieldSpec& f : {Q, F5, Q2})
        for (int trial = 0; trial < 100; ++trial) {
            Poly p = random_poly(f, rng, 4);
            EXPECT_EQ(Poly::parse(f, p.to_string()), p) << p.to_string();
        }
    EXPECT_EQ(Poly::parse(Q, "-eps + 1/2*eps^3").to_string(), "-eps + 1/2*eps^3");
    EXPECT_EQ(Poly::parse(Q2, "(1+sqrt(2))*eps").to_string(), "(1+1*sqrt(2))*eps");
    EXPECT_THROW(Poly::parse(Q, "1 + eps^x"), ParseError);
    EXPECT_THROW(Poly::parse(Q, "(1 + eps"), ParseError);
}

TEST(Poly, DivisionAndGcd)
{
    std::mt19937_64 rng(24);
    for (const FieldSpec& f : {Q, F5})
        for (int trial = 0; trial < 50; ++trial) {
            Poly a = random_poly(f, rng, 6), b = random_poly(f, rng, 3);
            if (b.is_zero())
                continue;
            auto [q, r] = Poly::divmod(a, b);
            EXPECT_EQ(q * b + r, a);
            EXPECT_TRUE(r.is_zero() || *r.degree() < *b.degree());
            Poly c = random_poly(f, rng, 2);
            if (c.is_zero())
                continue;
            Poly g = Poly::gcd(a * c, b * c);
            EXPECT_TRUE(g.divides(a * c));
            EXPECT_TRUE(g.divides(b * c));
            EXPECT_TRUE(c.divides(g));
        }
}

TEST(Matrix, RankInverseNullspace)
{
    Matrix m = Matrix::from_ints(Q, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
    EXPECT_EQ(m.rank(), 2u);
    EXPECT_TRUE(m.det().is_zero());
    EXPECT_FALSE(m.try_inverse().has_value());
    auto ns = m.nullspace();
    ASSERT_EQ(ns.size(), 1u);
    for (const auto& x : m.apply(ns[0]))
        EXPECT_TRUE(x.is_zero());

    std::mt19937_64 rng(31);
    for (const FieldSpec& f : {Q, F5, Q2})
        for (int trial = 0; trial < 30; ++trial) {
            Matrix a(f, 4, 4);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    a(i, j) = random_scalar(f, rng);
            auto inv = a.try_inverse();
            EXPECT_EQ(inv.has_value(), !a.det().is_zero());
            EXPECT_EQ(a.rank() == 4, inv.has_value());
            if (inv)
                EXPECT_EQ(a * *inv, Matrix::identity(f, 4));
            EXPECT_EQ(a.rank() + a.nullspace().size(), 4u);
            EXPECT_EQ(a.rank(), a.transpose().rank());
        }
}

TEST(Matrix, KroneckerRankIsMultiplicative)
{
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix a(F5, 3, 2), b(F5, 2, 3);
        for (std::size_t i = 0; i < 6; ++i) {
            a(i / 2, i % 2) = random_scalar(F5, rng);
            b(i / 3, i % 3) = random_scalar(F5, rng);
        }
        EXPECT_EQ(kron(a, b).rank(), a.rank() * b.rank());
    }
}
