#include <random>

#include <gtest/gtest.h>

#include "tensorrank/transform.hpp"

using namespace tensorrank;

namespace {

const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F2 = FieldSpec::prime(2);
const FieldSpec F3 = FieldSpec::prime(3);
const FieldSpec F5 = FieldSpec::prime(5);
const FieldSpec F7 = FieldSpec::prime(7);
const FieldSpec Q2 = FieldSpec::quadratic(2);

Tensor b2_cube(const FieldSpec& f)
{
    Tensor t(f, Shape({2, 2, 2}));
    t.at({1, 1, 1}) = Scalar::one(f);
    return t;
}

// Independent check of an expansion: at eps = x the evaluated maps must give
// sum_a x^a coefficient_a.
void expect_expansion_consistent(const Degeneration& g, const Tensor& source, const Expansion& ex)
{
    for (long x : {1L, 2L, 3L, -1L}) {
        Scalar at = Scalar::from_int(g.field, x);
        Restriction r{g.field, g.source, g.target, {}};
        for (const auto& m : g.maps)
            r.maps.push_back(m.eval(at));
        Tensor expected(g.field, g.target);
        for (std::size_t a = 0; a < ex.coefficients.size(); ++a)
            expected += at.pow(a) * ex.coefficients[a];
        EXPECT_EQ(apply_restriction(r, source), expected);
    }
}

Degeneration random_degeneration(const FieldSpec& f, std::mt19937_64& rng, std::size_t k, std::size_t d)
{
    std::uniform_int_distribution<long> v(0, static_cast<long>(f.modulus()) - 1);
    std::uniform_int_distribution<std::size_t> extra(0, 3), dim(1, 2);
    // Lowest eps-power per leg, summing to d.
    std::vector<std::size_t> low(k, 0);
    for (std::size_t i = 0; i < d; ++i)
        ++low[std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)];
    Degeneration g;
    g.field = f;
    std::vector<std::size_t> src, tgt;
    for (std::size_t i = 0; i < k; ++i) {
        src.push_back(2);
        tgt.push_back(dim(rng));
    }
    g.source = Shape(src);
    g.target = Shape(tgt);
    for (std::size_t i = 0; i < k; ++i) {
        PolyMatrix m(f, tgt[i], 2);
        for (std::size_t r = 0; r < tgt[i]; ++r)
            for (std::size_t c = 0; c < 2; ++c) {
                std::vector<Scalar> coeffs;
                std::size_t top = d + extra(rng);
                for (std::size_t a = 0; a <= top; ++a)
                    coeffs.push_back(a < low[i] ? Scalar::zero(f) : Scalar::from_int(f, v(rng)));
                m(r, c) = Poly(f, coeffs);
            }
        g.maps.push_back(m);
    }
    return g;
}

} // namespace

TEST(Restriction, Basics)
{
    Tensor t = w_tensor(Q, 3);
    Restriction id{Q, t.shape(), t.shape(), {Matrix::identity(Q, 2), Matrix::identity(Q, 2), Matrix::identity(Q, 2)}};
    EXPECT_EQ(apply_restriction(id, t), t);

    Matrix proj(Q, 2, 3);
    proj(0, 0) = proj(1, 1) = Scalar::one(Q);
    Restriction p{Q, Shape({3, 3, 3}), Shape({2, 2, 2}), {proj, proj, proj}};
    EXPECT_EQ(apply_restriction(p, unit_tensor(Q, 3, 3)), unit_tensor(Q, 2, 3));

    Restriction bad{Q, Shape({3, 3, 3}), Shape({2, 2, 2}), {proj, proj}};
    EXPECT_THROW(apply_restriction(bad, unit_tensor(Q, 3, 3)), ShapeError);
}

TEST(Degeneration, WCertificate)
{
    for (std::size_t k = 3; k <= 6; ++k)
        for (const FieldSpec& f : {Q, F2, F5}) {
            Degeneration g = w_degeneration(f, k);
            Tensor src = unit_tensor(f, 2, k);
            Expansion ex = apply_degeneration(g, src);
            EXPECT_EQ(ex.d, 1u);
            EXPECT_EQ(ex.e, k - 1);
            EXPECT_EQ(ex.leading(), w_tensor(f, k));
            Tensor top(f, src.shape());
            top.at(std::vector<std::size_t>(k, 1)) = Scalar::one(f);
            EXPECT_EQ(ex.coefficients[k], top);
            EXPECT_TRUE(verify_degeneration(g, src, w_tensor(f, k)).ok);
            expect_expansion_consistent(g, src, ex);
        }
}

TEST(Degeneration, StrassenCertificate)
{
    for (std::size_t q = 1; q <= 7; ++q)
        for (std::size_t k = 3; k <= 4; ++k) {
            Degeneration g = strassen_degeneration(Q, q, k);
            Tensor src = unit_tensor(Q, q + 1, k);
            Expansion ex = apply_degeneration(g, src);
            EXPECT_EQ(ex.d, 1u);
            EXPECT_EQ(ex.e, 1u);
            EXPECT_EQ(ex.leading(), strassen_tensor(Q, q, k));
            if (q <= 3)
                expect_expansion_consistent(g, src, ex);
        }
}

TEST(Degeneration, ConstantMapsAreRestrictions)
{
    Degeneration g{Q, Shape({2, 2, 2}), Shape({2, 2, 2}), {}, 0, 0};
    for (int i = 0; i < 3; ++i)
        g.maps.emplace_back(Matrix::identity(Q, 2));
    Expansion ex = apply_degeneration(g, w_tensor(Q, 3));
    EXPECT_EQ(ex.d, 0u);
    EXPECT_EQ(ex.e, 0u);
    EXPECT_EQ(ex.leading(), w_tensor(Q, 3));
}

TEST(Degeneration, VerificationRejectsBadClaims)
{
    Degeneration g = w_degeneration(Q, 3);
    Tensor src = unit_tensor(Q, 2, 3), tgt = w_tensor(Q, 3);
    Degeneration wrong_d = g;
    wrong_d.claimed_d = 2;
    EXPECT_FALSE(verify_degeneration(wrong_d, src, tgt).ok);
    Degeneration small_e = g;
    small_e.claimed_e = 1;
    auto res = verify_degeneration(small_e, src, tgt);
    EXPECT_FALSE(res.ok);
    EXPECT_EQ(res.e, 2u);
    Degeneration tampered = g;
    tampered.maps[0](0, 1) = Poly::parse(Q, "2");
    res = verify_degeneration(tampered, src, tgt);
    EXPECT_FALSE(res.ok);
    EXPECT_TRUE(res.mismatch_index.has_value());
    Degeneration zero = g;
    zero.maps[1] = PolyMatrix(Q, 2, 2);
    EXPECT_THROW(apply_degeneration(zero, src), InvalidCertificate);
    EXPECT_FALSE(verify_degeneration(zero, src, tgt).ok);
}

TEST(Degeneration, ProductDegreesAdd)
{
    Degeneration g = w_degeneration(Q, 3);
    Degeneration gg = degeneration_product(g, g, ProductMode::tensor);
    EXPECT_EQ(gg.claimed_d, 2u);
    EXPECT_EQ(gg.claimed_e, 4u);
    Tensor src = tensor_product(unit_tensor(Q, 2, 3), unit_tensor(Q, 2, 3));
    Expansion ex = apply_degeneration(gg, src);
    EXPECT_EQ(ex.d, 2u);
    EXPECT_EQ(ex.e, 4u);
    EXPECT_EQ(ex.leading(), tensor_product(w_tensor(Q, 3), w_tensor(Q, 3)));

    Degeneration gk = degeneration_product(g, g, ProductMode::kronecker);
    Expansion exk = apply_degeneration(gk, kronecker_product(unit_tensor(Q, 2, 3), unit_tensor(Q, 2, 3)));
    EXPECT_EQ(exk.d, 2u);
    EXPECT_EQ(exk.leading(), kronecker_product(w_tensor(Q, 3), w_tensor(Q, 3)));

    Degeneration id{Q, Shape({2, 2}), Shape({2, 2}), {PolyMatrix(Matrix::identity(Q, 2)), PolyMatrix(Matrix::identity(Q, 2))}, 0, 0};
    Degeneration gi = degeneration_product(g, id, ProductMode::tensor);
    Expansion exi = apply_degeneration(gi, tensor_product(unit_tensor(Q, 2, 3), unit_tensor(Q, 2, 2)));
    EXPECT_EQ(exi.d, 1u);
    EXPECT_EQ(exi.e, 2u);
    EXPECT_THROW(degeneration_product(g, id, ProductMode::kronecker), ShapeError);
}

TEST(Degeneration, StrassenSquaredProduct)
{
    const FieldSpec f = FieldSpec::prime(10007);
    Degeneration g = strassen_degeneration(f, 7, 3);
    Degeneration gg = degeneration_product(g, g, ProductMode::tensor);
    Tensor src = tensor_product(unit_tensor(f, 8, 3), unit_tensor(f, 8, 3));
    Expansion ex = apply_degeneration(gg, src);
    EXPECT_EQ(ex.d, 2u);
    EXPECT_EQ(ex.e, 2u);
    Tensor s = strassen_tensor(f, 7, 3);
    EXPECT_EQ(ex.leading(), tensor_product(s, s));
}

TEST(Truncation, PreservesLeadingCoefficient)
{
    std::mt19937_64 rng(41);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t k = 3 + trial % 2, d = trial % 4;
        Degeneration g = random_degeneration(F5, rng, k, d);
        Tensor src = unit_tensor(F5, 2, k);
        Expansion ex;
        try {
            ex = apply_degeneration(g, src);
        } catch (const InvalidCertificate&) {
            continue;
        }
        g.claimed_d = ex.d;
        g.claimed_e = ex.e;
        Degeneration t = truncate_degeneration(g, src);
        EXPECT_LE(t.max_entry_degree(), ex.d);
        Expansion tex = apply_degeneration(t, src);
        EXPECT_EQ(tex.d, ex.d);
        EXPECT_EQ(tex.leading(), ex.leading());
        EXPECT_LE(tex.e, (k - 1) * ex.d);
        EXPECT_EQ(t.claimed_e, tex.e);
        EXPECT_EQ(truncate_degeneration(t, src).maps, t.maps);
        ++checked;
    }
    EXPECT_GT(checked, 40);
}

TEST(Truncation, RejectsUnverified)
{
    Degeneration g = w_degeneration(Q, 3);
    g.claimed_d = 0;
    EXPECT_THROW(truncate_degeneration(g, unit_tensor(Q, 2, 3)), InvalidCertificate);
}

TEST(Interpolation, WeightsInterpolateZero)
{
    // sum_j beta_j alpha_j^m = [m == 0] for m <= e.
    std::vector<Scalar> a{Scalar::from_int(Q, 2), Scalar::from_int(Q, -3), Scalar::from_int(Q, 5), Scalar::from_int(Q, 7)};
    auto beta = interpolation_weights(a);
    for (std::size_t m = 0; m < a.size(); ++m) {
        Scalar s = Scalar::zero(Q);
        for (std::size_t j = 0; j < a.size(); ++j)
            s += beta[j] * a[j].pow(m);
        EXPECT_EQ(s, Scalar::from_int(Q, m == 0 ? 1 : 0));
    }
}

TEST(Interpolation, RoundTripForW)
{
    for (std::size_t k = 3; k <= 4; ++k)
        for (const FieldSpec& f : {Q, F5, F7}) {
            if (f.cardinality() && *f.cardinality() < k + 1)
                continue;
            Degeneration g = w_degeneration(f, k);
            Tensor src = kronecker_product(unit_tensor(f, 2, k), unit_tensor(f, k, k));
            std::vector<std::vector<long>> choices{{1, 2, 3, 4}, {4, 3, 2, 1}, {1, 3, 4, 2}, {2, 4, 1, 3}};
            for (auto c : choices) {
                c.resize(k);
                std::vector<Scalar> alphas;
                for (long x : c)
                    alphas.push_back(Scalar::from_int(f, x));
                Restriction r = interpolate_to_restriction(g, alphas);
                EXPECT_EQ(r.source, src.shape());
                EXPECT_EQ(apply_restriction(r, src), w_tensor(f, k));
            }
            EXPECT_EQ(apply_restriction(interpolate_to_restriction(g), src), w_tensor(f, k));
        }
}

TEST(Interpolation, SinglePointIsRestriction)
{
    Degeneration g{Q, Shape({2, 2, 2}), Shape({2, 2, 2}), {}, 0, 0};
    for (int i = 0; i < 3; ++i)
        g.maps.emplace_back(Matrix::identity(Q, 2));
    Restriction r = interpolate_to_restriction(g);
    EXPECT_EQ(r.maps[0], Matrix::identity(Q, 2));
    EXPECT_EQ(apply_restriction(r, w_tensor(Q, 3)), w_tensor(Q, 3));
}

TEST(Interpolation, StrassenRoundTrip)
{
    for (std::size_t q = 1; q <= 3; ++q) {
        Degeneration g = strassen_degeneration(F5, q, 3);
        Tensor src = kronecker_product(unit_tensor(F5, q + 1, 3), unit_tensor(F5, 2, 3));
        EXPECT_EQ(apply_restriction(interpolate_to_restriction(g), src), strassen_tensor(F5, q, 3));
    }
}

TEST(Interpolation, Errors)
{
    Degeneration g = w_degeneration(F3, 3);
    EXPECT_THROW(interpolate_to_restriction(g), FieldTooSmall);
    Degeneration h = w_degeneration(Q, 3);
    std::vector<Scalar> dup{Scalar::from_int(Q, 1), Scalar::from_int(Q, 1), Scalar::from_int(Q, 2)};
    EXPECT_THROW(interpolate_to_restriction(h, dup), InvalidArgument);
    std::vector<Scalar> zero{Scalar::from_int(Q, 0), Scalar::from_int(Q, 1), Scalar::from_int(Q, 2)};
    EXPECT_THROW(interpolate_to_restriction(h, zero), InvalidArgument);
    std::vector<Scalar> few{Scalar::from_int(Q, 1)};
    EXPECT_THROW(interpolate_to_restriction(h, few), InvalidArgument);
}

TEST(Interpolation, RandomDegenerationsRoundTrip)
{
    std::mt19937_64 rng(42);
    const FieldSpec f = FieldSpec::prime(101);
    for (int trial = 0; trial < 20; ++trial) {
        Degeneration g = random_degeneration(f, rng, 3, trial % 3);
        Tensor src = unit_tensor(f, 2, 3);
        Expansion ex = apply_degeneration(g, src);
        g.claimed_d = ex.d;
        g.claimed_e = ex.e;
        Tensor big = kronecker_product(src, unit_tensor(f, ex.e + 1, 3));
        for (long shift : {1L, 10L, 50L}) {
            std::vector<Scalar> alphas;
            for (std::size_t j = 0; j <= ex.e; ++j)
                alphas.push_back(Scalar::from_int(f, shift + static_cast<long>(j)));
            EXPECT_EQ(apply_restriction(interpolate_to_restriction(g, alphas), big), ex.leading());
        }
    }
}

TEST(Chi, RestrictionOverSmallField)
{
    Degeneration g = truncate_degeneration(w_degeneration(F2, 3), unit_tensor(F2, 2, 3));
    Restriction r = chi_restriction(g);
    Tensor src = kronecker_product(unit_tensor(F2, 2, 3), chi_tensor(F2, 1, 3));
    EXPECT_EQ(apply_restriction(r, src), w_tensor(F2, 3));
    EXPECT_EQ(chi_tensor(F2, 1, 3).nonzero_count(), 3u);
}

TEST(Chi, DegreeZeroAndErrors)
{
    Degeneration g{Q, Shape({2, 2, 2}), Shape({2, 2, 2}), {}, 0, 0};
    for (int i = 0; i < 3; ++i)
        g.maps.emplace_back(Matrix::identity(Q, 2));
    Restriction r = chi_restriction(g);
    EXPECT_EQ(apply_restriction(r, kronecker_product(w_tensor(Q, 3), chi_tensor(Q, 0, 3))), w_tensor(Q, 3));

    Degeneration high = w_degeneration(Q, 3);
    high.maps[0](0, 0) = Poly::parse(Q, "1 + eps^2");
    EXPECT_THROW(chi_restriction(high), InvalidArgument);
}

TEST(Chi, AgreesWithLagrange)
{
    std::mt19937_64 rng(43);
    const FieldSpec f = FieldSpec::prime(31);
    for (int trial = 0; trial < 15; ++trial) {
        Degeneration g = random_degeneration(f, rng, 3, 1 + trial % 2);
        Tensor src = unit_tensor(f, 2, 3);
        Expansion ex = apply_degeneration(g, src);
        g.claimed_d = ex.d;
        g.claimed_e = ex.e;
        Degeneration t = truncate_degeneration(g, src);
        Tensor via_chi = apply_restriction(chi_restriction(t), kronecker_product(src, chi_tensor(f, t.claimed_d, 3)));
        Tensor via_lagrange =
            apply_restriction(interpolate_to_restriction(t), kronecker_product(src, unit_tensor(f, t.claimed_e + 1, 3)));
        EXPECT_EQ(via_chi, ex.leading());
        EXPECT_EQ(via_lagrange, ex.leading());
    }
}

TEST(Power, WSquared)
{
    for (const FieldSpec& f : {Q, F7}) {
        Decomposition dec = power_decomposition(w_degeneration(f, 3), 2);
        EXPECT_LE(dec.size(), 20u);
        EXPECT_EQ(eval_decomposition(dec), tensor_product(w_tensor(f, 3), w_tensor(f, 3)));
    }
    // A different choice of points changes the terms, not the value.
    std::vector<Scalar> alphas;
    for (long x : {3, 5, 7, 11, 13})
        alphas.push_back(Scalar::from_int(Q, x));
    Decomposition other = power_decomposition(w_degeneration(Q, 3), 2, alphas);
    EXPECT_EQ(eval_decomposition(other), tensor_product(w_tensor(Q, 3), w_tensor(Q, 3)));
}

TEST(Power, BoundsHold)
{
    for (std::size_t k = 3; k <= 4; ++k)
        for (std::size_t n = 1; n <= 2; ++n) {
            Degeneration g = w_degeneration(Q, k);
            Decomposition dec = power_decomposition(g, n);
            std::size_t r_n = 1;
            for (std::size_t i = 0; i < n; ++i)
                r_n *= 2;
            EXPECT_LE(dec.size(), (n * (k - 1) + 1) * r_n);
        }
    Decomposition s = power_decomposition(strassen_degeneration(F7, 2, 3), 2);
    EXPECT_LE(s.size(), 27u);
}

TEST(Power, RestrictionCaseGivesUnitTerms)
{
    Degeneration g{Q, Shape({3, 3, 3}), Shape({3, 3, 3}), {}, 0, 0};
    for (int i = 0; i < 3; ++i)
        g.maps.emplace_back(Matrix::identity(Q, 3));
    Decomposition dec = power_decomposition(g, 1);
    EXPECT_EQ(dec.size(), 3u);
    EXPECT_EQ(eval_decomposition(dec), unit_tensor(Q, 3, 3));
}

TEST(Power, FieldTooSmall)
{
    EXPECT_THROW(power_decomposition(w_degeneration(F5, 3), 2), FieldTooSmall);
}

TEST(Certificates, TwoTerm)
{
    Decomposition d = two_term_w3_plus(Scalar::one(Q));
    EXPECT_EQ(d.size(), 2u);
    EXPECT_EQ(eval_decomposition(d), w_tensor(Q, 3) + b2_cube(Q));
    Scalar c = Scalar::from_int(Q2, 2);
    EXPECT_EQ(eval_decomposition(two_term_w3_plus(c)), w_tensor(Q2, 3) + c * b2_cube(Q2));
    EXPECT_THROW(two_term_w3_plus(Scalar::from_int(Q, 2)), InvalidArgument);
    EXPECT_THROW(two_term_w3_plus(Scalar::one(F2)), InvalidArgument);
}

TEST(Certificates, WSquaredEightTerms)
{
    for (const FieldSpec& f : {Q2, F7}) {
        Decomposition d = w3_squared_decomposition(f);
        EXPECT_EQ(d.size(), 8u);
        EXPECT_TRUE(verify_decomposition(d, tensor_product(w_tensor(f, 3), w_tensor(f, 3))).ok);
    }
    EXPECT_THROW(w3_squared_decomposition(Q), InvalidArgument);
    EXPECT_THROW(w3_squared_decomposition(F5), InvalidArgument);
}

TEST(Certificates, Matmul224)
{
    for (const FieldSpec& f : {Q, F2}) {
        Decomposition d = matmul224_decomposition(f);
        EXPECT_EQ(d.size(), 14u);
        EXPECT_TRUE(verify_decomposition(d, matmul_tensor(f, 2, 2, 4)).ok);
        EXPECT_EQ(trivial_matmul_decomposition(f, 2, 2, 4).size(), 16u);
    }
    Decomposition tampered = matmul224_decomposition(Q);
    auto terms = tampered.terms();
    terms.pop_back();
    Decomposition short_dec(Q, tampered.shape(), terms);
    auto res = verify_decomposition(short_dec, matmul_tensor(Q, 2, 2, 4));
    EXPECT_FALSE(res.ok);
    EXPECT_TRUE(res.mismatch_index.has_value());
}
