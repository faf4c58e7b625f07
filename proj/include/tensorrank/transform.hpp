#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tensorrank/tensor.hpp"

namespace tensorrank {

/// Leg maps A_i : U_i -> V_i, each stored as a dim(V_i) x dim(U_i) matrix.
struct Restriction {
    FieldSpec field;
    Shape source;
    Shape target;
    std::vector<Matrix> maps;

    /// Throws ShapeError unless the maps match the shapes legwise.
    void validate() const;
};

/// Leg maps A_i(eps) together with the claimed approximation degree d and
/// error degree e. The claims are advisory: verification recomputes them.
struct Degeneration {
    FieldSpec field;
    Shape source;
    Shape target;
    std::vector<PolyMatrix> maps;
    std::size_t claimed_d = 0;
    std::size_t claimed_e = 0;

    void validate() const;
    /// Largest degree among all map entries.
    std::size_t max_entry_degree() const;
};

/// Full eps-expansion of (A_1(eps) x ... x A_k(eps)) t.
struct Expansion {
    /// coefficients[a] is the eps^a coefficient, up to the top degree.
    std::vector<Tensor> coefficients;
    std::size_t d = 0;
    std::size_t e = 0;

    const Tensor& leading() const { return coefficients[d]; }
};

/// Outcome of checking a certificate against a claimed target.
struct VerifyResult {
    bool ok = false;
    std::string message;
    std::optional<std::size_t> d;
    std::optional<std::size_t> e;
    /// First mismatching entry (0-based) and, for degenerations, its degree.
    std::optional<std::vector<std::size_t>> mismatch_index;
    std::optional<std::size_t> mismatch_degree;
};

Tensor apply_restriction(const Restriction& r, const Tensor& t);
/// Throws InvalidCertificate if the result is identically zero.
Expansion apply_degeneration(const Degeneration& g, const Tensor& t);

VerifyResult verify_restriction(const Restriction& r, const Tensor& source, const Tensor& target);
/// Checks that the eps^d coefficient equals target, that d equals the
/// claimed d and that the computed e does not exceed the claimed e.
VerifyResult verify_degeneration(const Degeneration& g, const Tensor& source, const Tensor& target);
VerifyResult verify_decomposition(const Decomposition& dec, const Tensor& target);

enum class ProductMode { tensor, kronecker };

/// Legwise product of two degenerations; claimed degrees add.
Degeneration degeneration_product(const Degeneration& g1, const Degeneration& g2, ProductMode mode);
/// n-fold tensor power of a degeneration.
Degeneration degeneration_power(const Degeneration& g, std::size_t n);

/// Verifies g against `source`, cuts every map entry to degree <= d and
/// records the recomputed error degree (at most (k-1)d).
Degeneration truncate_degeneration(const Degeneration& g, const Tensor& source);

/// Lagrange interpolation at alphas (default 1, 2, .., e+1) giving a
/// restriction from source (kron) unit(e+1, k) to the target. Uses the
/// claimed degrees, so verify g first. Throws FieldTooSmall when the field
/// has fewer than e+2 elements and InvalidArgument for zero or repeated
/// alphas.
Restriction interpolate_to_restriction(const Degeneration& g,
                                       const std::optional<std::vector<Scalar>>& alphas = std::nullopt);

/// Interpolation weights beta_j = prod_{m != j} alpha_m / (alpha_m - alpha_j).
std::vector<Scalar> interpolation_weights(const std::vector<Scalar>& alphas);

/// Restriction from source (kron) chi_d(k) to the target extracting the eps^d
/// coefficient directly. Needs every entry degree <= claimed d.
Restriction chi_restriction(const Degeneration& g);

/// Decomposition of target^{(x)n} with at most (ne+1) r^n terms, where g
/// degenerates unit(r, k) to the target with error degree e. g is verified
/// first; the result is evaluated and checked before it is returned.
Decomposition power_decomposition(const Degeneration& g, std::size_t n,
                                  const std::optional<std::vector<Scalar>>& alphas = std::nullopt);

/// unit(2, k) degenerates to W_k with (d, e) = (1, k-1).
Degeneration w_degeneration(const FieldSpec& field, std::size_t k);
/// unit(q+1, k) degenerates to Str_q^k with (d, e) = (1, 1).
Degeneration strassen_degeneration(const FieldSpec& field, std::size_t q, std::size_t k);
/// Two-term decomposition of W_3 + c b_2^{(x)3}. Needs sqrt(c) in the field
/// and characteristic other than 2.
Decomposition two_term_w3_plus(const Scalar& c);
/// Eight-term decomposition of W_3 (x) W_3; needs sqrt(1/2).
Decomposition w3_squared_decomposition(const FieldSpec& field);
/// Fourteen products for <2,2,4> from two Strassen blocks.
Decomposition matmul224_decomposition(const FieldSpec& field);

} // namespace tensorrank
