#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "tensorrank/tensor.hpp"

namespace tensorrank {

/// Rank of the best single-leg flattening; a border rank lower bound.
std::size_t flattening_lower_bound(const Tensor& t);

/// Linear map F from the full tensor space to a matrix space, with a
/// caller-certified maximum rank of F on simple tensors. Either a leg
/// grouping (denominator 1) or an explicit matrix acting on the row-major
/// vectorization of the tensor.
class FlatteningMap {
public:
    /// Rows indexed by `row_legs`, columns by the remaining legs.
    static FlatteningMap grouping(std::vector<std::size_t> row_legs);
    /// `matrix` has out_rows * out_cols rows; output entry (i, j) is row
    /// i * out_cols + j of matrix * vec(t).
    static FlatteningMap explicit_map(Matrix matrix, std::size_t out_rows, std::size_t out_cols,
                                      std::size_t denominator);

    bool is_grouping() const { return !matrix_.has_value(); }
    const std::vector<std::size_t>& row_legs() const { return row_legs_; }
    std::size_t denominator() const { return denominator_; }

    Matrix apply(const Tensor& t) const;

    /// The map F1 (kron) F2 acting on t1 (x) t2, where t1 has order k1.
    static FlatteningMap product(const FlatteningMap& f1, std::size_t k1, const Shape& s1, const FlatteningMap& f2,
                                 const Shape& s2);

private:
    std::vector<std::size_t> row_legs_;
    std::optional<Matrix> matrix_;
    std::size_t out_rows_ = 0;
    std::size_t out_cols_ = 0;
    std::size_t denominator_ = 1;
};

/// rank(F(t)) / denominator, exactly.
mpq_class generalized_flattening_bound(const Tensor& t, const FlatteningMap& f);

struct ProductBound {
    mpq_class bound;
    std::size_t rank1 = 0;
    std::size_t rank2 = 0;
    std::size_t rank_product = 0;
    /// rank((F1 kron F2)(t1 (x) t2)) == rank(F1(t1)) * rank(F2(t2)).
    bool consistent = false;
};

/// Product of the two quotients, a border rank lower bound for t1 (x) t2.
ProductBound flattening_product_bound(const Tensor& t1, const FlatteningMap& f1, const Tensor& t2,
                                      const FlatteningMap& f2);

/// Ceiling of a nonnegative rational.
std::size_t ceil_to_size(const mpq_class& q);

struct SubstitutionResult {
    std::size_t bound = 0;
    /// False when the search budget ran out and the flattening bound was
    /// returned instead.
    bool exhaustive = true;
    std::size_t nodes = 0;
};

/// Recursive slice substitution over a prime field for order-3 tensors:
/// LB(t) = max(flattening, 1 + min_c LB(t with slices T_i + c_i T_s)),
/// minimized over all c in F_p^{a-1}. Throws InvalidArgument outside prime
/// fields or order 3.
SubstitutionResult substitution_lower_bound(const Tensor& t, std::size_t node_budget = 2'000'000);

struct BruteForceResult {
    /// nullopt if the rank exceeds rmax.
    std::optional<std::size_t> rank;
    /// A decomposition with `*rank` terms when the rank was found.
    std::optional<Decomposition> witness;
};

/// Exact rank over a prime field by exhaustive search: the rank is the least
/// r such that some r-dimensional space spanned by simple tensors of the
/// remaining legs contains every slice along a chosen leg. Throws
/// BudgetExceeded when the search would exceed `budget` elementary steps.
BruteForceResult brute_force_rank(const Tensor& t, std::size_t rmax, std::uint64_t budget = 4'000'000'000ULL);

enum class LowerMethod { flattening, substitution, brute_force, pencil };

struct RankBoundReport {
    std::optional<std::size_t> upper;
    mpq_class lower = 0;
    std::size_t lower_int = 0;
    std::vector<std::string> methods;
    bool determined = false;
};

/// Upper bound from a verified decomposition, lower bound as the best of the
/// selected methods. Throws InvalidCertificate if dec does not evaluate to t
/// and Error if the bounds contradict each other.
RankBoundReport certify_rank(const Tensor& t, const std::optional<Decomposition>& dec,
                             const std::vector<LowerMethod>& methods,
                             const std::vector<mpq_class>& extra_lower = {});

} // namespace tensorrank
