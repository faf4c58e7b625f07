#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tensorrank/matrix.hpp"

namespace tensorrank {

/// Per-leg dimensions of a tensor; order >= 1 and every dimension >= 1.
class Shape {
public:
    Shape() = default;
    Shape(std::vector<std::size_t> dims);
    Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t order() const { return dims_.size(); }
    std::size_t operator[](std::size_t leg) const { return dims_[leg]; }
    /// Number of entries.
    std::size_t size() const;
    /// Row-major offset of a 0-based multi-index.
    std::size_t offset(const std::vector<std::size_t>& index) const;
    std::vector<std::size_t> unravel(std::size_t offset) const;
    std::string to_string() const;

    friend bool operator==(const Shape&, const Shape&) = default;

private:
    std::vector<std::size_t> dims_;
};

/// Dense tensor with exact entries, row-major. The public API uses 0-based
/// indices; the JSON and text formats use 1-based indices.
class Tensor {
public:
    Tensor() = default;
    /// Zero tensor.
    Tensor(const FieldSpec& field, const Shape& shape);
    Tensor(const FieldSpec& field, const Shape& shape, std::vector<Scalar> data);

    const FieldSpec& field() const { return field_; }
    const Shape& shape() const { return shape_; }
    std::size_t order() const { return shape_.order(); }
    const std::vector<Scalar>& data() const { return data_; }

    Scalar& operator[](std::size_t offset) { return data_[offset]; }
    const Scalar& operator[](std::size_t offset) const { return data_[offset]; }
    Scalar& at(const std::vector<std::size_t>& index) { return data_[shape_.offset(index)]; }
    const Scalar& at(const std::vector<std::size_t>& index) const { return data_[shape_.offset(index)]; }

    bool is_zero() const;
    std::size_t nonzero_count() const;
    /// (0-based index, value) for every nonzero entry in row-major order.
    std::vector<std::pair<std::vector<std::size_t>, Scalar>> nonzeros() const;

    Tensor& operator+=(const Tensor& rhs);
    Tensor& operator-=(const Tensor& rhs);
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(const Scalar& s, Tensor t);

    /// Applies `m` (new_dim x dims[leg]) to one leg.
    Tensor mode_product(std::size_t leg, const Matrix& m) const;

    /// Order-(k-1) slice with leg `leg` fixed at `index`.
    Tensor slice(std::size_t leg, std::size_t index) const;
    /// Slice of an order-3 tensor as a matrix over the two remaining legs.
    Matrix slice_matrix(std::size_t leg, std::size_t index) const;

    std::string to_string() const;

    friend bool operator==(const Tensor& a, const Tensor& b);
    friend bool operator!=(const Tensor& a, const Tensor& b) { return !(a == b); }

private:
    FieldSpec field_;
    Shape shape_;
    std::vector<Scalar> data_;
};

/// Builds a tensor from 1-based (index, value) pairs.
Tensor tensor_from_entries(const FieldSpec& field, const Shape& shape,
                           const std::vector<std::pair<std::vector<std::size_t>, Scalar>>& entries);

/// Order-1 tensor with the given entries.
Tensor vector_tensor(const FieldSpec& field, const Vector& v);

/// (a (x) b)[i, j] = a[i] * b[j]; orders add.
Tensor tensor_product(const Tensor& a, const Tensor& b);
/// Legwise Kronecker product: leg i has dimension dim_a[i] * dim_b[i] and
/// index i_a * dim_b[i] + i_b.
Tensor kronecker_product(const Tensor& a, const Tensor& b);
/// The same product computed as group_legs(tensor_product(a, b), {{0,k},{1,k+1},...}).
Tensor kronecker_product_by_grouping(const Tensor& a, const Tensor& b);
/// Merges legs according to an ordered partition of {0..k-1}; within a part
/// the listed legs are combined in row-major order.
Tensor group_legs(const Tensor& t, const std::vector<std::vector<std::size_t>>& partition);
/// Reorders legs: leg i of the result is leg perm[i] of t.
Tensor permute_legs(const Tensor& t, const std::vector<std::size_t>& perm);
/// Block-diagonal sum sharing the first leg; legs 2..k add up.
Tensor direct_sum_shared_first_leg(const std::vector<Tensor>& ts);
/// Matrix of t with the listed legs as rows and the remaining legs as columns.
Matrix flatten(const Tensor& t, const std::vector<std::size_t>& row_legs);

Tensor unit_tensor(const FieldSpec& field, std::size_t r, std::size_t k);
/// W_k: ones at the indices containing exactly one 2 (1-based).
Tensor w_tensor(const FieldSpec& field, std::size_t k);
/// Str_q^k = sum_{i=2}^{q+1} b_i b_i b_1 b_1.. + b_1 b_i b_i b_1..
Tensor strassen_tensor(const FieldSpec& field, std::size_t q, std::size_t k);
/// <n1,n2,n3> with legs (i1,i2), (i2,i3), (i3,i1) flattened row-major.
Tensor matmul_tensor(const FieldSpec& field, std::size_t n1, std::size_t n2, std::size_t n3);
/// chi_d(k): ones at (a_1,..,a_k) with sum a_i = d, each leg of dimension d+1.
Tensor chi_tensor(const FieldSpec& field, std::size_t d, std::size_t k);

/// Outer product of one vector per leg.
struct SimpleTensor {
    std::vector<Vector> factors;
};

class Decomposition {
public:
    Decomposition() = default;
    Decomposition(const FieldSpec& field, const Shape& shape) : field_(field), shape_(shape) {}
    Decomposition(const FieldSpec& field, const Shape& shape, std::vector<SimpleTensor> terms);

    const FieldSpec& field() const { return field_; }
    const Shape& shape() const { return shape_; }
    const std::vector<SimpleTensor>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Throws ShapeError if the factor lengths do not match the shape.
    void add(SimpleTensor term);

private:
    FieldSpec field_;
    Shape shape_;
    std::vector<SimpleTensor> terms_;
};

/// Sum of the outer products of all terms.
Tensor eval_decomposition(const Decomposition& dec);
/// Expansion of a single simple tensor.
Tensor eval_simple(const FieldSpec& field, const SimpleTensor& term);
/// Termwise tensor product: a decomposition of a (x) b with |a||b| terms.
Decomposition decomposition_tensor_product(const Decomposition& a, const Decomposition& b);
/// r-term decomposition sum_i b_i^{(x)k} of unit_tensor(r, k).
Decomposition unit_decomposition(const FieldSpec& field, std::size_t r, std::size_t k);
/// Strassen's seven products for 2x2 matrix multiplication, in the leg
/// layout of matmul_tensor(2, 2, 2).
Decomposition strassen7_decomposition(const FieldSpec& field);
/// The n1 n2 n3 elementary products.
Decomposition trivial_matmul_decomposition(const FieldSpec& field, std::size_t n1, std::size_t n2, std::size_t n3);

} // namespace tensorrank
