#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "tensorrank/poly.hpp"
#include "tensorrank/scalar.hpp"

namespace tensorrank {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix of Scalars. Indices are 0-based.
class Matrix {
public:
    Matrix() = default;
    /// Zero matrix.
    Matrix(const FieldSpec& field, std::size_t rows, std::size_t cols);

    static Matrix identity(const FieldSpec& field, std::size_t n);
    static Matrix from_rows(const FieldSpec& field, const std::vector<Vector>& rows);
    static Matrix from_ints(const FieldSpec& field, std::initializer_list<std::initializer_list<long>> rows);
    /// Matrix whose columns are the given vectors (all of length `rows`).
    static Matrix from_columns(const FieldSpec& field, std::size_t rows, const std::vector<Vector>& cols);

    const FieldSpec& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<Scalar>& data() const { return data_; }

    Vector row(std::size_t i) const;
    Vector column(std::size_t j) const;
    bool is_zero() const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Scalar& s, Matrix a);
    Vector apply(const Vector& v) const;

    Matrix transpose() const;

    /// Reduced row echelon form and its pivot columns.
    Matrix rref(std::vector<std::size_t>* pivots = nullptr) const;
    std::size_t rank() const;
    /// Basis of the right kernel {v : M v = 0}.
    std::vector<Vector> nullspace() const;
    Scalar det() const;
    std::optional<Matrix> try_inverse() const;
    /// Throws InvalidArgument when singular or non-square.
    Matrix inverse() const;

    std::string to_string() const;

    friend bool operator==(const Matrix& a, const Matrix& b);
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    FieldSpec field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

/// (a kron b)(i*rb + k, j*cb + l) = a(i,j) * b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

/// Matrix with polynomial entries, e.g. a leg map A_i(eps) of a degeneration.
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(const FieldSpec& field, std::size_t rows, std::size_t cols);
    /// Constant polynomial matrix.
    explicit PolyMatrix(const Matrix& m);
    /// sum_a coeffs[a] * eps^a.
    static PolyMatrix from_coefficients(const std::vector<Matrix>& coeffs);

    const FieldSpec& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Poly& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Poly& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    /// Largest entry degree; nullopt for the zero matrix.
    std::optional<std::size_t> max_degree() const;
    /// Matrix of eps^a coefficients.
    Matrix coefficient(std::size_t a) const;
    Matrix eval(const Scalar& at) const;
    PolyMatrix truncate(std::size_t dmax) const;

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b);

private:
    FieldSpec field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Poly> data_;
};

using EpsMatrix = PolyMatrix;

PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b);

} // namespace tensorrank
