#include "tensorrank/matrix.hpp"

#include <sstream>

namespace tensorrank {

Matrix::Matrix(const FieldSpec& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(field))
{
}

Matrix Matrix::identity(const FieldSpec& field, std::size_t n)
{
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = Scalar::one(field);
    return m;
}

Matrix Matrix::from_rows(const FieldSpec& field, const std::vector<Vector>& rows)
{
    std::size_t c = rows.empty() ? 0 : rows.front().size();
    Matrix m(field, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c)
            throw ShapeError("ragged matrix rows");
        for (std::size_t j = 0; j < c; ++j) {
            if (!(rows[i][j].field() == field))
                throw FieldMismatch();
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

Matrix Matrix::from_ints(const FieldSpec& field, std::initializer_list<std::initializer_list<long>> rows)
{
    std::vector<Vector> v;
    for (const auto& r : rows) {
        Vector row;
        for (long x : r)
            row.push_back(Scalar::from_int(field, x));
        v.push_back(std::move(row));
    }
    return from_rows(field, v);
}

Matrix Matrix::from_columns(const FieldSpec& field, std::size_t rows, const std::vector<Vector>& cols)
{
    Matrix m(field, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows)
            throw ShapeError("column length mismatch");
        for (std::size_t i = 0; i < rows; ++i)
            m(i, j) = cols[j][i];
    }
    return m;
}

Vector Matrix::row(std::size_t i) const
{
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vector Matrix::column(std::size_t j) const
{
    Vector v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        v.push_back((*this)(i, j));
    return v;
}

bool Matrix::is_zero() const
{
    for (const auto& x : data_)
        if (!x.is_zero())
            return false;
    return true;
}

Matrix& Matrix::operator+=(const Matrix& rhs)
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw ShapeError("matrix sum dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs)
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw ShapeError("matrix difference dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= rhs.data_[i];
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b)
{
    if (a.cols_ != b.rows_)
        throw ShapeError("matrix product dimension mismatch");
    if (!(a.field_ == b.field_))
        throw FieldMismatch();
    Matrix c(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Scalar& x = a(i, k);
            if (x.is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                c(i, j).add_product(x, b(k, j));
        }
    return c;
}

Matrix operator*(const Scalar& s, Matrix a)
{
    for (auto& x : a.data_)
        x *= s;
    return a;
}

Vector Matrix::apply(const Vector& v) const
{
    if (v.size() != cols_)
        throw ShapeError("matrix-vector dimension mismatch");
    Vector out(rows_, Scalar::zero(field_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (!v[j].is_zero())
                out[i].add_product((*this)(i, j), v[j]);
    return out;
}

Matrix Matrix::transpose() const
{
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::rref(std::vector<std::size_t>* pivots) const
{
    Matrix m = *this;
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
        std::size_t p = r;
        while (p < rows_ && m(p, c).is_zero())
            ++p;
        if (p == rows_)
            continue;
        if (p != r)
            for (std::size_t j = 0; j < cols_; ++j)
                std::swap(m(p, j), m(r, j));
        Scalar inv = m(r, c).inverse();
        for (std::size_t j = c; j < cols_; ++j)
            m(r, j) *= inv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r || m(i, c).is_zero())
                continue;
            Scalar f = m(i, c);
            for (std::size_t j = c; j < cols_; ++j)
                if (!m(r, j).is_zero())
                    m(i, j) -= f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    if (pivots)
        *pivots = std::move(piv);
    return m;
}

std::size_t Matrix::rank() const
{
    // Forward elimination only.
    Matrix m = *this;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
        std::size_t p = r;
        while (p < rows_ && m(p, c).is_zero())
            ++p;
        if (p == rows_)
            continue;
        if (p != r)
            for (std::size_t j = c; j < cols_; ++j)
                std::swap(m(p, j), m(r, j));
        Scalar inv = m(r, c).inverse();
        for (std::size_t i = r + 1; i < rows_; ++i) {
            if (m(i, c).is_zero())
                continue;
            Scalar f = m(i, c) * inv;
            for (std::size_t j = c; j < cols_; ++j)
                if (!m(r, j).is_zero())
                    m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

std::vector<Vector> Matrix::nullspace() const
{
    std::vector<std::size_t> piv;
    Matrix m = rref(&piv);
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : piv)
        is_pivot[c] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
        if (is_pivot[f])
            continue;
        Vector v(cols_, Scalar::zero(field_));
        v[f] = Scalar::one(field_);
        for (std::size_t i = 0; i < piv.size(); ++i)
            v[piv[i]] = -m(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

Scalar Matrix::det() const
{
    if (rows_ != cols_)
        throw ShapeError("determinant of a non-square matrix");
    Matrix m = *this;
    Scalar d = Scalar::one(field_);
    for (std::size_t c = 0; c < cols_; ++c) {
        std::size_t p = c;
        while (p < rows_ && m(p, c).is_zero())
            ++p;
        if (p == rows_)
            return Scalar::zero(field_);
        if (p != c) {
            for (std::size_t j = c; j < cols_; ++j)
                std::swap(m(p, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        Scalar inv = m(c, c).inverse();
        for (std::size_t i = c + 1; i < rows_; ++i) {
            if (m(i, c).is_zero())
                continue;
            Scalar f = m(i, c) * inv;
            for (std::size_t j = c; j < cols_; ++j)
                m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

std::optional<Matrix> Matrix::try_inverse() const
{
    if (rows_ != cols_)
        return std::nullopt;
    const std::size_t n = rows_;
    Matrix aug(field_, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = (*this)(i, j);
        aug(i, n + i) = Scalar::one(field_);
    }
    std::vector<std::size_t> piv;
    Matrix r = aug.rref(&piv);
    if (piv.size() < n || piv[n - 1] != n - 1)
        return std::nullopt;
    Matrix inv(field_, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = r(i, n + j);
    return inv;
}

Matrix Matrix::inverse() const
{
    auto inv = try_inverse();
    if (!inv)
        throw InvalidArgument("matrix is not invertible");
    return *std::move(inv);
}

std::string Matrix::to_string() const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << '[';
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? " " : "") << (*this)(i, j);
        os << "]\n";
    }
    return os.str();
}

bool operator==(const Matrix& a, const Matrix& b)
{
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Matrix kron(const Matrix& a, const Matrix& b)
{
    if (!(a.field() == b.field()))
        throw FieldMismatch();
    Matrix k(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).is_zero())
                continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
        }
    return k;
}

PolyMatrix::PolyMatrix(const FieldSpec& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, Poly(field))
{
}

PolyMatrix::PolyMatrix(const Matrix& m) : PolyMatrix(m.field(), m.rows(), m.cols())
{
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            (*this)(i, j) = Poly::constant(m(i, j));
}

PolyMatrix PolyMatrix::from_coefficients(const std::vector<Matrix>& coeffs)
{
    if (coeffs.empty())
        throw InvalidArgument("no coefficient matrices");
    const Matrix& m0 = coeffs.front();
    PolyMatrix out(m0.field(), m0.rows(), m0.cols());
    for (std::size_t a = 0; a < coeffs.size(); ++a) {
        if (coeffs[a].rows() != m0.rows() || coeffs[a].cols() != m0.cols())
            throw ShapeError("coefficient matrices differ in shape");
        for (std::size_t i = 0; i < out.rows_; ++i)
            for (std::size_t j = 0; j < out.cols_; ++j)
                out(i, j) += Poly::monomial(coeffs[a](i, j), a);
    }
    return out;
}

std::optional<std::size_t> PolyMatrix::max_degree() const
{
    std::optional<std::size_t> best;
    for (const auto& p : data_)
        if (auto d = p.degree(); d && (!best || *d > *best))
            best = d;
    return best;
}

Matrix PolyMatrix::coefficient(std::size_t a) const
{
    Matrix m(field_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        m(i / cols_, i % cols_) = data_[i].coeff(a);
    return m;
}

Matrix PolyMatrix::eval(const Scalar& at) const
{
    Matrix m(field_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        m(i / cols_, i % cols_) = data_[i].eval(at);
    return m;
}

PolyMatrix PolyMatrix::truncate(std::size_t dmax) const
{
    PolyMatrix out = *this;
    for (auto& p : out.data_)
        p = p.truncate(dmax);
    return out;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b)
{
    if (a.cols_ != b.rows_)
        throw ShapeError("matrix product dimension mismatch");
    PolyMatrix c(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (a(i, k).is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

bool operator==(const PolyMatrix& a, const PolyMatrix& b)
{
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b)
{
    if (!(a.field() == b.field()))
        throw FieldMismatch();
    PolyMatrix k(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).is_zero())
                continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
        }
    return k;
}

} // namespace tensorrank
