#include "tensorrank/tensor.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tensorrank {

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims))
{
    if (dims_.empty())
        throw ShapeError("tensor order must be at least 1");
    for (auto d : dims_)
        if (d == 0)
            throw ShapeError("tensor dimensions must be positive");
}

std::size_t Shape::size() const
{
    std::size_t n = 1;
    for (auto d : dims_)
        n *= d;
    return n;
}

std::size_t Shape::offset(const std::vector<std::size_t>& index) const
{
    if (index.size() != dims_.size())
        throw ShapeError("index has wrong length");
    std::size_t off = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (index[i] >= dims_[i])
            throw ShapeError("index out of range");
        off = off * dims_[i] + index[i];
    }
    return off;
}

std::vector<std::size_t> Shape::unravel(std::size_t offset) const
{
    std::vector<std::size_t> idx(dims_.size());
    for (std::size_t i = dims_.size(); i-- > 0;) {
        idx[i] = offset % dims_[i];
        offset /= dims_[i];
    }
    return idx;
}

std::string Shape::to_string() const
{
    std::string s;
    for (std::size_t i = 0; i < dims_.size(); ++i)
        s += (i ? "x" : "") + std::to_string(dims_[i]);
    return s;
}

Tensor::Tensor(const FieldSpec& field, const Shape& shape)
    : field_(field), shape_(shape), data_(shape.size(), Scalar::zero(field))
{
}

Tensor::Tensor(const FieldSpec& field, const Shape& shape, std::vector<Scalar> data)
    : field_(field), shape_(shape), data_(std::move(data))
{
    if (data_.size() != shape_.size())
        throw ShapeError("entry count does not match shape " + shape_.to_string());
    for (const auto& x : data_)
        if (!(x.field() == field_))
            throw FieldMismatch();
}

bool Tensor::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const Scalar& x) { return x.is_zero(); });
}

std::size_t Tensor::nonzero_count() const
{
    return static_cast<std::size_t>(
        std::count_if(data_.begin(), data_.end(), [](const Scalar& x) { return !x.is_zero(); }));
}

std::vector<std::pair<std::vector<std::size_t>, Scalar>> Tensor::nonzeros() const
{
    std::vector<std::pair<std::vector<std::size_t>, Scalar>> out;
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!data_[i].is_zero())
            out.emplace_back(shape_.unravel(i), data_[i]);
    return out;
}

Tensor& Tensor::operator+=(const Tensor& rhs)
{
    if (!(shape_ == rhs.shape_))
        throw ShapeError("tensor sum shape mismatch");
    if (!(field_ == rhs.field_))
        throw FieldMismatch();
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!rhs.data_[i].is_zero())
            data_[i] += rhs.data_[i];
    return *this;
}

Tensor& Tensor::operator-=(const Tensor& rhs)
{
    if (!(shape_ == rhs.shape_))
        throw ShapeError("tensor difference shape mismatch");
    if (!(field_ == rhs.field_))
        throw FieldMismatch();
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!rhs.data_[i].is_zero())
            data_[i] -= rhs.data_[i];
    return *this;
}

Tensor operator*(const Scalar& s, Tensor t)
{
    for (auto& x : t.data_)
        if (!x.is_zero())
            x *= s;
    return t;
}

Tensor Tensor::mode_product(std::size_t leg, const Matrix& m) const
{
    if (leg >= order())
        throw ShapeError("leg out of range");
    if (m.cols() != shape_[leg])
        throw ShapeError("leg map has " + std::to_string(m.cols()) + " columns, leg has dimension " +
                         std::to_string(shape_[leg]));
    if (!(m.field() == field_))
        throw FieldMismatch();
    std::vector<std::size_t> dims = shape_.dims();
    const std::size_t n = dims[leg];
    dims[leg] = m.rows();
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < leg; ++i)
        outer *= dims[i];
    for (std::size_t i = leg + 1; i < dims.size(); ++i)
        inner *= dims[i];
    Tensor out(field_, Shape(dims));
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t j = 0; j < n; ++j) {
            const Scalar* src = &data_[(o * n + j) * inner];
            bool any = false;
            for (std::size_t x = 0; x < inner && !any; ++x)
                any = !src[x].is_zero();
            if (!any)
                continue;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                const Scalar& a = m(i, j);
                if (a.is_zero())
                    continue;
                Scalar* dst = &out.data_[(o * m.rows() + i) * inner];
                for (std::size_t x = 0; x < inner; ++x)
                    if (!src[x].is_zero())
                        dst[x].add_product(a, src[x]);
            }
        }
    return out;
}

Tensor Tensor::slice(std::size_t leg, std::size_t index) const
{
    if (order() < 2)
        throw ShapeError("cannot slice an order-1 tensor");
    if (leg >= order() || index >= shape_[leg])
        throw ShapeError("slice out of range");
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < order(); ++i)
        if (i != leg)
            dims.push_back(shape_[i]);
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < leg; ++i)
        outer *= shape_[i];
    for (std::size_t i = leg + 1; i < order(); ++i)
        inner *= shape_[i];
    std::vector<Scalar> data;
    data.reserve(outer * inner);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t x = 0; x < inner; ++x)
            data.push_back(data_[(o * shape_[leg] + index) * inner + x]);
    return Tensor(field_, Shape(dims), std::move(data));
}

Matrix Tensor::slice_matrix(std::size_t leg, std::size_t index) const
{
    if (order() != 3)
        throw ShapeError("slice_matrix requires an order-3 tensor");
    Tensor s = slice(leg, index);
    Matrix m(field_, s.shape_[0], s.shape_[1]);
    for (std::size_t i = 0; i < s.shape_[0]; ++i)
        for (std::size_t j = 0; j < s.shape_[1]; ++j)
            m(i, j) = s.data_[i * s.shape_[1] + j];
    return m;
}

std::string Tensor::to_string() const
{
    std::ostringstream os;
    os << "Tensor(" << field_.to_string() << ", " << shape_.to_string() << ")";
    for (const auto& [idx, v] : nonzeros()) {
        os << "\n  (";
        for (std::size_t i = 0; i < idx.size(); ++i)
            os << (i ? "," : "") << idx[i] + 1;
        os << ") " << v;
    }
    return os.str();
}

bool operator==(const Tensor& a, const Tensor& b)
{
    return a.field_ == b.field_ && a.shape_ == b.shape_ && a.data_ == b.data_;
}

Tensor tensor_from_entries(const FieldSpec& field, const Shape& shape,
                           const std::vector<std::pair<std::vector<std::size_t>, Scalar>>& entries)
{
    Tensor t(field, shape);
    for (const auto& [idx, v] : entries) {
        std::vector<std::size_t> zero_based;
        for (auto i : idx) {
            if (i == 0)
                throw ShapeError("indices are 1-based");
            zero_based.push_back(i - 1);
        }
        if (!(v.field() == field))
            throw FieldMismatch();
        t.at(zero_based) = v;
    }
    return t;
}

Tensor vector_tensor(const FieldSpec& field, const Vector& v)
{
    return Tensor(field, Shape({v.size()}), v);
}

Tensor tensor_product(const Tensor& a, const Tensor& b)
{
    if (!(a.field() == b.field()))
        throw FieldMismatch();
    std::vector<std::size_t> dims = a.shape().dims();
    dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
    Tensor out(a.field(), Shape(dims));
    const std::size_t nb = b.shape().size();
    for (std::size_t i = 0; i < a.shape().size(); ++i) {
        if (a[i].is_zero())
            continue;
        for (std::size_t j = 0; j < nb; ++j)
            if (!b[j].is_zero())
                out[i * nb + j] = a[i] * b[j];
    }
    return out;
}

Tensor kronecker_product(const Tensor& a, const Tensor& b)
{
    if (!(a.field() == b.field()))
        throw FieldMismatch();
    if (a.order() != b.order())
        throw ShapeError("Kronecker product needs equal orders");
    const std::size_t k = a.order();
    std::vector<std::size_t> dims(k);
    for (std::size_t i = 0; i < k; ++i)
        dims[i] = a.shape()[i] * b.shape()[i];
    Shape shape(dims);
    Tensor out(a.field(), shape);
    auto nb = b.nonzeros();
    std::vector<std::size_t> idx(k);
    for (const auto& [ia, va] : a.nonzeros())
        for (const auto& [ib, vb] : nb) {
            for (std::size_t i = 0; i < k; ++i)
                idx[i] = ia[i] * b.shape()[i] + ib[i];
            out.at(idx) = va * vb;
        }
    return out;
}

Tensor group_legs(const Tensor& t, const std::vector<std::vector<std::size_t>>& partition)
{
    const std::size_t k = t.order();
    std::vector<int> seen(k, 0);
    std::vector<std::size_t> dims;
    for (const auto& part : partition) {
        if (part.empty())
            throw ShapeError("empty part in leg partition");
        std::size_t d = 1;
        for (auto leg : part) {
            if (leg >= k || seen[leg]++)
                throw ShapeError("leg partition must cover every leg exactly once");
            d *= t.shape()[leg];
        }
        dims.push_back(d);
    }
    if (std::count(seen.begin(), seen.end(), 1) != static_cast<std::ptrdiff_t>(k))
        throw ShapeError("leg partition must cover every leg exactly once");
    Shape shape(dims);
    Tensor out(t.field(), shape);
    std::vector<std::size_t> idx(partition.size());
    for (std::size_t off = 0; off < t.shape().size(); ++off) {
        if (t[off].is_zero())
            continue;
        auto in = t.shape().unravel(off);
        for (std::size_t p = 0; p < partition.size(); ++p) {
            std::size_t v = 0;
            for (auto leg : partition[p])
                v = v * t.shape()[leg] + in[leg];
            idx[p] = v;
        }
        out.at(idx) = t[off];
    }
    return out;
}

Tensor kronecker_product_by_grouping(const Tensor& a, const Tensor& b)
{
    if (a.order() != b.order())
        throw ShapeError("Kronecker product needs equal orders");
    const std::size_t k = a.order();
    std::vector<std::vector<std::size_t>> partition;
    for (std::size_t i = 0; i < k; ++i)
        partition.push_back({i, k + i});
    return group_legs(tensor_product(a, b), partition);
}

Tensor permute_legs(const Tensor& t, const std::vector<std::size_t>& perm)
{
    std::vector<std::vector<std::size_t>> partition;
    for (auto p : perm)
        partition.push_back({p});
    return group_legs(t, partition);
}

Tensor direct_sum_shared_first_leg(const std::vector<Tensor>& ts)
{
    if (ts.empty())
        throw InvalidArgument("direct sum of no tensors");
    const Tensor& first = ts.front();
    const std::size_t k = first.order();
    if (k < 2)
        throw ShapeError("direct sum needs order at least 2");
    std::vector<std::size_t> dims(k, 0);
    dims[0] = first.shape()[0];
    for (const auto& t : ts) {
        if (!(t.field() == first.field()))
            throw FieldMismatch();
        if (t.order() != k)
            throw ShapeError("direct sum summands differ in order");
        if (t.shape()[0] != dims[0])
            throw ShapeError("direct sum summands differ in first-leg dimension");
        for (std::size_t i = 1; i < k; ++i)
            dims[i] += t.shape()[i];
    }
    Tensor out(first.field(), Shape(dims));
    std::vector<std::size_t> shift(k, 0);
    for (const auto& t : ts) {
        for (auto [idx, v] : t.nonzeros()) {
            for (std::size_t i = 1; i < k; ++i)
                idx[i] += shift[i];
            out.at(idx) = v;
        }
        for (std::size_t i = 1; i < k; ++i)
            shift[i] += t.shape()[i];
    }
    return out;
}

Matrix flatten(const Tensor& t, const std::vector<std::size_t>& row_legs)
{
    std::vector<std::size_t> col_legs;
    for (std::size_t i = 0; i < t.order(); ++i)
        if (std::find(row_legs.begin(), row_legs.end(), i) == row_legs.end())
            col_legs.push_back(i);
    if (row_legs.empty() || col_legs.empty())
        throw ShapeError("flattening needs two nonempty leg groups");
    Tensor g = group_legs(t, {row_legs, col_legs});
    Matrix m(t.field(), g.shape()[0], g.shape()[1]);
    for (std::size_t i = 0; i < g.shape().size(); ++i)
        if (!g[i].is_zero())
            m(i / g.shape()[1], i % g.shape()[1]) = g[i];
    return m;
}

Tensor unit_tensor(const FieldSpec& field, std::size_t r, std::size_t k)
{
    if (r == 0 || k == 0)
        throw InvalidArgument("unit tensor needs r >= 1 and k >= 1");
    Tensor t(field, Shape(std::vector<std::size_t>(k, r)));
    for (std::size_t i = 0; i < r; ++i)
        t.at(std::vector<std::size_t>(k, i)) = Scalar::one(field);
    return t;
}

Tensor w_tensor(const FieldSpec& field, std::size_t k)
{
    if (k < 3)
        throw InvalidArgument("W_k needs k >= 3");
    Tensor t(field, Shape(std::vector<std::size_t>(k, 2)));
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::size_t> idx(k, 0);
        idx[i] = 1;
        t.at(idx) = Scalar::one(field);
    }
    return t;
}

Tensor strassen_tensor(const FieldSpec& field, std::size_t q, std::size_t k)
{
    if (q < 1 || k < 3)
        throw InvalidArgument("Str_q^k needs q >= 1 and k >= 3");
    Tensor t(field, Shape(std::vector<std::size_t>(k, q + 1)));
    for (std::size_t i = 1; i <= q; ++i) {
        std::vector<std::size_t> a(k, 0), b(k, 0);
        a[0] = a[1] = i;
        b[1] = b[2] = i;
        t.at(a) = Scalar::one(field);
        t.at(b) = Scalar::one(field);
    }
    return t;
}

Tensor matmul_tensor(const FieldSpec& field, std::size_t n1, std::size_t n2, std::size_t n3)
{
    if (n1 == 0 || n2 == 0 || n3 == 0)
        throw InvalidArgument("matrix multiplication tensor needs positive sizes");
    Tensor t(field, Shape({n1 * n2, n2 * n3, n3 * n1}));
    for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t i3 = 0; i3 < n3; ++i3)
                t.at({i1 * n2 + i2, i2 * n3 + i3, i3 * n1 + i1}) = Scalar::one(field);
    return t;
}

Tensor chi_tensor(const FieldSpec& field, std::size_t d, std::size_t k)
{
    if (k == 0)
        throw InvalidArgument("chi tensor needs k >= 1");
    Tensor t(field, Shape(std::vector<std::size_t>(k, d + 1)));
    std::vector<std::size_t> idx(k, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t leg, std::size_t remaining) {
        if (leg + 1 == k) {
            idx[leg] = remaining;
            t.at(idx) = Scalar::one(field);
            return;
        }
        for (std::size_t a = 0; a <= remaining; ++a) {
            idx[leg] = a;
            rec(leg + 1, remaining - a);
        }
    };
    rec(0, d);
    return t;
}

Decomposition::Decomposition(const FieldSpec& field, const Shape& shape, std::vector<SimpleTensor> terms)
    : field_(field), shape_(shape)
{
    for (auto& t : terms)
        add(std::move(t));
}

void Decomposition::add(SimpleTensor term)
{
    if (term.factors.size() != shape_.order())
        throw ShapeError("term has " + std::to_string(term.factors.size()) + " factors, expected " +
                         std::to_string(shape_.order()));
    for (std::size_t i = 0; i < term.factors.size(); ++i) {
        if (term.factors[i].size() != shape_[i])
            throw ShapeError("factor length does not match leg dimension");
        for (const auto& x : term.factors[i])
            if (!(x.field() == field_))
                throw FieldMismatch();
    }
    terms_.push_back(std::move(term));
}

namespace {

void accumulate_term(Tensor& out, const SimpleTensor& term)
{
    const Shape& shape = out.shape();
    const std::size_t k = shape.order();
    const FieldSpec& field = out.field();
    std::vector<Scalar> partial(k + 1, Scalar::one(field));
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t leg, std::size_t base) {
        const Vector& f = term.factors[leg];
        for (std::size_t i = 0; i < shape[leg]; ++i) {
            if (f[i].is_zero())
                continue;
            partial[leg + 1] = partial[leg] * f[i];
            std::size_t off = base * shape[leg] + i;
            if (leg + 1 == k)
                out[off] += partial[k];
            else
                rec(leg + 1, off);
        }
    };
    rec(0, 0);
}

} // namespace

Tensor eval_decomposition(const Decomposition& dec)
{
    Tensor out(dec.field(), dec.shape());
    for (const auto& term : dec.terms())
        accumulate_term(out, term);
    return out;
}

Tensor eval_simple(const FieldSpec& field, const SimpleTensor& term)
{
    std::vector<std::size_t> dims;
    for (const auto& f : term.factors)
        dims.push_back(f.size());
    Tensor out(field, Shape(dims));
    accumulate_term(out, term);
    return out;
}

Decomposition decomposition_tensor_product(const Decomposition& a, const Decomposition& b)
{
    if (!(a.field() == b.field()))
        throw FieldMismatch();
    std::vector<std::size_t> dims = a.shape().dims();
    dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
    Decomposition out(a.field(), Shape(dims));
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) {
            SimpleTensor t = ta;
            t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
            out.add(std::move(t));
        }
    return out;
}

Decomposition unit_decomposition(const FieldSpec& field, std::size_t r, std::size_t k)
{
    Decomposition dec(field, Shape(std::vector<std::size_t>(k, r)));
    for (std::size_t i = 0; i < r; ++i) {
        Vector e(r, Scalar::zero(field));
        e[i] = Scalar::one(field);
        dec.add(SimpleTensor{std::vector<Vector>(k, e)});
    }
    return dec;
}

Decomposition strassen7_decomposition(const FieldSpec& field)
{
    // Rows: coefficients on (A11, A12, A21, A22), (B11, B12, B21, B22), and
    // the contribution to C_ik stored at position 2k + i.
    static const int table[7][3][4] = {
        {{1, 0, 0, 1}, {1, 0, 0, 1}, {1, 0, 0, 1}},
        {{0, 0, 1, 1}, {1, 0, 0, 0}, {0, 1, 0, -1}},
        {{1, 0, 0, 0}, {0, 1, 0, -1}, {0, 0, 1, 1}},
        {{0, 0, 0, 1}, {-1, 0, 1, 0}, {1, 1, 0, 0}},
        {{1, 1, 0, 0}, {0, 0, 0, 1}, {-1, 0, 1, 0}},
        {{-1, 0, 1, 0}, {1, 1, 0, 0}, {0, 0, 0, 1}},
        {{0, 1, 0, -1}, {0, 0, 1, 1}, {1, 0, 0, 0}},
    };
    Decomposition dec(field, Shape({4, 4, 4}));
    for (const auto& row : table) {
        SimpleTensor t;
        for (const auto& leg : row) {
            Vector v;
            for (int x : leg)
                v.push_back(Scalar::from_int(field, x));
            t.factors.push_back(std::move(v));
        }
        dec.add(std::move(t));
    }
    return dec;
}

Decomposition trivial_matmul_decomposition(const FieldSpec& field, std::size_t n1, std::size_t n2, std::size_t n3)
{
    Decomposition dec(field, Shape({n1 * n2, n2 * n3, n3 * n1}));
    auto basis = [&](std::size_t n, std::size_t i) {
        Vector v(n, Scalar::zero(field));
        v[i] = Scalar::one(field);
        return v;
    };
    for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t i3 = 0; i3 < n3; ++i3)
                dec.add(SimpleTensor{{basis(n1 * n2, i1 * n2 + i2), basis(n2 * n3, i2 * n3 + i3),
                                      basis(n3 * n1, i3 * n1 + i1)}});
    return dec;
}

} // namespace tensorrank
