#include "tensorrank/bounds.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "tensorrank/errors.hpp"
#include "tensorrank/pencil.hpp"
#include "tensorrank/transform.hpp"

namespace tensorrank {

namespace {

using Row = std::vector<std::uint32_t>;

struct Fp {
    std::uint32_t p;

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const
    {
        std::uint32_t s = a + b;
        return s >= p ? s - p : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p - b; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const
    {
        return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
    }
    std::uint32_t inv(std::uint32_t a) const
    {
        std::uint64_t result = 1, base = a;
        for (std::uint64_t e = p - 2; e; e >>= 1) {
            if (e & 1)
                result = result * base % p;
            base = base * base % p;
        }
        return static_cast<std::uint32_t>(result);
    }
    /// row += c * other
    void axpy(Row& row, std::uint32_t c, const Row& other) const
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            if (other[i])
                row[i] = add(row[i], mul(c, other[i]));
    }
};

/// Incremental echelon basis with pivots normalized to 1.
class Echelon {
public:
    explicit Echelon(Fp f) : f_(f) {}

    /// Reduces v in place against the basis; returns true if v becomes zero.
    bool reduce(Row& v) const
    {
        for (std::size_t b = 0; b < rows_.size(); ++b) {
            std::uint32_t c = v[pivots_[b]];
            if (c)
                f_.axpy(v, f_.sub(0, c), rows_[b]);
        }
        return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
    }

    /// Adds v if independent; returns whether the rank grew.
    bool insert(Row v)
    {
        if (reduce(v))
            return false;
        std::size_t piv = 0;
        while (v[piv] == 0)
            ++piv;
        std::uint32_t s = f_.inv(v[piv]);
        for (auto& x : v)
            x = f_.mul(x, s);
        rows_.push_back(std::move(v));
        pivots_.push_back(piv);
        return true;
    }

    void pop()
    {
        rows_.pop_back();
        pivots_.pop_back();
    }

    std::size_t rank() const { return rows_.size(); }
    const std::vector<Row>& rows() const { return rows_; }

private:
    Fp f_;
    std::vector<Row> rows_;
    std::vector<std::size_t> pivots_;
};

/// Fully reduced row echelon form of `rows` with zero rows dropped.
std::vector<Row> rref(const Fp& f, std::vector<Row> rows)
{
    std::vector<Row> out;
    if (rows.empty())
        return out;
    std::size_t cols = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0)
            ++piv;
        if (piv == rows.size())
            continue;
        std::swap(rows[r], rows[piv]);
        std::uint32_t s = f.inv(rows[r][c]);
        for (auto& x : rows[r])
            x = f.mul(x, s);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && rows[i][c])
                f.axpy(rows[i], f.sub(0, rows[i][c]), rows[r]);
        ++r;
    }
    rows.resize(r);
    return rows;
}

Row residues(const Tensor& t)
{
    Row out(t.shape().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = t[i].residue();
    return out;
}

void require_prime(const Tensor& t, const char* what)
{
    if (!t.field().is_finite())
        throw InvalidArgument(std::string(what) + " needs a prime field");
}

// ---- substitution method ------------------------------------------------

/// Order-3 tensor over F_p, row-major.
struct T3 {
    std::size_t d[3] = {0, 0, 0};
    Row data;

    std::size_t idx(std::size_t i, std::size_t j, std::size_t k) const { return (i * d[1] + j) * d[2] + k; }
};

/// Slices along `leg` as flat rows over the other two legs (in order).
std::vector<Row> slices(const T3& t, std::size_t leg)
{
    std::size_t a = (leg + 1) % 3, b = (leg + 2) % 3;
    if (a > b)
        std::swap(a, b);
    std::vector<Row> out(t.d[leg], Row(t.d[a] * t.d[b]));
    std::size_t ix[3];
    for (ix[0] = 0; ix[0] < t.d[0]; ++ix[0])
        for (ix[1] = 0; ix[1] < t.d[1]; ++ix[1])
            for (ix[2] = 0; ix[2] < t.d[2]; ++ix[2])
                out[ix[leg]][ix[a] * t.d[b] + ix[b]] = t.data[t.idx(ix[0], ix[1], ix[2])];
    return out;
}

T3 from_slices(const T3& shape_of, std::size_t leg, const std::vector<Row>& s)
{
    std::size_t a = (leg + 1) % 3, b = (leg + 2) % 3;
    if (a > b)
        std::swap(a, b);
    T3 out;
    for (int i = 0; i < 3; ++i)
        out.d[i] = shape_of.d[i];
    out.d[leg] = s.size();
    out.data.assign(out.d[0] * out.d[1] * out.d[2], 0);
    std::size_t ix[3];
    for (ix[0] = 0; ix[0] < out.d[0]; ++ix[0])
        for (ix[1] = 0; ix[1] < out.d[1]; ++ix[1])
            for (ix[2] = 0; ix[2] < out.d[2]; ++ix[2])
                out.data[out.idx(ix[0], ix[1], ix[2])] = s[ix[leg]][ix[a] * out.d[b] + ix[b]];
    return out;
}

/// Replaces every leg by the span of its slices (rank preserving).
T3 concise(const Fp& f, T3 t)
{
    for (std::size_t leg = 0; leg < 3; ++leg) {
        if (t.data.empty())
            break;
        std::vector<Row> basis = rref(f, slices(t, leg));
        if (basis.empty()) {
            t.d[leg] = 0;
            t.data.clear();
            break;
        }
        t = from_slices(t, leg, basis);
    }
    return t;
}

struct BudgetHit {};

class Substitution {
public:
    Substitution(Fp f, std::size_t budget) : f_(f), budget_(budget) {}

    std::size_t lower_bound(const T3& raw)
    {
        T3 t = concise(f_, raw);
        if (t.data.empty())
            return 0;
        std::size_t flat = std::max({t.d[0], t.d[1], t.d[2]});
        if (std::min({t.d[0], t.d[1], t.d[2]}) == 1)
            return flat;
        std::string key = make_key(t);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        if (++nodes_ > budget_)
            throw BudgetHit{};

        std::size_t best = flat;
        for (std::size_t leg = 0; leg < 3; ++leg) {
            std::vector<Row> s = slices(t, leg);
            std::size_t a = s.size();
            for (std::size_t drop = 0; drop < a; ++drop) {
                std::vector<std::size_t> keep;
                for (std::size_t i = 0; i < a; ++i)
                    if (i != drop)
                        keep.push_back(i);
                std::vector<std::uint32_t> c(a - 1, 0);
                std::size_t slice_min = SIZE_MAX;
                while (true) {
                    std::vector<Row> reduced;
                    reduced.reserve(a - 1);
                    for (std::size_t u = 0; u < keep.size(); ++u) {
                        Row r = s[keep[u]];
                        if (c[u])
                            f_.axpy(r, c[u], s[drop]);
                        reduced.push_back(std::move(r));
                    }
                    std::size_t v = 1 + lower_bound(from_slices(t, leg, reduced));
                    slice_min = std::min(slice_min, v);
                    if (slice_min <= best)
                        break;
                    std::size_t u = 0;
                    while (u < c.size() && ++c[u] == f_.p)
                        c[u++] = 0;
                    if (u == c.size())
                        break;
                }
                best = std::max(best, slice_min);
            }
        }
        memo_.emplace(std::move(key), best);
        return best;
    }

    std::size_t nodes() const { return nodes_; }

private:
    static std::string make_key(const T3& t)
    {
        std::string key;
        key.reserve(3 + t.data.size() * 4);
        for (auto d : t.d)
            key.push_back(static_cast<char>(d));
        key.append(reinterpret_cast<const char*>(t.data.data()), t.data.size() * sizeof(std::uint32_t));
        return key;
    }

    Fp f_;
    std::size_t budget_;
    std::size_t nodes_ = 0;
    std::unordered_map<std::string, std::size_t> memo_;
};

// ---- brute force -------------------------------------------------------

/// All projective vectors of F_p^n with first nonzero coordinate 1.
std::vector<Row> projective_points(std::uint32_t p, std::size_t n)
{
    std::vector<Row> out;
    for (std::size_t lead = 0; lead < n; ++lead) {
        std::size_t free = n - lead - 1;
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < free; ++i)
            count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            Row v(n, 0);
            v[lead] = 1;
            std::uint64_t c = code;
            for (std::size_t i = lead + 1; i < n; ++i) {
                v[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            out.push_back(std::move(v));
        }
    }
    return out;
}

std::uint64_t projective_count(std::uint64_t p, std::size_t n)
{
    std::uint64_t total = 0, pw = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total += pw;
        pw *= p;
        if (total > (1ULL << 40))
            return total;
    }
    return total;
}

std::string row_key(const Row& r)
{
    return std::string(reinterpret_cast<const char*>(r.data()), r.size() * sizeof(std::uint32_t));
}

} // namespace

std::size_t flattening_lower_bound(const Tensor& t)
{
    if (t.order() < 2)
        throw ShapeError("flattening needs order >= 2");
    std::size_t best = 0;
    for (std::size_t leg = 0; leg < t.order(); ++leg)
        best = std::max(best, flatten(t, {leg}).rank());
    return best;
}

FlatteningMap FlatteningMap::grouping(std::vector<std::size_t> row_legs)
{
    if (row_legs.empty())
        throw InvalidArgument("grouping needs at least one row leg");
    FlatteningMap f;
    f.row_legs_ = std::move(row_legs);
    return f;
}

FlatteningMap FlatteningMap::explicit_map(Matrix matrix, std::size_t out_rows, std::size_t out_cols,
                                          std::size_t denominator)
{
    if (denominator == 0)
        throw InvalidArgument("flattening denominator must be >= 1");
    if (out_rows == 0 || out_cols == 0 || matrix.rows() != out_rows * out_cols)
        throw ShapeError("flattening matrix rows must equal out_rows * out_cols");
    FlatteningMap f;
    f.matrix_ = std::move(matrix);
    f.out_rows_ = out_rows;
    f.out_cols_ = out_cols;
    f.denominator_ = denominator;
    return f;
}

Matrix FlatteningMap::apply(const Tensor& t) const
{
    if (is_grouping()) {
        for (auto leg : row_legs_)
            if (leg >= t.order())
                throw ShapeError("grouping leg out of range");
        return flatten(t, row_legs_);
    }
    if (matrix_->cols() != t.shape().size())
        throw ShapeError("flattening matrix has " + std::to_string(matrix_->cols()) + " columns, tensor has " +
                         std::to_string(t.shape().size()) + " entries");
    Vector y = matrix_->apply(t.data());
    Matrix out(t.field(), out_rows_, out_cols_);
    for (std::size_t i = 0; i < y.size(); ++i)
        out(i / out_cols_, i % out_cols_) = y[i];
    return out;
}

FlatteningMap FlatteningMap::product(const FlatteningMap& f1, std::size_t k1, const Shape& s1, const FlatteningMap& f2,
                                     const Shape& s2)
{
    if (f1.is_grouping() && f2.is_grouping()) {
        std::vector<std::size_t> rows = f1.row_legs_;
        for (auto leg : f2.row_legs_)
            rows.push_back(leg + k1);
        return grouping(rows);
    }
    auto as_explicit = [](const FlatteningMap& f, const Shape& s, const FieldSpec& field) {
        if (!f.is_grouping())
            return f;
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < s.order(); ++i)
            if (std::find(f.row_legs_.begin(), f.row_legs_.end(), i) == f.row_legs_.end())
                cols.push_back(i);
        std::size_t nr = 1, nc = 1;
        for (auto l : f.row_legs_)
            nr *= s[l];
        for (auto l : cols)
            nc *= s[l];
        Matrix m(field, nr * nc, s.size());
        for (std::size_t off = 0; off < s.size(); ++off) {
            auto ix = s.unravel(off);
            std::size_t r = 0, c = 0;
            for (auto l : f.row_legs_)
                r = r * s[l] + ix[l];
            for (auto l : cols)
                c = c * s[l] + ix[l];
            m(r * nc + c, off) = Scalar::one(field);
        }
        return explicit_map(std::move(m), nr, nc, 1);
    };
    const FieldSpec field = f1.is_grouping() ? f2.matrix_->field() : f1.matrix_->field();
    FlatteningMap e1 = as_explicit(f1, s1, field);
    FlatteningMap e2 = as_explicit(f2, s2, field);
    Matrix big = kron(*e1.matrix_, *e2.matrix_);
    const std::size_t r1 = e1.out_rows_, c1 = e1.out_cols_, r2 = e2.out_rows_, c2 = e2.out_cols_;
    Matrix m(field, big.rows(), big.cols());
    for (std::size_t p1 = 0; p1 < r1 * c1; ++p1)
        for (std::size_t p2 = 0; p2 < r2 * c2; ++p2) {
            std::size_t row = (p1 / c1) * r2 + p2 / c2;
            std::size_t col = (p1 % c1) * c2 + p2 % c2;
            std::size_t src = p1 * r2 * c2 + p2;
            for (std::size_t j = 0; j < big.cols(); ++j)
                m(row * c1 * c2 + col, j) = big(src, j);
        }
    return explicit_map(std::move(m), r1 * r2, c1 * c2, e1.denominator_ * e2.denominator_);
}

mpq_class generalized_flattening_bound(const Tensor& t, const FlatteningMap& f)
{
    return mpq_class(static_cast<unsigned long>(f.apply(t).rank()), static_cast<unsigned long>(f.denominator()));
}

ProductBound flattening_product_bound(const Tensor& t1, const FlatteningMap& f1, const Tensor& t2,
                                      const FlatteningMap& f2)
{
    if (t1.field() != t2.field())
        throw FieldMismatch("flattening product over different fields");
    ProductBound out;
    out.rank1 = f1.apply(t1).rank();
    out.rank2 = f2.apply(t2).rank();
    out.bound = mpq_class(static_cast<unsigned long>(out.rank1 * out.rank2),
                          static_cast<unsigned long>(f1.denominator() * f2.denominator()));
    out.bound.canonicalize();
    Tensor prod = tensor_product(t1, t2);
    out.rank_product = FlatteningMap::product(f1, t1.order(), t1.shape(), f2, t2.shape()).apply(prod).rank();
    out.consistent = out.rank_product == out.rank1 * out.rank2;
    return out;
}

std::size_t ceil_to_size(const mpq_class& q)
{
    if (sgn(q) < 0)
        throw InvalidArgument("ceil_to_size of a negative value");
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return static_cast<std::size_t>(c.get_ui());
}

SubstitutionResult substitution_lower_bound(const Tensor& t, std::size_t node_budget)
{
    require_prime(t, "substitution method");
    if (t.order() != 3)
        throw InvalidArgument("substitution method needs an order-3 tensor");
    Fp f{t.field().modulus()};
    T3 raw;
    for (int i = 0; i < 3; ++i)
        raw.d[i] = t.shape()[i];
    raw.data = residues(t);
    Substitution sub(f, node_budget);
    SubstitutionResult out;
    try {
        out.bound = sub.lower_bound(raw);
    } catch (const BudgetHit&) {
        out.bound = flattening_lower_bound(t);
        out.exhaustive = false;
    }
    out.nodes = sub.nodes();
    return out;
}

BruteForceResult brute_force_rank(const Tensor& t, std::size_t rmax, std::uint64_t budget)
{
    require_prime(t, "brute-force rank");
    const FieldSpec& field = t.field();
    Fp f{field.modulus()};
    const std::uint32_t p = f.p;
    const std::size_t k = t.order();
    const auto& dims = t.shape().dims();

    BruteForceResult out;
    if (t.is_zero()) {
        out.rank = 0;
        out.witness = Decomposition(field, t.shape());
        return out;
    }

    // Pick the leg with the largest slice span, then the fewest simple
    // tensors on the remaining legs.
    std::size_t leg = 0, best_s = 0;
    std::uint64_t best_count = UINT64_MAX;
    for (std::size_t l = 0; l < k; ++l) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < k; ++i)
            if (i != l)
                count *= projective_count(p, dims[i]);
        std::size_t s = k == 1 ? 1 : flatten(t, {l}).rank();
        if (s > best_s || (s == best_s && count < best_count)) {
            leg = l;
            best_s = s;
            best_count = count;
        }
    }
    const std::size_t s = best_s;
    if (s > rmax)
        return out;

    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < k; ++i)
        if (i != leg)
            others.push_back(i);
    std::size_t m_len = 1;
    for (auto i : others)
        m_len *= dims[i];
    if (best_count * m_len > 50'000'000ULL)
        throw BudgetExceeded("brute-force rank: too many simple tensors (" + std::to_string(best_count) + ")");

    // Slices along `leg`, flattened over the other legs in row-major order.
    std::vector<Row> slice_rows(dims[leg], Row(m_len, 0));
    for (std::size_t off = 0; off < t.shape().size(); ++off) {
        if (t[off].is_zero())
            continue;
        auto ix = t.shape().unravel(off);
        std::size_t col = 0;
        for (auto i : others)
            col = col * dims[i] + ix[i];
        slice_rows[ix[leg]][col] = t[off].residue();
    }

    // Projective simple tensors on the other legs.
    std::vector<std::vector<Row>> points;
    for (auto i : others)
        points.push_back(projective_points(p, dims[i]));
    std::vector<Row> simple;
    std::vector<std::vector<std::size_t>> simple_parts;
    std::unordered_map<std::string, std::size_t> simple_index;
    {
        std::vector<std::size_t> choice(others.size(), 0);
        while (true) {
            Row v(1, 1);
            for (std::size_t u = 0; u < others.size(); ++u) {
                const Row& x = points[u][choice[u]];
                Row next(v.size() * x.size(), 0);
                for (std::size_t a = 0; a < v.size(); ++a)
                    if (v[a])
                        for (std::size_t b = 0; b < x.size(); ++b)
                            next[a * x.size() + b] = f.mul(v[a], x[b]);
                v = std::move(next);
            }
            simple_index.emplace(row_key(v), simple.size());
            simple.push_back(std::move(v));
            simple_parts.push_back(choice);
            std::size_t u = 0;
            while (u < choice.size() && ++choice[u] == points[u].size())
                choice[u++] = 0;
            if (u == choice.size())
                break;
        }
    }
    const std::size_t count = simple.size();

    Echelon span(f);
    for (const auto& r : slice_rows)
        span.insert(r);

    std::uint64_t steps = 0;
    auto charge = [&](std::uint64_t amount) {
        steps += amount;
        if (steps > budget)
            throw BudgetExceeded("brute-force rank: search budget of " + std::to_string(budget) + " steps exceeded");
    };

    // Returns indices of r independent simple tensors spanning the current
    // space, or an empty vector.
    auto spanned_by_simple = [&](const Echelon& e) -> std::vector<std::size_t> {
        const std::size_t r = e.rank();
        std::uint64_t points_in_space = projective_count(p, r);
        Echelon found(f);
        std::vector<std::size_t> chosen;
        if (points_in_space < count) {
            charge(points_in_space * r * m_len);
            // Enumerate projective points of the space and look them up.
            for (const Row& coeffs : projective_points(p, r)) {
                Row v(m_len, 0);
                for (std::size_t b = 0; b < r; ++b)
                    if (coeffs[b])
                        f.axpy(v, coeffs[b], e.rows()[b]);
                std::size_t lead = 0;
                while (lead < m_len && v[lead] == 0)
                    ++lead;
                if (lead == m_len)
                    continue;
                std::uint32_t sc = f.inv(v[lead]);
                for (auto& x : v)
                    x = f.mul(x, sc);
                auto it = simple_index.find(row_key(v));
                if (it != simple_index.end() && found.insert(v)) {
                    chosen.push_back(it->second);
                    if (found.rank() == r)
                        return chosen;
                }
            }
        } else {
            charge(static_cast<std::uint64_t>(count) * r * m_len);
            for (std::size_t i = 0; i < count; ++i) {
                Row v = simple[i];
                if (e.reduce(v) && found.insert(simple[i])) {
                    chosen.push_back(i);
                    if (found.rank() == r)
                        return chosen;
                }
            }
        }
        return {};
    };

    std::vector<std::size_t> witness_basis;
    std::function<bool(std::size_t, std::size_t)> extend = [&](std::size_t start, std::size_t left) -> bool {
        if (left == 0) {
            witness_basis = spanned_by_simple(span);
            return !witness_basis.empty();
        }
        for (std::size_t i = start; i + left <= count; ++i) {
            charge(span.rank() * m_len);
            if (!span.insert(simple[i]))
                continue;
            bool ok = extend(i + 1, left - 1);
            span.pop();
            if (ok)
                return true;
        }
        return false;
    };

    for (std::size_t r = s; r <= rmax; ++r) {
        if (r - s > count)
            break;
        if (!extend(0, r - s))
            continue;

        // Coefficients of every slice in the simple basis.
        std::vector<Vector> cols;
        for (auto idx : witness_basis) {
            Vector c;
            for (auto x : simple[idx])
                c.push_back(Scalar::from_int(field, x));
            cols.push_back(std::move(c));
        }
        Matrix basis = Matrix::from_columns(field, m_len, cols);
        Matrix aug(field, m_len, r + dims[leg]);
        for (std::size_t i = 0; i < m_len; ++i) {
            for (std::size_t j = 0; j < r; ++j)
                aug(i, j) = basis(i, j);
            for (std::size_t j = 0; j < dims[leg]; ++j)
                aug(i, r + j) = Scalar::from_int(field, slice_rows[j][i]);
        }
        Matrix red = aug.rref();
        Decomposition dec(field, t.shape());
        for (std::size_t b = 0; b < r; ++b) {
            SimpleTensor term;
            term.factors.resize(k);
            Vector lv(dims[leg]);
            for (std::size_t j = 0; j < dims[leg]; ++j)
                lv[j] = red(b, r + j);
            term.factors[leg] = lv;
            const auto& parts = simple_parts[witness_basis[b]];
            for (std::size_t u = 0; u < others.size(); ++u) {
                Vector v;
                for (auto x : points[u][parts[u]])
                    v.push_back(Scalar::from_int(field, x));
                term.factors[others[u]] = std::move(v);
            }
            dec.add(std::move(term));
        }
        if (eval_decomposition(dec) != t)
            throw Error("brute-force rank: internal witness check failed");
        out.rank = r;
        out.witness = std::move(dec);
        return out;
    }
    return out;
}

RankBoundReport certify_rank(const Tensor& t, const std::optional<Decomposition>& dec,
                             const std::vector<LowerMethod>& methods, const std::vector<mpq_class>& extra_lower)
{
    RankBoundReport rep;
    if (dec) {
        VerifyResult v = verify_decomposition(*dec, t);
        if (!v.ok)
            throw InvalidCertificate("decomposition does not evaluate to the tensor: " + v.message);
        rep.upper = dec->size();
        rep.methods.push_back("upper:decomposition=" + std::to_string(dec->size()));
    }
    auto raise = [&](const mpq_class& value, const std::string& tag) {
        if (value > rep.lower)
            rep.lower = value;
        rep.methods.push_back(tag);
    };
    for (auto m : methods) {
        switch (m) {
        case LowerMethod::flattening: {
            std::size_t b = t.order() >= 2 ? flattening_lower_bound(t) : (t.is_zero() ? 0 : 1);
            raise(mpq_class(static_cast<unsigned long>(b)), "lower:flattening=" + std::to_string(b));
            break;
        }
        case LowerMethod::substitution: {
            SubstitutionResult s = substitution_lower_bound(t);
            raise(mpq_class(static_cast<unsigned long>(s.bound)),
                  std::string("lower:substitution") + (s.exhaustive ? "" : "(fallback)") + "=" +
                      std::to_string(s.bound));
            break;
        }
        case LowerMethod::brute_force: {
            std::size_t cap = rep.upper ? *rep.upper : 16;
            BruteForceResult b = brute_force_rank(t, cap);
            if (b.rank) {
                raise(mpq_class(static_cast<unsigned long>(*b.rank)), "lower:brute_force=" + std::to_string(*b.rank));
            } else {
                raise(mpq_class(static_cast<unsigned long>(cap + 1)),
                      "lower:brute_force>" + std::to_string(cap));
            }
            break;
        }
        case LowerMethod::pencil: {
            PencilCanonicalForm cf = pencil_invariants(t);
            try {
                PencilRank pr = pencil_rank(cf, PencilPolicy::require_hypothesis);
                raise(mpq_class(static_cast<unsigned long>(pr.rank)), "lower:pencil=" + std::to_string(pr.rank));
            } catch (const FieldTooSmall&) {
                rep.methods.push_back("lower:pencil(field too small)");
            }
            break;
        }
        }
    }
    for (const auto& q : extra_lower)
        raise(q, "lower:supplied=" + q.get_str());
    rep.lower_int = ceil_to_size(rep.lower);
    if (rep.upper && rep.lower_int > *rep.upper)
        throw Error("inconsistent rank bounds: lower " + std::to_string(rep.lower_int) + " exceeds upper " +
                    std::to_string(*rep.upper));
    rep.determined = rep.upper && rep.lower_int == *rep.upper;
    return rep;
}

} // namespace tensorrank
