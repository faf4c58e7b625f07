#include "tensorrank/pencil.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "tensorrank/errors.hpp"

namespace tensorrank {

namespace {

struct Slices {
    FieldSpec field;
    std::size_t n = 0;
    std::size_t m = 0;
    Matrix t1;
    Matrix t2;
};

Slices pencil_slices(const Tensor& t)
{
    if (t.order() != 3 || t.shape()[0] > 2)
        throw ShapeError("a pencil is a tensor of shape (2,n,m) or (1,n,m), got " + t.shape().to_string());
    Slices s;
    s.field = t.field();
    s.n = t.shape()[1];
    s.m = t.shape()[2];
    s.t1 = t.slice_matrix(0, 0);
    s.t2 = t.shape()[0] == 2 ? t.slice_matrix(0, 1) : Matrix(t.field(), s.n, s.m);
    return s;
}

Tensor padded(const Tensor& t)
{
    if (t.shape()[0] == 2)
        return t;
    Tensor out(t.field(), Shape({2, t.shape()[1], t.shape()[2]}));
    for (std::size_t i = 0; i < t.shape().size(); ++i)
        out[i] = t[i];
    return out;
}

/// a * T1 + b * T2 pencil rows as polynomials: x * P - Q.
PolyMatrix linear_pencil(const Matrix& p, const Matrix& q)
{
    PolyMatrix out(p.field(), p.rows(), p.cols());
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j)
            out(i, j) = Poly(p.field(), {-q(i, j), p(i, j)});
    return out;
}

/// dim ker of the block Toeplitz matrix of polynomial kernel vectors of
/// degree <= k for the pencil x T1 + T2.
std::size_t toeplitz_kernel_dim(const Matrix& t1, const Matrix& t2, std::size_t k)
{
    const std::size_t n = t1.rows(), m = t1.cols();
    Matrix big(t1.field(), (k + 2) * n, (k + 1) * m);
    for (std::size_t a = 0; a <= k; ++a)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                big(a * n + i, a * m + j) = t2(i, j);
                big((a + 1) * n + i, a * m + j) = t1(i, j);
            }
    return (k + 1) * m - big.rank();
}

/// Minimal indices of the right polynomial kernel, ascending.
std::vector<std::size_t> minimal_indices(const Matrix& t1, const Matrix& t2, std::size_t kernel_rank)
{
    std::vector<std::size_t> out;
    std::size_t prev_le = 0; // #{indices <= k-1}
    std::size_t prev_dim = 0;
    for (std::size_t k = 0; out.size() < kernel_rank; ++k) {
        if (k > t1.cols() + t1.rows())
            throw Error("minimal index computation did not terminate");
        std::size_t dim = toeplitz_kernel_dim(t1, t2, k);
        std::size_t le = dim - prev_dim;
        for (std::size_t c = prev_le; c < le; ++c)
            out.push_back(k);
        prev_le = le;
        prev_dim = dim;
    }
    return out;
}

std::vector<std::size_t> y_valuations(const std::vector<Poly>& factors)
{
    std::vector<std::size_t> out;
    for (const auto& f : factors) {
        std::size_t v = *f.valuation();
        if (v > 0)
            out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Poly> nonconstant(const std::vector<Poly>& factors)
{
    std::vector<Poly> out;
    for (const auto& f : factors)
        if (!f.is_constant())
            out.push_back(f);
    return out;
}

/// Everything except the basis change.
PencilCanonicalForm compute_invariants(const Tensor& t)
{
    Slices s = pencil_slices(t);
    const FieldSpec& field = s.field;
    PencilCanonicalForm cf;
    cf.field = field;
    cf.n = s.n;
    cf.m = s.m;

    std::vector<Poly> factors = smith_invariant_factors(linear_pencil(s.t1, s.t2));
    const std::size_t rho = factors.size();
    std::vector<std::size_t> eps = minimal_indices(s.t1, s.t2, s.m - rho);
    std::vector<std::size_t> eta = minimal_indices(s.t1.transpose(), s.t2.transpose(), s.n - rho);
    for (auto e : eps) {
        if (e == 0)
            ++cf.zero_cols;
        else
            cf.eps.push_back(e);
    }
    for (auto e : eta) {
        if (e == 0)
            ++cf.zero_rows;
        else
            cf.eta.push_back(e);
    }
    const std::size_t sum_eps = std::accumulate(eps.begin(), eps.end(), std::size_t{0});
    const std::size_t sum_eta = std::accumulate(eta.begin(), eta.end(), std::size_t{0});
    const std::size_t ell = rho - sum_eps - sum_eta;

    auto finite_degree = [](const std::vector<Poly>& fs) {
        std::size_t d = 0;
        for (const auto& f : fs)
            d += *f.degree();
        return d;
    };

    cf.chart = Matrix::identity(field, 2);
    cf.invariant_factors = nonconstant(factors);
    if (finite_degree(cf.invariant_factors) == ell)
        return cf;

    // Look for a chart in which the regular part has no eigenvalue at
    // infinity: T1' = a T1 + b T2 of rank rho.
    std::vector<Matrix> charts;
    charts.push_back(Matrix::from_ints(field, {{0, 1}, {1, 0}}));
    std::uint64_t tries = field.cardinality() ? std::min<std::uint64_t>(*field.cardinality() - 1, ell + 2) : ell + 2;
    for (std::uint64_t c = 1; c <= tries; ++c)
        charts.push_back(Matrix::from_ints(field, {{1, static_cast<long>(c)}, {0, 1}}));
    for (const auto& a : charts) {
        Matrix p = a(0, 0) * s.t1 + a(0, 1) * s.t2;
        if (p.rank() != rho)
            continue;
        Matrix q = a(1, 0) * s.t1 + a(1, 1) * s.t2;
        cf.chart = a;
        cf.invariant_factors = nonconstant(smith_invariant_factors(linear_pencil(p, q)));
        if (finite_degree(cf.invariant_factors) != ell)
            throw Error("pencil chart change left an infinite eigenvalue");
        return cf;
    }

    // Every point of the field is an eigenvalue: keep the infinite divisors.
    PolyMatrix rev(field, s.n, s.m);
    for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t j = 0; j < s.m; ++j)
            rev(i, j) = Poly(field, {s.t1(i, j), -s.t2(i, j)});
    cf.infinite_divisors = y_valuations(smith_invariant_factors(rev));
    std::size_t inf_degree = std::accumulate(cf.infinite_divisors.begin(), cf.infinite_divisors.end(), std::size_t{0});
    if (finite_degree(cf.invariant_factors) + inf_degree != ell)
        throw Error("pencil invariants do not add up to the regular part");
    return cf;
}

struct Block {
    std::size_t row0, rows, col0, cols;
};

/// Block layout of assemble_canonical_form, in assembly order.
std::vector<Block> block_layout(const PencilCanonicalForm& cf)
{
    std::vector<Block> out;
    std::size_t r = 0, c = 0;
    auto push = [&](std::size_t rows, std::size_t cols) {
        out.push_back({r, rows, c, cols});
        r += rows;
        c += cols;
    };
    push(cf.zero_rows, cf.zero_cols);
    for (auto e : cf.eps)
        push(e, e + 1);
    for (auto e : cf.eta)
        push(e + 1, e);
    for (const auto& f : cf.invariant_factors)
        push(*f.degree(), *f.degree());
    for (auto k : cf.infinite_divisors)
        push(k, k);
    return out;
}

Scalar random_scalar(const FieldSpec& field, std::mt19937_64& rng)
{
    if (field.is_finite())
        return Scalar::from_int(field, static_cast<long>(rng() % field.modulus()));
    return Scalar::from_int(field, static_cast<long>(rng() % 7) - 3);
}

} // namespace

Tensor l_block(const FieldSpec& field, std::size_t eps)
{
    if (eps == 0)
        throw InvalidArgument("L block needs eps >= 1");
    Tensor t(field, Shape({2, eps, eps + 1}));
    for (std::size_t i = 0; i < eps; ++i) {
        t.at({0, i, i}) = Scalar::one(field);
        t.at({1, i, i + 1}) = Scalar::one(field);
    }
    return t;
}

Tensor n_block(const FieldSpec& field, std::size_t eta)
{
    if (eta == 0)
        throw InvalidArgument("N block needs eta >= 1");
    Tensor t(field, Shape({2, eta + 1, eta}));
    for (std::size_t i = 0; i < eta; ++i) {
        t.at({0, i, i}) = Scalar::one(field);
        t.at({1, i + 1, i}) = Scalar::one(field);
    }
    return t;
}

std::vector<Poly> smith_invariant_factors(const PolyMatrix& pm)
{
    const std::size_t rows = pm.rows(), cols = pm.cols();
    std::vector<std::vector<Poly>> a(rows, std::vector<Poly>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            a[i][j] = pm(i, j);

    std::vector<Poly> out;
    for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
        while (true) {
            // Pivot: nonzero entry of least degree.
            std::size_t pi = rows, pj = cols, best = SIZE_MAX;
            for (std::size_t i = k; i < rows; ++i)
                for (std::size_t j = k; j < cols; ++j)
                    if (!a[i][j].is_zero() && *a[i][j].degree() < best) {
                        best = *a[i][j].degree();
                        pi = i;
                        pj = j;
                    }
            if (pi == rows)
                return out;
            std::swap(a[k], a[pi]);
            for (auto& row : a)
                std::swap(row[k], row[pj]);

            bool clean = true;
            for (std::size_t i = k + 1; i < rows; ++i) {
                if (a[i][k].is_zero())
                    continue;
                auto [q, rem] = Poly::divmod(a[i][k], a[k][k]);
                for (std::size_t j = k; j < cols; ++j)
                    if (!a[k][j].is_zero())
                        a[i][j] -= q * a[k][j];
                clean = clean && rem.is_zero();
            }
            for (std::size_t j = k + 1; j < cols; ++j) {
                if (a[k][j].is_zero())
                    continue;
                auto [q, rem] = Poly::divmod(a[k][j], a[k][k]);
                for (std::size_t i = k; i < rows; ++i)
                    if (!a[i][k].is_zero())
                        a[i][j] -= q * a[i][k];
                clean = clean && rem.is_zero();
            }
            if (!clean)
                continue;
            // The pivot must divide the whole remaining block.
            bool divides_all = true;
            for (std::size_t i = k + 1; i < rows && divides_all; ++i)
                for (std::size_t j = k + 1; j < cols; ++j)
                    if (!a[i][j].is_zero() && !a[k][k].divides(a[i][j])) {
                        for (std::size_t jj = k; jj < cols; ++jj)
                            a[k][jj] += a[i][jj];
                        divides_all = false;
                        break;
                    }
            if (divides_all)
                break;
        }
        out.push_back(a[k][k].monic());
    }
    return out;
}

std::size_t PencilCanonicalForm::ell() const
{
    std::size_t d = std::accumulate(infinite_divisors.begin(), infinite_divisors.end(), std::size_t{0});
    for (const auto& f : invariant_factors)
        d += *f.degree();
    return d;
}

Tensor apply_basis_change(const Tensor& t, const BasisChange& bc)
{
    return t.mode_product(0, bc.A).mode_product(1, bc.B).mode_product(2, bc.C);
}

Tensor assemble_canonical_form(const PencilCanonicalForm& cf)
{
    const FieldSpec& field = cf.field;
    Tensor out(field, Shape({2, cf.n, cf.m}));
    std::vector<Block> blocks = block_layout(cf);
    const Scalar one = Scalar::one(field);
    std::size_t b = 1;
    for (auto e : cf.eps) {
        const Block& bl = blocks[b++];
        for (std::size_t i = 0; i < e; ++i) {
            out.at({0, bl.row0 + i, bl.col0 + i}) = one;
            out.at({1, bl.row0 + i, bl.col0 + i + 1}) = one;
        }
    }
    for (auto e : cf.eta) {
        const Block& bl = blocks[b++];
        for (std::size_t i = 0; i < e; ++i) {
            out.at({0, bl.row0 + i, bl.col0 + i}) = one;
            out.at({1, bl.row0 + i + 1, bl.col0 + i}) = one;
        }
    }
    // Companion block of monic f: ones below the diagonal, -f_i in the last
    // column.
    auto companion = [&](const Block& bl, const Poly& f, std::size_t companion_leg) {
        std::size_t g = bl.rows;
        for (std::size_t i = 0; i < g; ++i) {
            out.at({1 - companion_leg, bl.row0 + i, bl.col0 + i}) = one;
            if (i + 1 < g)
                out.at({companion_leg, bl.row0 + i + 1, bl.col0 + i}) = one;
            Scalar c = -f.coeff(i);
            if (!c.is_zero())
                out.at({companion_leg, bl.row0 + i, bl.col0 + g - 1}) = c;
        }
    };
    for (const auto& f : cf.invariant_factors)
        companion(blocks[b++], f, 1);
    for (auto k : cf.infinite_divisors)
        companion(blocks[b++], Poly::monomial(one, k), 0);
    if (out.shape()[1] != blocks.back().row0 + blocks.back().rows ||
        out.shape()[2] != blocks.back().col0 + blocks.back().cols)
        throw Error("canonical form blocks do not fill the pencil");
    return out;
}

PencilCanonicalForm pencil_invariants(const Tensor& t)
{
    PencilCanonicalForm cf = compute_invariants(t);
    std::size_t rows = cf.zero_rows + cf.ell(), cols = cf.zero_cols + cf.ell();
    for (auto e : cf.eps) {
        rows += e;
        cols += e + 1;
    }
    for (auto e : cf.eta) {
        rows += e + 1;
        cols += e;
    }
    if (rows != cf.n || cols != cf.m)
        throw Error("pencil invariants do not reconstruct the shape");
    return cf;
}

std::pair<PencilCanonicalForm, BasisChange> kronecker_canonical_form(const Tensor& t, std::uint64_t seed)
{
    PencilCanonicalForm cf = pencil_invariants(t);
    const FieldSpec& field = cf.field;
    const Tensor src = padded(t);
    const Tensor target = assemble_canonical_form(cf);

    BasisChange bc{cf.chart, Matrix::identity(field, cf.n), Matrix::identity(field, cf.m)};
    if (apply_basis_change(src, bc) == target)
        return {cf, bc};

    // With T'_a the chart slices, solve T'_a Z = X K_a blockwise for
    // X = B^{-1}, Z = C^T, then pick a random invertible solution.
    const Tensor charted = src.mode_product(0, cf.chart);
    const Matrix t1 = charted.slice_matrix(0, 0), t2 = charted.slice_matrix(0, 1);
    const Matrix k1 = target.slice_matrix(0, 0), k2 = target.slice_matrix(0, 1);
    const std::size_t n = cf.n, m = cf.m;

    struct Solutions {
        Block block;
        std::vector<Vector> basis;
    };
    std::vector<Solutions> sols;
    for (const Block& bl : block_layout(cf)) {
        if (bl.rows == 0 && bl.cols == 0)
            continue;
        const std::size_t nz = m * bl.cols, nx = n * bl.rows;
        Matrix sys(field, 2 * n * bl.cols, nz + nx);
        for (std::size_t a = 0; a < 2; ++a) {
            const Matrix& ta = a == 0 ? t1 : t2;
            const Matrix& ka = a == 0 ? k1 : k2;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < bl.cols; ++j) {
                    std::size_t eq = (a * n + i) * bl.cols + j;
                    for (std::size_t l = 0; l < m; ++l)
                        if (!ta(i, l).is_zero())
                            sys(eq, l * bl.cols + j) = ta(i, l);
                    for (std::size_t l = 0; l < bl.rows; ++l) {
                        const Scalar& kv = ka(bl.row0 + l, bl.col0 + j);
                        if (!kv.is_zero())
                            sys(eq, nz + i * bl.rows + l) = -kv;
                    }
                }
        }
        sols.push_back({bl, sys.nullspace()});
    }

    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 500; ++attempt) {
        Matrix x(field, n, n), z(field, m, m);
        for (const auto& s : sols) {
            const Block& bl = s.block;
            Vector v(bl.cols * m + bl.rows * n, Scalar::zero(field));
            for (const auto& b : s.basis) {
                Scalar c = random_scalar(field, rng);
                if (c.is_zero())
                    continue;
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (!b[i].is_zero())
                        v[i].add_product(c, b[i]);
            }
            for (std::size_t l = 0; l < m; ++l)
                for (std::size_t j = 0; j < bl.cols; ++j)
                    z(l, bl.col0 + j) = v[l * bl.cols + j];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t l = 0; l < bl.rows; ++l)
                    x(i, bl.row0 + l) = v[m * bl.cols + i * bl.rows + l];
        }
        auto b_inv = x.try_inverse();
        if (!b_inv || !z.try_inverse())
            continue;
        bc.B = *b_inv;
        bc.C = z.transpose();
        if (apply_basis_change(src, bc) != target)
            throw Error("pencil basis change failed reconstruction");
        return {cf, bc};
    }
    throw Error("no invertible pencil basis change found after 500 random attempts");
}

std::size_t m_of_F(const std::vector<Poly>& factors, const std::vector<std::size_t>& infinite)
{
    std::size_t finite = 0;
    for (const auto& f : factors) {
        if (f.is_constant())
            continue;
        if (!Poly::gcd(f, f.derivative()).is_constant())
            ++finite;
    }
    std::size_t inf = static_cast<std::size_t>(std::count_if(infinite.begin(), infinite.end(), [](std::size_t k) {
        return k >= 2;
    }));
    return std::max(finite, inf);
}

namespace {

/// Whether f divides x^p - x, i.e. f is a product of distinct linear factors.
bool splits_squarefree(const Poly& f)
{
    const FieldSpec& field = f.field();
    Poly x = Poly::x(field);
    Poly result = Poly::constant(Scalar::one(field));
    Poly base = Poly::divmod(x, f).second;
    for (std::uint64_t e = field.modulus(); e; e >>= 1) {
        if (e & 1)
            result = Poly::divmod(result * base, f).second;
        base = Poly::divmod(base * base, f).second;
    }
    return Poly::divmod(result - x, f).second.is_zero();
}

} // namespace

std::size_t delta_of_B(const std::vector<Poly>& factors, const std::vector<std::size_t>& infinite)
{
    std::vector<Poly> fs = nonconstant(factors);
    for (const auto& f : fs)
        if (!f.field().is_finite())
            throw InvalidArgument("delta(B) needs a prime field");
    std::vector<std::size_t> ks = infinite;
    std::sort(ks.begin(), ks.end());
    // Homogeneous invariant divisors, aligned at the top of the chain.
    std::size_t count = 0;
    const std::size_t len = std::max(fs.size(), ks.size());
    for (std::size_t j = 0; j < len; ++j) {
        bool bad = false;
        if (j < fs.size() && !splits_squarefree(fs[fs.size() - 1 - j]))
            bad = true;
        if (j < ks.size() && ks[ks.size() - 1 - j] >= 2)
            bad = true;
        count += bad;
    }
    return count;
}

PencilRank pencil_rank(const PencilCanonicalForm& cf, PencilPolicy policy)
{
    PencilRank pr;
    for (auto e : cf.eps)
        pr.singular += e + 1;
    for (auto e : cf.eta)
        pr.singular += e + 1;
    pr.ell = cf.ell();
    if (cf.field.is_finite()) {
        const std::uint64_t q = cf.field.modulus();
        pr.hypothesis_met = q >= cf.n && q >= cf.m;
        if (!pr.hypothesis_met && policy == PencilPolicy::require_hypothesis)
            throw FieldTooSmall("pencil rank formula over F_" + std::to_string(q) + " needs q >= n, m (n=" +
                                std::to_string(cf.n) + ", m=" + std::to_string(cf.m) + ")");
        pr.correction = delta_of_B(cf.invariant_factors, cf.infinite_divisors);
        pr.formula = "sum(eps+1)+sum(eta+1)+ell+delta(B)";
    } else {
        pr.correction = m_of_F(cf.invariant_factors, cf.infinite_divisors);
        pr.formula = "sum(eps+1)+sum(eta+1)+ell+m(F)";
    }
    pr.rank = pr.singular + pr.ell + pr.correction;
    return pr;
}

MultiplicativityReport pencil_multiplicativity_check(const Tensor& t, const Matrix& s, PencilPolicy policy)
{
    if (s.field() != t.field())
        throw FieldMismatch("pencil and s over different fields");
    MultiplicativityReport rep;
    rep.r = s.rank();
    rep.rank_t = pencil_rank(pencil_invariants(t), policy).rank;

    Tensor st(t.field(), Shape({1, s.rows(), s.cols()}));
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j)
            st.at({0, i, j}) = s(i, j);
    rep.rank_kronecker = pencil_rank(pencil_invariants(kronecker_product(padded(t), st)), policy).rank;
    if (rep.r > 0) {
        rep.rank_direct_sum =
            pencil_rank(pencil_invariants(direct_sum_shared_first_leg(std::vector<Tensor>(rep.r, padded(t)))), policy)
                .rank;
    }
    rep.ok = rep.rank_kronecker == rep.r * rep.rank_t && rep.rank_direct_sum == rep.r * rep.rank_t;
    return rep;
}

MultiplicativityReport pencil_multiplicativity_check(const Tensor& t, std::size_t r, PencilPolicy policy)
{
    if (r == 0)
        throw InvalidArgument("multiplicativity check needs r >= 1");
    return pencil_multiplicativity_check(t, Matrix::identity(t.field(), r), policy);
}

} // namespace tensorrank
