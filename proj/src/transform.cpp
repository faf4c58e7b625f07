#include "tensorrank/transform.hpp"

#include <algorithm>
#include <functional>

namespace tensorrank {

namespace {

void check_maps(const FieldSpec& field, const Shape& source, const Shape& target, std::size_t nmaps,
                const std::function<std::pair<std::size_t, std::size_t>(std::size_t)>& dims)
{
    if (source.order() != target.order() || nmaps != source.order())
        throw ShapeError("need one leg map per leg (source order " + std::to_string(source.order()) +
                         ", target order " + std::to_string(target.order()) + ", " + std::to_string(nmaps) +
                         " maps)");
    for (std::size_t i = 0; i < nmaps; ++i) {
        auto [r, c] = dims(i);
        if (r != target[i] || c != source[i])
            throw ShapeError("leg map " + std::to_string(i + 1) + " is " + std::to_string(r) + "x" +
                             std::to_string(c) + ", expected " + std::to_string(target[i]) + "x" +
                             std::to_string(source[i]));
    }
    (void)field;
}

std::optional<std::vector<std::size_t>> first_difference(const Tensor& a, const Tensor& b)
{
    for (std::size_t i = 0; i < a.shape().size(); ++i)
        if (a[i] != b[i])
            return a.shape().unravel(i);
    return std::nullopt;
}

} // namespace

void Restriction::validate() const
{
    check_maps(field, source, target, maps.size(), [&](std::size_t i) {
        if (!(maps[i].field() == field))
            throw FieldMismatch();
        return std::pair{maps[i].rows(), maps[i].cols()};
    });
}

void Degeneration::validate() const
{
    check_maps(field, source, target, maps.size(), [&](std::size_t i) {
        if (!(maps[i].field() == field))
            throw FieldMismatch();
        return std::pair{maps[i].rows(), maps[i].cols()};
    });
}

std::size_t Degeneration::max_entry_degree() const
{
    std::size_t best = 0;
    for (const auto& m : maps)
        if (auto d = m.max_degree())
            best = std::max(best, *d);
    return best;
}

Tensor apply_restriction(const Restriction& r, const Tensor& t)
{
    r.validate();
    if (!(t.shape() == r.source))
        throw ShapeError("tensor shape " + t.shape().to_string() + " does not match restriction source " +
                         r.source.to_string());
    if (!(t.field() == r.field))
        throw FieldMismatch();
    Tensor out = t;
    for (std::size_t i = 0; i < r.maps.size(); ++i)
        out = out.mode_product(i, r.maps[i]);
    return out;
}

Expansion apply_degeneration(const Degeneration& g, const Tensor& t)
{
    g.validate();
    if (!(t.shape() == g.source))
        throw ShapeError("tensor shape " + t.shape().to_string() + " does not match degeneration source " +
                         g.source.to_string());
    if (!(t.field() == g.field))
        throw FieldMismatch();

    // Expansion by eps-degree, one leg at a time.
    std::vector<Tensor> current{t};
    for (std::size_t leg = 0; leg < g.maps.size(); ++leg) {
        const PolyMatrix& a = g.maps[leg];
        const std::size_t da = a.max_degree().value_or(0);
        std::vector<Matrix> coeffs;
        for (std::size_t b = 0; b <= da; ++b)
            coeffs.push_back(a.coefficient(b));
        std::vector<std::size_t> dims = current.front().shape().dims();
        dims[leg] = a.rows();
        std::vector<Tensor> next(current.size() + da, Tensor(g.field, Shape(dims)));
        for (std::size_t deg = 0; deg < current.size(); ++deg) {
            if (current[deg].is_zero())
                continue;
            for (std::size_t b = 0; b <= da; ++b) {
                if (coeffs[b].is_zero())
                    continue;
                next[deg + b] += current[deg].mode_product(leg, coeffs[b]);
            }
        }
        current = std::move(next);
    }

    Expansion ex;
    std::optional<std::size_t> low, high;
    for (std::size_t deg = 0; deg < current.size(); ++deg)
        if (!current[deg].is_zero()) {
            if (!low)
                low = deg;
            high = deg;
        }
    if (!low)
        throw InvalidCertificate("degeneration maps the source to zero");
    current.resize(*high + 1);
    ex.coefficients = std::move(current);
    ex.d = *low;
    ex.e = *high - *low;
    return ex;
}

VerifyResult verify_restriction(const Restriction& r, const Tensor& source, const Tensor& target)
{
    VerifyResult res;
    Tensor image = apply_restriction(r, source);
    if (!(image.shape() == target.shape())) {
        res.message = "image shape " + image.shape().to_string() + " differs from target " +
                      target.shape().to_string();
        return res;
    }
    if (auto diff = first_difference(image, target)) {
        res.mismatch_index = diff;
        res.message = "image differs from target";
        return res;
    }
    res.ok = true;
    res.message = "restriction verified";
    return res;
}

VerifyResult verify_degeneration(const Degeneration& g, const Tensor& source, const Tensor& target)
{
    VerifyResult res;
    Expansion ex;
    try {
        ex = apply_degeneration(g, source);
    } catch (const InvalidCertificate& err) {
        res.message = err.what();
        return res;
    }
    res.d = ex.d;
    res.e = ex.e;
    if (!(ex.leading().shape() == target.shape())) {
        res.message = "image shape differs from target";
        return res;
    }
    // The claimed eps^d coefficient must be the target; lower degrees vanish.
    if (g.claimed_d < ex.coefficients.size()) {
        if (auto diff = first_difference(ex.coefficients[g.claimed_d], target)) {
            res.mismatch_index = diff;
            res.mismatch_degree = g.claimed_d;
            res.message = "eps^" + std::to_string(g.claimed_d) + " coefficient differs from target";
            return res;
        }
    } else {
        res.mismatch_degree = g.claimed_d;
        res.message = "claimed d exceeds the top degree of the expansion";
        return res;
    }
    if (ex.d != g.claimed_d) {
        res.mismatch_degree = ex.d;
        res.mismatch_index = first_difference(ex.coefficients[ex.d], Tensor(g.field, g.target));
        res.message = "nonzero eps^" + std::to_string(ex.d) + " term below the claimed approximation degree";
        return res;
    }
    if (ex.e > g.claimed_e) {
        res.mismatch_degree = ex.d + ex.e;
        res.message = "error degree " + std::to_string(ex.e) + " exceeds the claimed " +
                      std::to_string(g.claimed_e);
        return res;
    }
    res.ok = true;
    res.message = "degeneration verified";
    return res;
}

VerifyResult verify_decomposition(const Decomposition& dec, const Tensor& target)
{
    VerifyResult res;
    if (!(dec.shape() == target.shape())) {
        res.message = "decomposition shape differs from target";
        return res;
    }
    if (auto diff = first_difference(eval_decomposition(dec), target)) {
        res.mismatch_index = diff;
        res.message = "decomposition differs from target";
        return res;
    }
    res.ok = true;
    res.message = "decomposition verified with " + std::to_string(dec.size()) + " terms";
    return res;
}

Degeneration degeneration_product(const Degeneration& g1, const Degeneration& g2, ProductMode mode)
{
    if (!(g1.field == g2.field))
        throw FieldMismatch();
    g1.validate();
    g2.validate();
    Degeneration g;
    g.field = g1.field;
    g.claimed_d = g1.claimed_d + g2.claimed_d;
    g.claimed_e = g1.claimed_e + g2.claimed_e;
    if (mode == ProductMode::tensor) {
        std::vector<std::size_t> s = g1.source.dims(), t = g1.target.dims();
        s.insert(s.end(), g2.source.dims().begin(), g2.source.dims().end());
        t.insert(t.end(), g2.target.dims().begin(), g2.target.dims().end());
        g.source = Shape(s);
        g.target = Shape(t);
        g.maps = g1.maps;
        g.maps.insert(g.maps.end(), g2.maps.begin(), g2.maps.end());
        return g;
    }
    if (g1.maps.size() != g2.maps.size())
        throw ShapeError("Kronecker product of degenerations needs equal orders");
    std::vector<std::size_t> s, t;
    for (std::size_t i = 0; i < g1.maps.size(); ++i) {
        s.push_back(g1.source[i] * g2.source[i]);
        t.push_back(g1.target[i] * g2.target[i]);
        g.maps.push_back(kron(g1.maps[i], g2.maps[i]));
    }
    g.source = Shape(s);
    g.target = Shape(t);
    return g;
}

Degeneration degeneration_power(const Degeneration& g, std::size_t n)
{
    if (n == 0)
        throw InvalidArgument("power must be at least 1");
    Degeneration out = g;
    for (std::size_t i = 1; i < n; ++i)
        out = degeneration_product(out, g, ProductMode::tensor);
    return out;
}

Degeneration truncate_degeneration(const Degeneration& g, const Tensor& source)
{
    Expansion ex = apply_degeneration(g, source);
    if (ex.d != g.claimed_d || ex.e > g.claimed_e)
        throw InvalidCertificate("degeneration does not verify with its claimed degrees");
    Degeneration out = g;
    for (auto& m : out.maps)
        m = m.truncate(g.claimed_d);
    Expansion tex = apply_degeneration(out, source);
    if (tex.d != ex.d || tex.leading() != ex.leading())
        throw InvalidCertificate("truncation changed the leading coefficient");
    out.claimed_e = tex.e;
    return out;
}

std::vector<Scalar> interpolation_weights(const std::vector<Scalar>& alphas)
{
    std::vector<Scalar> beta;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        Scalar b = Scalar::one(alphas[j].field());
        for (std::size_t m = 0; m < alphas.size(); ++m)
            if (m != j)
                b *= alphas[m] / (alphas[m] - alphas[j]);
        beta.push_back(b);
    }
    return beta;
}

namespace {

std::vector<Scalar> choose_alphas(const FieldSpec& field, std::size_t count,
                                  const std::optional<std::vector<Scalar>>& alphas)
{
    if (auto card = field.cardinality(); card && *card < count + 1)
        throw FieldTooSmall("interpolation needs " + std::to_string(count) + " distinct nonzero points but the field has " +
                            std::to_string(*card) + " elements");
    std::vector<Scalar> pts;
    if (alphas) {
        pts = *alphas;
        if (pts.size() != count)
            throw InvalidArgument("expected " + std::to_string(count) + " interpolation points, got " +
                                  std::to_string(pts.size()));
    } else {
        for (std::size_t j = 0; j < count; ++j)
            pts.push_back(Scalar::from_int(field, static_cast<long>(j + 1)));
    }
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (!(pts[j].field() == field))
            throw FieldMismatch();
        if (pts[j].is_zero())
            throw InvalidArgument("interpolation points must be nonzero");
        for (std::size_t m = 0; m < j; ++m)
            if (pts[m] == pts[j])
                throw InvalidArgument("interpolation points must be distinct");
    }
    return pts;
}

} // namespace

Restriction interpolate_to_restriction(const Degeneration& g, const std::optional<std::vector<Scalar>>& alphas)
{
    g.validate();
    const std::size_t points = g.claimed_e + 1;
    std::vector<Scalar> pts = choose_alphas(g.field, points, alphas);
    std::vector<Scalar> beta = interpolation_weights(pts);

    Restriction r;
    r.field = g.field;
    r.target = g.target;
    std::vector<std::size_t> src;
    for (std::size_t i = 0; i < g.maps.size(); ++i)
        src.push_back(g.source[i] * points);
    r.source = Shape(src);
    for (std::size_t i = 0; i < g.maps.size(); ++i) {
        const PolyMatrix& a = g.maps[i];
        Matrix b(g.field, a.rows(), a.cols() * points);
        for (std::size_t j = 0; j < points; ++j) {
            Matrix aj = a.eval(pts[j]);
            Scalar scale = Scalar::one(g.field);
            // Only the first leg carries the interpolation weight.
            if (i == 0)
                scale = beta[j] * pts[j].pow(g.claimed_d).inverse();
            for (std::size_t u = 0; u < a.cols(); ++u)
                for (std::size_t row = 0; row < a.rows(); ++row)
                    b(row, u * points + j) = scale * aj(row, u);
        }
        r.maps.push_back(std::move(b));
    }
    return r;
}

Restriction chi_restriction(const Degeneration& g)
{
    g.validate();
    const std::size_t d = g.claimed_d;
    if (g.max_entry_degree() > d)
        throw InvalidArgument("map entries exceed degree d = " + std::to_string(d) + "; truncate first");
    Restriction r;
    r.field = g.field;
    r.target = g.target;
    std::vector<std::size_t> src;
    for (std::size_t i = 0; i < g.maps.size(); ++i)
        src.push_back(g.source[i] * (d + 1));
    r.source = Shape(src);
    for (const auto& a : g.maps) {
        Matrix b(g.field, a.rows(), a.cols() * (d + 1));
        for (std::size_t deg = 0; deg <= d; ++deg) {
            Matrix c = a.coefficient(deg);
            for (std::size_t u = 0; u < a.cols(); ++u)
                for (std::size_t row = 0; row < a.rows(); ++row)
                    b(row, u * (d + 1) + deg) = c(row, u);
        }
        r.maps.push_back(std::move(b));
    }
    return r;
}

Decomposition power_decomposition(const Degeneration& g, std::size_t n, const std::optional<std::vector<Scalar>>& alphas)
{
    if (n == 0)
        throw InvalidArgument("power must be at least 1");
    g.validate();
    const std::size_t k = g.maps.size();
    const std::size_t r = g.source[0];
    for (std::size_t i = 0; i < k; ++i)
        if (g.source[i] != r)
            throw InvalidArgument("power decomposition needs a unit tensor source");
    Expansion ex = apply_degeneration(g, unit_tensor(g.field, r, k));
    if (ex.d != g.claimed_d || ex.e > g.claimed_e)
        throw InvalidCertificate("degeneration does not verify with its claimed degrees");
    const Tensor& s = ex.leading();

    // The n-fold product has d' = n d and e' = n e; interpolate at n e + 1
    // points and push each term of unit(r)^{(x)n} (kron) unit(N) through.
    const std::size_t e = ex.e;
    const std::size_t points = n * e + 1;
    std::vector<Scalar> pts = choose_alphas(g.field, points, alphas);
    std::vector<Scalar> beta = interpolation_weights(pts);
    std::vector<std::vector<Matrix>> evals(k);
    for (std::size_t leg = 0; leg < k; ++leg)
        for (const auto& a : pts)
            evals[leg].push_back(g.maps[leg].eval(a));

    std::vector<std::size_t> dims;
    for (std::size_t f = 0; f < n; ++f)
        dims.insert(dims.end(), g.target.dims().begin(), g.target.dims().end());
    Decomposition dec(g.field, Shape(dims));

    std::vector<std::size_t> idx(n, 0);
    for (std::size_t j = 0; j < points; ++j) {
        Scalar scale = beta[j] * pts[j].pow(n * ex.d).inverse();
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            SimpleTensor term;
            bool zero = false;
            for (std::size_t f = 0; f < n && !zero; ++f)
                for (std::size_t leg = 0; leg < k && !zero; ++leg) {
                    Vector v = evals[leg][j].column(idx[f]);
                    if (f == 0 && leg == 0)
                        for (auto& x : v)
                            x *= scale;
                    zero = std::all_of(v.begin(), v.end(), [](const Scalar& x) { return x.is_zero(); });
                    term.factors.push_back(std::move(v));
                }
            if (!zero)
                dec.add(std::move(term));
            std::size_t f = n;
            while (f > 0 && ++idx[f - 1] == r)
                idx[--f] = 0;
            if (f == 0)
                break;
        }
    }

    Tensor target = s;
    for (std::size_t f = 1; f < n; ++f)
        target = tensor_product(target, s);
    if (eval_decomposition(dec) != target)
        throw InvalidCertificate("power decomposition failed to reproduce the target");
    return dec;
}

namespace {

Poly eps_term(const FieldSpec& field, long c, std::size_t degree)
{
    return Poly::monomial(Scalar::from_int(field, c), degree);
}

} // namespace

Degeneration w_degeneration(const FieldSpec& field, std::size_t k)
{
    if (k < 3)
        throw InvalidArgument("W_k needs k >= 3");
    Degeneration g;
    g.field = field;
    g.source = Shape(std::vector<std::size_t>(k, 2));
    g.target = g.source;
    g.claimed_d = 1;
    g.claimed_e = k - 1;
    for (std::size_t i = 0; i < k; ++i) {
        PolyMatrix a(field, 2, 2);
        a(0, 0) = eps_term(field, 1, 0);
        a(0, 1) = eps_term(field, i + 1 == k ? -1 : 1, 0);
        a(1, 0) = eps_term(field, 1, 1);
        g.maps.push_back(std::move(a));
    }
    return g;
}

Degeneration strassen_degeneration(const FieldSpec& field, std::size_t q, std::size_t k)
{
    if (q < 1 || k < 3)
        throw InvalidArgument("Str_q^k needs q >= 1 and k >= 3");
    const std::size_t n = q + 1;
    Degeneration g;
    g.field = field;
    g.source = Shape(std::vector<std::size_t>(k, n));
    g.target = g.source;
    g.claimed_d = 1;
    g.claimed_e = 1;
    PolyMatrix a1(field, n, n), a2(field, n, n), a3(field, n, n), rest(field, n, n);
    // Column i >= 2: (b_1 + eps b_i) (x) b_i (x) (b_1 + eps b_i) (x) b_1 ...
    for (std::size_t i = 1; i < n; ++i) {
        a1(0, i) = eps_term(field, 1, 0);
        a1(i, i) = eps_term(field, 1, 1);
        a2(i, i) = eps_term(field, 1, 0);
        a3(0, i) = eps_term(field, 1, 0);
        a3(i, i) = eps_term(field, 1, 1);
        a2(i, 0) = eps_term(field, 1, 0);
    }
    // Column 1 cancels the eps^0 part: -b_1 (x) (sum b_i) (x) b_1 (x) b_1 ...
    a1(0, 0) = eps_term(field, -1, 0);
    a3(0, 0) = eps_term(field, 1, 0);
    for (std::size_t i = 0; i < n; ++i)
        rest(0, i) = eps_term(field, 1, 0);
    g.maps = {a1, a2, a3};
    for (std::size_t i = 3; i < k; ++i)
        g.maps.push_back(rest);
    return g;
}

Decomposition two_term_w3_plus(const Scalar& c)
{
    const FieldSpec& field = c.field();
    if (field.characteristic() == 2)
        throw InvalidArgument("two-term decomposition needs characteristic other than 2");
    auto root = c.sqrt();
    if (!root)
        throw InvalidArgument("no square root of " + c.to_string() + " in " + field.to_string());
    if (root->is_zero())
        throw InvalidArgument("c must be nonzero");
    Scalar one = Scalar::one(field);
    Scalar half_inv_root = (Scalar::from_int(field, 2) * *root).inverse();
    Vector plus{one, *root}, minus{one, -*root};
    Vector plus_scaled{half_inv_root, half_inv_root * *root};
    Vector minus_scaled{-half_inv_root, half_inv_root * *root};
    Decomposition dec(field, Shape({2, 2, 2}));
    dec.add(SimpleTensor{{plus_scaled, plus, plus}});
    dec.add(SimpleTensor{{minus_scaled, minus, minus}});
    return dec;
}

Decomposition w3_squared_decomposition(const FieldSpec& field)
{
    Scalar half = Scalar::from_int(field, 2).inverse();
    Decomposition w_plus_b = two_term_w3_plus(Scalar::one(field));
    Decomposition w_plus_half_b = two_term_w3_plus(half);
    Vector b2{Scalar::zero(field), Scalar::one(field)};
    Vector minus_b2{Scalar::zero(field), -Scalar::one(field)};
    Decomposition minus_b(field, Shape({2, 2, 2}));
    minus_b.add(SimpleTensor{std::vector<Vector>{minus_b2, b2, b2}});

    // (W + b)^2 - (W + b/2) b - b (W + b/2) with b = b_2^{(x)3}.
    Decomposition out(field, Shape({2, 2, 2, 2, 2, 2}));
    for (const auto& part : {decomposition_tensor_product(w_plus_b, w_plus_b),
                             decomposition_tensor_product(w_plus_half_b, minus_b),
                             decomposition_tensor_product(minus_b, w_plus_half_b)})
        for (const auto& t : part.terms())
            out.add(t);
    return out;
}

Decomposition matmul224_decomposition(const FieldSpec& field)
{
    Decomposition s = strassen7_decomposition(field);
    Decomposition out(field, Shape({4, 8, 8}));
    for (std::size_t h = 0; h < 2; ++h)
        for (const auto& t : s.terms()) {
            Vector v(8, Scalar::zero(field)), w(8, Scalar::zero(field));
            for (std::size_t i2 = 0; i2 < 2; ++i2)
                for (std::size_t i3 = 0; i3 < 2; ++i3)
                    v[i2 * 4 + 2 * h + i3] = t.factors[1][i2 * 2 + i3];
            for (std::size_t i3 = 0; i3 < 2; ++i3)
                for (std::size_t i1 = 0; i1 < 2; ++i1)
                    w[(2 * h + i3) * 2 + i1] = t.factors[2][i3 * 2 + i1];
            out.add(SimpleTensor{{t.factors[0], v, w}});
        }
    return out;
}

} // namespace tensorrank
