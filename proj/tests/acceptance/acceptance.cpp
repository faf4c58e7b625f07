// Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.
//
// Exit status is nonzero when a criterion fails that is not listed in
// kKnownFailures. Known failures still print FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <gmpxx.h>

#include "tensorrank/errors.hpp"
#include "tensorrank/experiments.hpp"
#include "../unit/test_support.hpp"

using namespace tensorrank;
using testsupport::rank_table;
using testsupport::tensor_from_code;

namespace {

// The rank formula undercounts two 2x3x3 pencil classes over F_2, where the
// field is smaller than the pencil; see the project notes.
const std::set<int> kKnownFailures{7};

struct Outcome {
    bool pass = false;
    std::string detail;
};

const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F2 = FieldSpec::prime(2);
const FieldSpec F3 = FieldSpec::prime(3);
const FieldSpec F5 = FieldSpec::prime(5);
const FieldSpec F7 = FieldSpec::prime(7);

Scalar num(const FieldSpec& f, long v) { return Scalar::from_int(f, v); }

// Independent evaluation of a decomposition, entry by entry.
Tensor oracle_eval(const Decomposition& dec)
{
    Tensor t(dec.field(), dec.shape());
    for (std::size_t off = 0; off < dec.shape().size(); ++off) {
        auto idx = dec.shape().unravel(off);
        Scalar s = Scalar::zero(dec.field());
        for (const auto& term : dec.terms()) {
            Scalar prod = Scalar::one(dec.field());
            for (std::size_t leg = 0; leg < idx.size(); ++leg)
                prod *= term.factors[leg][idx[leg]];
            s += prod;
        }
        t[off] = s;
    }
    return t;
}

// Coefficients of eps^a of g applied to unit(r, k), computed entrywise as
// sum_i prod_leg g_leg(j_leg, i).
std::vector<Tensor> oracle_unit_expansion(const Degeneration& g)
{
    const FieldSpec& f = g.field;
    const std::size_t r = g.source[0];
    std::vector<Poly> entries(g.target.size(), Poly(f));
    std::size_t top = 0;
    for (std::size_t off = 0; off < g.target.size(); ++off) {
        auto idx = g.target.unravel(off);
        Poly sum(f);
        for (std::size_t i = 0; i < r; ++i) {
            Poly prod = Poly::constant(Scalar::one(f));
            for (std::size_t leg = 0; leg < idx.size(); ++leg)
                prod *= g.maps[leg](idx[leg], i);
            sum += prod;
        }
        if (auto d = sum.degree())
            top = std::max(top, *d);
        entries[off] = sum;
    }
    std::vector<Tensor> coeffs(top + 1, Tensor(f, g.target));
    for (std::size_t off = 0; off < g.target.size(); ++off)
        for (std::size_t a = 0; a <= top; ++a)
            coeffs[a][off] = entries[off].coeff(a);
    return coeffs;
}

// Lowest nonzero eps-power and the highest one, relative to it.
std::pair<std::size_t, std::size_t> oracle_degrees(const std::vector<Tensor>& coeffs)
{
    std::size_t lo = 0, hi = 0;
    bool found = false;
    for (std::size_t a = 0; a < coeffs.size(); ++a) {
        if (coeffs[a].is_zero())
            continue;
        if (!found)
            lo = a;
        found = true;
        hi = a;
    }
    return {lo, hi - lo};
}

std::size_t binomial(std::size_t n, std::size_t k)
{
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out.get_ui();
}

Tensor random_tensor_over(const FieldSpec& f, const Shape& s, std::mt19937_64& rng)
{
    Tensor t(f, s);
    for (std::size_t i = 0; i < s.size(); ++i)
        t[i] = f.is_finite() ? num(f, static_cast<long>(rng() % f.modulus())) : num(f, static_cast<long>(rng() % 5) - 2);
    return t;
}

Outcome criterion1()
{
    PencilCanonicalForm cf = pencil_invariants(w_tensor(Q, 3));
    PencilRank pr = pencil_rank(cf);
    std::size_t m = m_of_F(cf.invariant_factors, cf.infinite_divisors);
    std::optional<std::size_t> brute = brute_force_rank(w_tensor(F2, 3), 4).rank;
    SubstitutionResult sub = substitution_lower_bound(w_tensor(F5, 3));
    Decomposition trivial(Q, Shape({2, 2, 2}));
    for (std::size_t pos = 0; pos < 3; ++pos) {
        SimpleTensor st;
        for (std::size_t leg = 0; leg < 3; ++leg)
            st.factors.push_back(leg == pos ? Vector{num(Q, 0), num(Q, 1)} : Vector{num(Q, 1), num(Q, 0)});
        trivial.add(st);
    }
    bool ok = cf.eps.empty() && cf.eta.empty() && cf.ell() == 2 && m == 1 && pr.rank == 3 && brute == 3u &&
              sub.bound == 3 && sub.exhaustive && oracle_eval(trivial) == w_tensor(Q, 3) &&
              verify_decomposition(trivial, w_tensor(Q, 3)).ok;
    std::ostringstream d;
    d << "p=" << cf.eps.size() << " q=" << cf.eta.size() << " ell=" << cf.ell() << " m(F)=" << m
      << " pencil_rank=" << pr.rank << " brute_force(F2)=" << (brute ? std::to_string(*brute) : "none")
      << " substitution(F5)=" << sub.bound << " decomposition=" << trivial.size();
    return {ok, d.str()};
}

Outcome criterion2()
{
    bool ok = true;
    std::ostringstream d;
    for (const auto& f : {FieldSpec::quadratic(2), F7}) {
        Decomposition dec = w3_squared_decomposition(f);
        Tensor target = tensor_product(w_tensor(f, 3), w_tensor(f, 3));
        bool v = verify_decomposition(dec, target).ok && oracle_eval(dec) == target;
        ok = ok && v && dec.size() == 8 && dec.size() < 9;
        d << f.to_string() << ": " << dec.size() << " terms " << (v ? "verified" : "FAILED") << "; ";
    }
    d << "8 < 9";
    return {ok, d.str()};
}

Outcome criterion3()
{
    bool ok = true;
    std::size_t checked = 0;
    for (const auto& f : {Q, F7}) {
        for (std::size_t k : {3, 4}) {
            Degeneration g = w_degeneration(f, k);
            Tensor source = kronecker_product(unit_tensor(f, 2, k), unit_tensor(f, k, k));
            std::vector<std::vector<long>> choices =
                k == 3 ? std::vector<std::vector<long>>{{1, 2, 3}, {2, 4, 5}, {-1, 3, 4}, {6, 5, 1}}
                       : std::vector<std::vector<long>>{{1, 2, 3, 4}, {2, 3, 5, 6}, {1, 4, 5, 6}, {-2, -3, 1, 3}};
            for (const auto& c : choices) {
                std::vector<Scalar> alphas;
                for (long a : c)
                    alphas.push_back(num(f, a));
                Restriction r = interpolate_to_restriction(g, alphas);
                ok = ok && r.source == source.shape() && apply_restriction(r, source) == w_tensor(f, k);
                ++checked;
            }
        }
    }
    return {ok && checked >= 12, std::to_string(checked) + " (field, k, points) round trips, k in {3,4}, Q and F_7"};
}

Outcome criterion4()
{
    Decomposition dec = power_decomposition(w_degeneration(Q, 3), 2);
    Tensor target = tensor_product(w_tensor(Q, 3), w_tensor(Q, 3));
    bool ok = dec.size() <= 20 && oracle_eval(dec) == target;
    return {ok, std::to_string(dec.size()) + " terms <= 20 = (2*2+1)*2^2, evaluates to W_3^(x)2"};
}

Outcome criterion5()
{
    const FieldSpec f = FieldSpec::prime(10007);
    Degeneration g = strassen_degeneration(f, 7, 3);
    Tensor str7 = strassen_tensor(f, 7, 3);
    auto coeffs = oracle_unit_expansion(g);
    auto [d, e] = oracle_degrees(coeffs);
    bool deg_ok = g.source == Shape({8, 8, 8}) && d == 1 && e == 1 && coeffs[1] == str7 &&
                  verify_degeneration(g, unit_tensor(f, 8, 3), str7).ok;
    Decomposition dec = power_decomposition(g, 2);
    bool power_ok = dec.size() <= 192 && oracle_eval(dec) == tensor_product(str7, str7);
    std::ostringstream s;
    s << "(d,e)=(" << d << "," << e << ") from unit(8,3); " << dec.size() << " terms "
      << (power_ok ? "verified" : "FAILED") << "; " << dec.size() << " < 196";
    return {deg_ok && power_ok && dec.size() < 196, s.str()};
}

Outcome criterion6()
{
    std::mt19937_64 rng(kDefaultSeed);
    std::size_t checked = 0, attempts = 0;
    bool ok = true;
    while (checked < 200 && attempts < 5000) {
        ++attempts;
        std::size_t k = 2 + rng() % 3, d = rng() % 4;
        // Per-leg lowest eps-powers summing to d; entry degrees up to d+3.
        std::vector<std::size_t> low(k, 0);
        for (std::size_t i = 0; i < d; ++i)
            ++low[rng() % k];
        Degeneration g;
        g.field = F5;
        std::vector<std::size_t> src(k, 2), tgt;
        for (std::size_t i = 0; i < k; ++i)
            tgt.push_back(1 + rng() % 2);
        g.source = Shape(src);
        g.target = Shape(tgt);
        for (std::size_t i = 0; i < k; ++i) {
            PolyMatrix m(F5, tgt[i], 2);
            for (std::size_t a = 0; a < tgt[i]; ++a)
                for (std::size_t b = 0; b < 2; ++b) {
                    std::vector<Scalar> c;
                    std::size_t top = d + rng() % 4;
                    for (std::size_t p = 0; p <= top; ++p)
                        c.push_back(p < low[i] ? num(F5, 0) : num(F5, static_cast<long>(rng() % 5)));
                    m(a, b) = Poly(F5, c);
                }
            g.maps.push_back(m);
        }
        auto before = oracle_unit_expansion(g);
        bool nonzero = false;
        for (const auto& c : before)
            nonzero = nonzero || !c.is_zero();
        if (!nonzero)
            continue;
        auto [dd, ee] = oracle_degrees(before);
        g.claimed_d = dd;
        g.claimed_e = ee;
        Degeneration t = truncate_degeneration(g, unit_tensor(F5, 2, k));
        auto after = oracle_unit_expansion(t);
        auto [d2, e2] = oracle_degrees(after);
        ok = ok && d2 == dd && after[d2] == before[dd] && e2 <= (k - 1) * dd;
        ++checked;
    }
    return {ok && checked == 200, std::to_string(checked) + " truncations over F_5, leading coefficient kept, e <= (k-1)d"};
}

Outcome criterion7()
{
    std::ostringstream d;
    std::size_t total = 0, mismatched = 0;
    for (const Shape& s : {Shape({2, 2, 2}), Shape({2, 3, 3})}) {
        auto table = rank_table(F2, s);
        std::size_t bad = 0;
        for (std::uint64_t code = 0; code < table.size(); ++code) {
            Tensor t = tensor_from_code(F2, s, code);
            std::size_t formula = pencil_rank(pencil_invariants(t), PencilPolicy::extrapolate).rank;
            if (formula != table[code])
                ++bad;
        }
        // The table is the BFS rank oracle; spot-check it against brute force.
        std::mt19937_64 rng(kDefaultSeed);
        for (int i = 0; i < 200; ++i) {
            std::uint64_t code = rng() % table.size();
            if (brute_force_rank(tensor_from_code(F2, s, code), 6).rank != std::size_t(table[code]))
                ++bad;
        }
        d << s.to_string() << " over F_2: " << bad << "/" << table.size() << " mismatches; ";
        total += table.size();
        mismatched += bad;
    }
    std::mt19937_64 rng(kDefaultSeed + 7);
    std::size_t random_bad = 0;
    for (int i = 0; i < 500; ++i) {
        const FieldSpec& f = i % 2 ? F5 : F3;
        Tensor t = random_tensor_over(f, Shape({2, 1 + rng() % 3, 1 + rng() % 3}), rng);
        std::size_t formula = pencil_rank(pencil_invariants(t), PencilPolicy::extrapolate).rank;
        if (brute_force_rank(t, 6).rank != formula)
            ++random_bad;
    }
    d << "random F_3/F_5: " << random_bad << "/500 mismatches";
    return {mismatched == 0 && random_bad == 0, d.str()};
}

Outcome criterion8()
{
    bool ok = true;
    std::ostringstream d;
    for (const auto& f : {Q, F5}) {
        ExperimentOptions o;
        o.field = f;
        o.count = 100;
        ExperimentReport r = run_experiment("pencil-mult", o);
        ok = ok && r.ok() && r.data["checks"] == 100;
        d << f.to_string() << ": " << r.claims.front().statement << "; ";
    }
    return {ok, d.str()};
}

Outcome criterion9()
{
    std::mt19937_64 rng(kDefaultSeed + 9);
    const std::vector<std::vector<std::size_t>> groupings{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}};
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const FieldSpec& f = trial % 2 ? F5 : Q;
        Shape s1({1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3}), s2({1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3});
        std::size_t r1 = 1 + rng() % 4, r2 = 1 + rng() % 4;
        Decomposition d1 = testsupport::random_decomposition(f, s1, r1, rng);
        Decomposition d2 = testsupport::random_decomposition(f, s2, r2, rng);
        Tensor t1 = eval_decomposition(d1), t2 = eval_decomposition(d2);
        const auto& g1 = groupings[rng() % groupings.size()];
        const auto& g2 = groupings[rng() % groupings.size()];
        FlatteningMap f1 = FlatteningMap::grouping(g1), f2 = FlatteningMap::grouping(g2);
        FlatteningMap prod = FlatteningMap::product(f1, 3, s1, f2, s2);
        std::size_t lhs = prod.apply(tensor_product(t1, t2)).rank();
        std::size_t rhs = flatten(t1, g1).rank() * flatten(t2, g2).rank();
        // Oracle: the grouping of t1 (x) t2 with row legs g1 and g2 + 3.
        std::vector<std::size_t> rows = g1;
        for (auto l : g2)
            rows.push_back(l + 3);
        std::size_t direct = flatten(tensor_product(t1, t2), rows).rank();
        ProductBound pb = flattening_product_bound(t1, f1, t2, f2);
        ok = ok && lhs == rhs && direct == rhs && pb.consistent && pb.bound <= mpq_class(r1 * r2) &&
             decomposition_tensor_product(d1, d2).size() == r1 * r2;
    }
    return {ok, "100 pairs: rank((F1 kron F2)(t1 (x) t2)) = rank F1(t1) * rank F2(t2), bound <= r1 r2"};
}

Outcome criterion10()
{
    bool ok = true;
    std::ostringstream d;
    for (const auto& f : {Q, F2}) {
        Decomposition dec = strassen7_decomposition(f);
        Tensor t = matmul_tensor(f, 2, 2, 2);
        bool v = dec.size() == 7 && oracle_eval(dec) == t && verify_decomposition(dec, t).ok;
        RankBoundReport rep = certify_rank(t, dec, {LowerMethod::flattening});
        ok = ok && v && rep.lower_int == 4 && rep.upper == 7u;
        d << f.to_string() << ": 7 terms " << (v ? "verified" : "FAILED") << ", flattening " << rep.lower_int << "; ";
    }
    d << "tight lower bound 7 cited, not reproduced";
    return {ok, d.str()};
}

Outcome criterion11()
{
    Degeneration g = truncate_degeneration(w_degeneration(F2, 3), unit_tensor(F2, 2, 3));
    Restriction r = chi_restriction(g);
    Tensor source = kronecker_product(unit_tensor(F2, 2, 3), chi_tensor(F2, g.claimed_d, 3));
    bool reproduced = apply_restriction(r, source) == w_tensor(F2, 3);
    bool too_small = false;
    try {
        interpolate_to_restriction(g);
    } catch (const FieldTooSmall&) {
        too_small = true;
    }
    bool counts = true;
    for (std::size_t k = 2; k <= 5; ++k)
        for (std::size_t d = 0; d <= 4; ++d)
            counts = counts && chi_tensor(F2, d, k).nonzero_count() == binomial(k + d - 1, k - 1);
    return {reproduced && too_small && counts,
            std::string("chi restriction reproduces W_3 over F_2: ") + (reproduced ? "yes" : "no") +
                "; Lagrange interpolation refused: " + (too_small ? "yes" : "no") +
                "; chi term counts match C(k+d-1,k-1) for k<=5, d<=4: " + (counts ? "yes" : "no")};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"rank(W_3) = 3 via the pencil canonical form, brute force and substitution", criterion1},
        {"8-term decomposition of W_3 (x) W_3 over Q(sqrt 2) and F_7", criterion2},
        {"interpolation round trip for W_3 and W_4", criterion3},
        {"power decomposition of W_3^(x)2 with <= 20 terms", criterion4},
        {"Str_7 degeneration and 192-term decomposition of its square", criterion5},
        {"truncation of 200 random degenerations over F_5", criterion6},
        {"pencil rank formula against exhaustive rank oracles", criterion7},
        {"pencil rank multiplicativity under diag_r", criterion8},
        {"flattening multiplicativity on tensor products", criterion9},
        {"Strassen's decomposition of <2,2,2> and its flattening bound", criterion10},
        {"chi restriction over F_2", criterion11},
    };
    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool known = kKnownFailures.count(id) > 0;
        std::printf("%s %2d  %s [%s] (%.2fs)%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(),
                    secs, !o.pass && known ? " (known limitation)" : "");
        std::fflush(stdout);
        if (!o.pass && !known)
            ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
