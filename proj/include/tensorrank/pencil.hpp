#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tensorrank/tensor.hpp"

namespace tensorrank {

/// L_eps: 2 x eps x (eps+1), slices [I | 0] and [0 | I].
Tensor l_block(const FieldSpec& field, std::size_t eps);
/// N_eta: 2 x (eta+1) x eta, slices [I ; 0] and [0 ; I].
Tensor n_block(const FieldSpec& field, std::size_t eta);

/// Invariant factors (monic, nonzero diagonal of the Smith form) of a
/// polynomial matrix over F[x]. The count equals the rank over F(x).
std::vector<Poly> smith_invariant_factors(const PolyMatrix& m);

/// Kronecker canonical form of a 2 x n x m tensor (slices T1, T2).
///
/// The regular part is stored as the invariant factors of x T1' - T2' in the
/// chart (T1', T2') = A (T1, T2); its block is b1 (x) I + b2 (x) Comp(p_i).
/// When no point of the field makes T1' regular (tiny finite fields), the
/// remaining part is kept as infinite divisors y^k with blocks
/// b1 (x) Comp(y^k) + b2 (x) I. Minimal indices equal to 0 are folded into
/// zero_rows / zero_cols.
struct PencilCanonicalForm {
    FieldSpec field;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t zero_rows = 0;
    std::size_t zero_cols = 0;
    std::vector<std::size_t> eps;
    std::vector<std::size_t> eta;
    std::vector<Poly> invariant_factors;
    std::vector<std::size_t> infinite_divisors;
    /// 2 x 2 chart in which the invariant factors were computed.
    Matrix chart;

    /// Size of the regular part.
    std::size_t ell() const;
};

struct BasisChange {
    Matrix A;
    Matrix B;
    Matrix C;
};

/// (A (x) B (x) C) t.
Tensor apply_basis_change(const Tensor& t, const BasisChange& bc);

/// The block-diagonal tensor described by cf, shape 2 x n x m.
Tensor assemble_canonical_form(const PencilCanonicalForm& cf);

/// Canonical form without the basis change. Accepts shapes (2,n,m) and
/// (1,n,m); the latter is treated as the pencil with T2 = 0.
PencilCanonicalForm pencil_invariants(const Tensor& t);

/// Canonical form together with a verified basis change mapping t (padded
/// to 2 x n x m) onto assemble_canonical_form(cf). Random intertwiner
/// choices are drawn from `seed`.
std::pair<PencilCanonicalForm, BasisChange> kronecker_canonical_form(const Tensor& t,
                                                                     std::uint64_t seed = 0x5eed);

/// max over eigenvalues of the number of Jordan blocks of size >= 2,
/// computed from invariant factors as #{i : p_i not squarefree}; infinite
/// divisors count as the eigenvalue at infinity.
std::size_t m_of_F(const std::vector<Poly>& factors, const std::vector<std::size_t>& infinite = {});

/// Number of homogeneous invariant divisors that are not products of
/// distinct linear forms over F_p. Prime fields only.
std::size_t delta_of_B(const std::vector<Poly>& factors, const std::vector<std::size_t>& infinite = {});

enum class PencilPolicy {
    /// Over F_q refuse unless q >= n, m.
    require_hypothesis,
    /// Apply the finite-field formula regardless of q.
    extrapolate,
};

struct PencilRank {
    std::size_t rank = 0;
    std::size_t singular = 0;
    std::size_t ell = 0;
    std::size_t correction = 0;
    /// False only when extrapolating over a small finite field.
    bool hypothesis_met = true;
    std::string formula;
};

/// Sum(eps+1) + Sum(eta+1) + ell + m(F) over Q and Q(sqrt D) (the rank over
/// the algebraic closure), and + delta(B) over F_p. Throws FieldTooSmall
/// over F_q with q < max(n, m) under require_hypothesis.
PencilRank pencil_rank(const PencilCanonicalForm& cf, PencilPolicy policy = PencilPolicy::require_hypothesis);

struct MultiplicativityReport {
    std::size_t r = 0;
    std::size_t rank_t = 0;
    std::size_t rank_direct_sum = 0;
    std::size_t rank_kronecker = 0;
    /// rank(t kron s) == r rank(t), which pins rank(t (x) s) to the same
    /// value since rank(t kron s) <= rank(t (x) s) <= rank(t) rank(s).
    bool ok = false;
};

/// s = 1 (x) sum_{i<r} b_i (x) b_i; compares r rank(t) with the ranks of
/// the r-fold direct sum and of t kron s.
MultiplicativityReport pencil_multiplicativity_check(const Tensor& t, std::size_t r,
                                                     PencilPolicy policy = PencilPolicy::require_hypothesis);

/// General s = 1 (x) S for a matrix S; r is rank(S).
MultiplicativityReport pencil_multiplicativity_check(const Tensor& t, const Matrix& s,
                                                     PencilPolicy policy = PencilPolicy::require_hypothesis);

} // namespace tensorrank
