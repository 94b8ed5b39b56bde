#pragma once

#include <optional>
#include <vector>

#include "rloop/matrix.hpp"

namespace rloop {

/// Exact column span in reduced column echelon form. Two subspaces are equal
/// iff their echelon bases are identical matrices.
class Subspace {
public:
    Subspace() : n_(0) {}
    explicit Subspace(std::size_t ambient) : n_(ambient), basis_(ambient, 0) {}
    /// Span of the columns of `cols`.
    static Subspace span(std::size_t ambient, const Mat& cols);
    static Subspace full(std::size_t ambient) { return span(ambient, Mat::identity(ambient)); }
    static Subspace line(const std::vector<TowerScalar>& v) {
        return span(v.size(), Mat::column(v));
    }

    std::size_t ambient_dim() const { return n_; }
    std::size_t dim() const { return basis_.cols(); }
    const Mat& basis() const { return basis_; }
    std::vector<TowerScalar> basis_vector(std::size_t k) const { return basis_.col(k); }
    bool is_zero() const { return dim() == 0; }

    bool contains(const std::vector<TowerScalar>& v) const;
    bool contains(const Subspace& other) const;
    bool operator==(const Subspace& o) const { return n_ == o.n_ && basis_ == o.basis_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    Subspace sum(const Subspace& o) const;
    Subspace intersect(const Subspace& o) const;
    /// Image under a linear map.
    Subspace image_under(const Mat& a) const;
    Subspace conj() const;
    /// Leading coordinate indices of the echelon basis columns.
    std::vector<std::size_t> pivot_rows() const;

private:
    std::size_t n_;
    Mat basis_;  // n x dim, reduced column echelon
};

/// Kernel and image of a matrix, with rank.
struct KernelImage {
    Subspace kernel;
    Subspace image;
    std::size_t rank;
};
KernelImage rref_kernel_image(const Mat& a);

/// Deterministic complement: standard basis vectors at the non-pivot rows.
Subspace complement(const Subspace& v);

/// Splitting of V along conjugation: inv_part = V Intersect conj(V) with a
/// conjugation-fixed basis, plus a complement W1 of inv_part inside V.
struct ConjSplit {
    Subspace inv_part;
    std::vector<std::vector<TowerScalar>> real_basis;
    Subspace w1;
};
ConjSplit conj_split(const Subspace& v);

/// Conjugation-invariant complement of a conjugation-invariant subspace,
/// spanned by standard vectors added to a real basis.
Subspace real_complement(const Subspace& u);

/// Signature-(p,q) Hermitian form <v,w> = -sum_{i<p} conj(v_i) w_i + sum_{i>=p} conj(v_i) w_i,
/// conjugate-linear in the first slot.
class HermForm {
public:
    HermForm(std::size_t p, std::size_t q) : p_(p), q_(q) {}
    std::size_t p() const { return p_; }
    std::size_t q() const { return q_; }
    std::size_t dim() const { return p_ + q_; }
    Mat s_matrix() const;
    TowerScalar inner(const std::vector<TowerScalar>& v, const std::vector<TowerScalar>& w) const;
    Mat adjoint(const Mat& a) const;  // s * conj(a)^T * s
    bool is_skew(const Mat& a) const { return adjoint(a) == -a; }

private:
    std::size_t p_, q_;
};

Subspace orth_complement(const Subspace& v, const HermForm& form);
bool is_isotropic(const Subspace& v, const HermForm& form);
/// V Intersect V^perp.
Subspace radical(const Subspace& v, const HermForm& form);

/// Basis of V made <,>-orthogonal by exact congruence, with real nonzero
/// diagonal values (requires trivial radical).
struct DiagonalizedGram {
    std::vector<std::vector<TowerScalar>> vectors;
    std::vector<TowerScalar> values;
};
DiagonalizedGram congruence_diagonalize(const Subspace& v, const HermForm& form);

/// Nonzero isotropic vector of V if the restricted form is not definite;
/// may extend the scalar tower through sqrt_positive_real.
std::optional<std::vector<TowerScalar>> isotropic_vector_in(const Subspace& v,
                                                            const HermForm& form);

struct NilpotentMap {
    Mat matrix;
    int order = 2;
    bool check(std::size_t n) const;
};

/// Skew two-step nilpotent N with N(V^perp) = 0, im N in V, N(w) = v.
/// Preconditions: V isotropic, v in V, w outside V^perp, <v,w> purely imaginary.
NilpotentMap build_skew_nilpotent(const Subspace& v_space, const std::vector<TowerScalar>& v,
                                  const std::vector<TowerScalar>& w, const HermForm& form);

/// Three-step construction: M maps (V + sV)^perp to V with M(v) = -2w and
/// zero on v^perp; N = M - M* satisfies N^3 = 0 and N^2(u)/2 + N(v) + w = 0.
struct ThreeStep {
    Mat m;
    NilpotentMap n;
};
ThreeStep build_three_step(const Subspace& v_space, const std::vector<TowerScalar>& u,
                           const std::vector<TowerScalar>& v, const std::vector<TowerScalar>& w,
                           const HermForm& form);

/// Isotropic subspace containing `target`, inside kill^perp, not orthogonal
/// to `pairing`. Search is complete: returns nullopt only if no isotropic
/// subspace with these properties exists.
std::optional<Subspace> isotropic_with_pairing(const std::vector<TowerScalar>& target,
                                               const Subspace& kill,
                                               const std::vector<TowerScalar>& pairing,
                                               const HermForm& form);

}  // namespace rloop
