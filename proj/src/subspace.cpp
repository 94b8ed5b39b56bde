#include "rloop/subspace.hpp"

#include <algorithm>

namespace rloop {

Subspace Subspace::span(std::size_t ambient, const Mat& cols) {
    Subspace s(ambient);
    if (cols.cols() == 0) {
        s.basis_ = Mat(ambient, 0);
        return s;
    }
    Mat t = cols.transpose();
    t.rref();
    // Drop zero rows, transpose back to echelon columns.
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        bool zero = true;
        for (std::size_t c = 0; c < t.cols(); ++c)
            if (!t.at(r, c).is_zero()) { zero = false; break; }
        if (!zero) keep.push_back(r);
    }
    Mat b(ambient, keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        std::vector<TowerScalar> col(ambient);
        for (std::size_t c = 0; c < ambient; ++c) col[c] = t.at(keep[k], c);
        b.set_col(k, vec_primitive(col));
    }
    s.basis_ = b;
    return s;
}

bool Subspace::contains(const std::vector<TowerScalar>& v) const {
    if (vec_is_zero(v)) return true;
    Mat aug = Mat::hcat(basis_, Mat::column(v));
    return aug.rank() == dim();
}

bool Subspace::contains(const Subspace& other) const {
    if (other.dim() == 0) return true;
    Mat aug = Mat::hcat(basis_, other.basis_);
    return aug.rank() == dim();
}

Subspace Subspace::sum(const Subspace& o) const {
    return span(n_, Mat::hcat(basis_, o.basis_));
}

Subspace Subspace::intersect(const Subspace& o) const {
    if (dim() == 0 || o.dim() == 0) return Subspace::span(n_, Mat(n_, 0));
    Mat both = Mat::hcat(basis_, -o.basis_);
    Mat ker = both.kernel();
    Mat vecs(n_, ker.cols());
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        std::vector<TowerScalar> x(dim());
        for (std::size_t k = 0; k < dim(); ++k) x[k] = ker.at(k, c);
        vecs.set_col(c, basis_.apply(x));
    }
    return span(n_, vecs);
}

Subspace Subspace::image_under(const Mat& a) const {
    if (dim() == 0) return Subspace::span(a.rows(), Mat(a.rows(), 0));
    return span(a.rows(), a * basis_);
}

Subspace Subspace::conj() const {
    Subspace s(n_);
    return span(n_, basis_.conj());
}

std::vector<std::size_t> Subspace::pivot_rows() const {
    std::vector<std::size_t> rows;
    for (std::size_t c = 0; c < basis_.cols(); ++c)
        for (std::size_t r = 0; r < n_; ++r)
            if (!basis_.at(r, c).is_zero()) {
                rows.push_back(r);
                break;
            }
    return rows;
}

KernelImage rref_kernel_image(const Mat& a) {
    KernelImage ki;
    ki.kernel = Subspace::span(a.cols(), a.kernel());
    ki.image = Subspace::span(a.rows(), a);
    ki.rank = ki.image.dim();
    return ki;
}

Subspace complement(const Subspace& v) {
    std::size_t n = v.ambient_dim();
    auto pivots = v.pivot_rows();
    std::vector<bool> taken(n, false);
    for (auto p : pivots) taken[p] = true;
    Mat cols(n, n - pivots.size());
    std::size_t idx = 0;
    for (std::size_t r = 0; r < n; ++r)
        if (!taken[r]) cols.at(r, idx++) = TowerScalar(1);
    return Subspace::span(n, cols);
}

namespace {

// Greedy maximal independent extension: returns the vectors from `cands`
// that grow the span of `base`.
std::vector<std::vector<TowerScalar>> extend_basis(const Mat& base,
                                                   const std::vector<std::vector<TowerScalar>>& cands) {
    Mat cur = base;
    std::vector<std::vector<TowerScalar>> added;
    std::size_t rank = cur.cols() == 0 ? 0 : cur.rank();
    for (const auto& v : cands) {
        Mat aug = Mat::hcat(cur, Mat::column(v));
        if (aug.rank() > rank) {
            cur = aug;
            ++rank;
            added.push_back(v);
        }
    }
    return added;
}

}  // namespace

ConjSplit conj_split(const Subspace& v) {
    ConjSplit out;
    std::size_t n = v.ambient_dim();
    out.inv_part = v.intersect(v.conj());
    // Conjugation-fixed basis from b + conj(b) and i(b - conj(b)).
    std::vector<std::vector<TowerScalar>> cands;
    TowerScalar i = TowerScalar::i();
    for (std::size_t k = 0; k < out.inv_part.dim(); ++k) {
        auto b = out.inv_part.basis_vector(k);
        std::vector<TowerScalar> s1(n), s2(n);
        for (std::size_t r = 0; r < n; ++r) {
            s1[r] = b[r] + b[r].conj();
            s2[r] = i * (b[r] - b[r].conj());
        }
        if (!vec_is_zero(s1)) cands.push_back(s1);
        if (!vec_is_zero(s2)) cands.push_back(s2);
    }
    auto independent = extend_basis(Mat(n, 0), cands);
    Mat real_cols(n, independent.size());
    for (std::size_t k = 0; k < independent.size(); ++k) real_cols.set_col(k, independent[k]);
    Subspace real_span = Subspace::span(n, real_cols);
    for (std::size_t k = 0; k < real_span.dim(); ++k)
        out.real_basis.push_back(real_span.basis_vector(k));
    if (out.real_basis.size() != out.inv_part.dim())
        throw Error(ErrorClass::Validation, "conj_split: real basis extraction failed");
    std::vector<std::vector<TowerScalar>> vcols;
    for (std::size_t k = 0; k < v.dim(); ++k) vcols.push_back(v.basis_vector(k));
    auto added = extend_basis(out.inv_part.basis(), vcols);
    Mat w1(n, added.size());
    for (std::size_t k = 0; k < added.size(); ++k) w1.set_col(k, added[k]);
    out.w1 = Subspace::span(n, w1);
    return out;
}

Subspace real_complement(const Subspace& u) {
    std::size_t n = u.ambient_dim();
    if (u.conj() != u)
        throw Error(ErrorClass::Validation, "real_complement needs a conjugation-invariant space");
    ConjSplit cs = conj_split(u);
    Mat real_b(n, cs.real_basis.size());
    for (std::size_t k = 0; k < cs.real_basis.size(); ++k) real_b.set_col(k, cs.real_basis[k]);
    std::vector<std::vector<TowerScalar>> std_vecs;
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<TowerScalar> e(n, TowerScalar(0));
        e[r] = TowerScalar(1);
        std_vecs.push_back(e);
    }
    auto added = extend_basis(real_b, std_vecs);
    Mat cols(n, added.size());
    for (std::size_t k = 0; k < added.size(); ++k) cols.set_col(k, added[k]);
    return Subspace::span(n, cols);
}

Mat HermForm::s_matrix() const {
    Mat s = Mat::identity(dim());
    for (std::size_t k = 0; k < p_; ++k) s.at(k, k) = TowerScalar(-1);
    return s;
}

TowerScalar HermForm::inner(const std::vector<TowerScalar>& v,
                            const std::vector<TowerScalar>& w) const {
    TowerScalar acc(0);
    for (std::size_t k = 0; k < dim(); ++k) {
        TowerScalar t = v[k].conj() * w[k];
        acc += (k < p_) ? -t : t;
    }
    return acc;
}

Mat HermForm::adjoint(const Mat& a) const {
    Mat s = s_matrix();
    return s * a.conj_transpose() * s;
}

Subspace orth_complement(const Subspace& v, const HermForm& form) {
    std::size_t n = v.ambient_dim();
    if (v.dim() == 0) return Subspace::full(n);
    // Rows conj(b_k)^T S; kernel is V^perp.
    Mat rows(v.dim(), n);
    Mat s = form.s_matrix();
    for (std::size_t k = 0; k < v.dim(); ++k) {
        auto b = v.basis_vector(k);
        for (std::size_t c = 0; c < n; ++c) b[c] = b[c].conj();
        auto r = s.apply(b);
        for (std::size_t c = 0; c < n; ++c) rows.at(k, c) = r[c];
    }
    return Subspace::span(n, rows.kernel());
}

bool is_isotropic(const Subspace& v, const HermForm& form) {
    for (std::size_t i = 0; i < v.dim(); ++i)
        for (std::size_t j = i; j < v.dim(); ++j)
            if (!form.inner(v.basis_vector(i), v.basis_vector(j)).is_zero()) return false;
    return true;
}

Subspace radical(const Subspace& v, const HermForm& form) {
    return v.intersect(orth_complement(v, form));
}

DiagonalizedGram congruence_diagonalize(const Subspace& v, const HermForm& form) {
    DiagonalizedGram out;
    std::size_t k = v.dim();
    std::vector<std::vector<TowerScalar>> ws;
    for (std::size_t j = 0; j < k; ++j) ws.push_back(v.basis_vector(j));
    for (std::size_t i = 0; i < k; ++i) {
        if (form.inner(ws[i], ws[i]).is_zero()) {
            bool fixed = false;
            for (std::size_t j = i + 1; j < k && !fixed; ++j)
                if (!form.inner(ws[j], ws[j]).is_zero()) {
                    std::swap(ws[i], ws[j]);
                    fixed = true;
                }
            if (!fixed) {
                for (std::size_t j = i + 1; j < k && !fixed; ++j) {
                    TowerScalar g = form.inner(ws[i], ws[j]);
                    if (!g.is_zero()) {
                        ws[i] = vec_add(ws[i], vec_scale(g.conj(), ws[j]));
                        fixed = true;
                    }
                }
            }
            if (!fixed)
                throw Error(ErrorClass::Validation,
                            "congruence_diagonalize: nonzero radical encountered");
        }
        TowerScalar d = form.inner(ws[i], ws[i]);
        for (std::size_t j = i + 1; j < k; ++j) {
            TowerScalar g = form.inner(ws[i], ws[j]);
            if (!g.is_zero()) ws[j] = vec_add(ws[j], vec_scale(-(g / d), ws[i]));
        }
        out.vectors.push_back(ws[i]);
        out.values.push_back(d);
    }
    return out;
}

std::optional<std::vector<TowerScalar>> isotropic_vector_in(const Subspace& v,
                                                            const HermForm& form) {
    if (v.dim() == 0) return std::nullopt;
    Subspace rad = radical(v, form);
    if (rad.dim() > 0) return rad.basis_vector(0);
    DiagonalizedGram dg = congruence_diagonalize(v, form);
    std::vector<std::size_t> pos, neg;
    for (std::size_t k = 0; k < dg.values.size(); ++k)
        (dg.values[k].sign() > 0 ? pos : neg).push_back(k);
    if (pos.empty() || neg.empty()) return std::nullopt;  // definite
    auto finish = [&](std::vector<TowerScalar> vec) {
        if (!form.inner(vec, vec).is_zero())
            throw Error(ErrorClass::Validation, "isotropic_vector_in: residual norm");
        return vec;
    };
    // Radical-free combinations first: |z|^2 = -d_i/d_j with z Gaussian.
    for (auto i : neg)
        for (auto j : pos) {
            TowerScalar ratio = -(dg.values[i] / dg.values[j]);
            if (!ratio.is_rational()) continue;
            if (auto z = gauss_norm_point(ratio.rational_value()))
                return finish(vec_add(dg.vectors[i], vec_scale(TowerScalar(*z), dg.vectors[j])));
        }
    // Then a real combination whose square root the tower can carry.
    for (auto i : neg)
        for (auto j : pos) {
            TowerScalar ratio = -(dg.values[i] / dg.values[j]);
            TowerScalar t;
            try {
                t = sqrt_positive_real(ratio);
            } catch (const TowerObstruction&) {
                continue;
            }
            return finish(vec_add(dg.vectors[i], vec_scale(t, dg.vectors[j])));
        }
    {
        std::string msg = "isotropic vector requires a square root outside the tower; ratios:";
        for (auto i : neg)
            for (auto j : pos) msg += " " + (-(dg.values[i] / dg.values[j])).to_string();
        throw TowerObstruction(msg);
    }
}

bool NilpotentMap::check(std::size_t n) const {
    if (matrix.rows() != n || matrix.cols() != n) return false;
    Mat power = matrix;
    for (int k = 1; k < order; ++k) power = power * matrix;
    if (!power.is_zero()) return false;
    if (!matrix.is_zero() && order > 1) {
        Mat prev = matrix;
        for (int k = 1; k < order - 1; ++k) prev = prev * matrix;
        if (prev.is_zero()) return false;
    }
    return true;
}

NilpotentMap build_skew_nilpotent(const Subspace& v_space, const std::vector<TowerScalar>& v,
                                  const std::vector<TowerScalar>& w, const HermForm& form) {
    std::size_t n = form.dim();
    if (!is_isotropic(v_space, form)) throw PreconditionViolated("V is not isotropic");
    if (!v_space.contains(v)) throw PreconditionViolated("v is not in V");
    Subspace vperp = orth_complement(v_space, form);
    if (vperp.contains(w)) throw PreconditionViolated("w lies in V^perp");
    if (!form.inner(v, w).real_part().is_zero())
        throw PreconditionViolated("<v,w> is not purely imaginary");

    // Decompose w = s*w0 + wp with w0 in V, wp in V^perp.
    Mat s = form.s_matrix();
    Mat frame = Mat::hcat(s * v_space.basis(), vperp.basis());
    if (frame.cols() != n) throw Error(ErrorClass::Validation, "sV + V^perp is not the ambient");
    Mat sol = frame.inverse() * Mat::column(w);
    std::vector<TowerScalar> w0(n, TowerScalar(0));
    for (std::size_t k = 0; k < v_space.dim(); ++k)
        w0 = vec_add(w0, vec_scale(sol.at(k, 0), v_space.basis_vector(k)));

    auto std_inner = [&](const std::vector<TowerScalar>& a, const std::vector<TowerScalar>& b) {
        TowerScalar acc(0);
        for (std::size_t k = 0; k < n; ++k) acc += a[k].conj() * b[k];
        return acc;
    };
    TowerScalar c = std_inner(w0, w0);
    if (c.is_zero()) throw PreconditionViolated("w lies in V^perp");
    TowerScalar delta = std_inner(v, w0) / c;

    // Skew map on V for the standard pairing with Ntilde(w0) = v.
    auto ntilde = [&](const std::vector<TowerScalar>& x) {
        TowerScalar a = std_inner(w0, x), b = std_inner(v, x);
        auto out = vec_scale(a, v);
        out = vec_add(out, vec_scale(-b, w0));
        out = vec_add(out, vec_scale(delta * a, w0));
        return vec_scale(c.inv(), out);
    };

    // N = 0 on V^perp, N(s y) = Ntilde(y) for y in V.
    Mat images(n, n);
    for (std::size_t k = 0; k < v_space.dim(); ++k)
        images.set_col(k, ntilde(v_space.basis_vector(k)));
    Mat nmat = images * frame.inverse();

    NilpotentMap out{nmat, 2};
    if (!(nmat * nmat).is_zero() || form.adjoint(nmat) != -nmat ||
        !vec_is_zero(vec_add(nmat.apply(w), vec_scale(TowerScalar(-1), v))))
        throw Error(ErrorClass::Validation, "skew nilpotent construction failed postconditions");
    for (std::size_t k = 0; k < vperp.dim(); ++k)
        if (!vec_is_zero(nmat.apply(vperp.basis_vector(k))))
            throw Error(ErrorClass::Validation, "skew nilpotent does not kill V^perp");
    return out;
}

ThreeStep build_three_step(const Subspace& v_space, const std::vector<TowerScalar>& u,
                           const std::vector<TowerScalar>& v, const std::vector<TowerScalar>& w,
                           const HermForm& form) {
    std::size_t n = form.dim();
    if (form.p() == form.q()) throw PreconditionViolated("three-step construction needs p != q");
    std::size_t expected = std::min(form.p(), form.q());
    if (!is_isotropic(v_space, form) || v_space.dim() != expected)
        throw PreconditionViolated("V is not maximal isotropic");
    Subspace vperp = orth_complement(v_space, form);
    if (!v_space.contains(w)) throw PreconditionViolated("w is not in V");
    if (!vperp.contains(v) || v_space.contains(v))
        throw PreconditionViolated("v is not in V^perp minus V");
    if (vperp.contains(u)) throw PreconditionViolated("u lies in V^perp");
    TowerScalar uw = form.inner(u, w);
    if (!uw.imag_part().is_zero()) throw PreconditionViolated("<u,w> is not real");
    TowerScalar vv = form.inner(v, v);
    if (!(uw * TowerScalar(2) + vv).is_zero())
        throw PreconditionViolated("2<u,w> + <v,v> != 0");
    if (vv.is_zero()) throw PreconditionViolated("<v,v> = 0 is impossible off V");

    Mat s = form.s_matrix();
    Subspace w_space = orth_complement(v_space.sum(v_space.image_under(s)), form);
    Mat frame = Mat::hcat(Mat::hcat(v_space.basis(), w_space.basis()), s * v_space.basis());
    if (frame.cols() != n) throw Error(ErrorClass::Validation, "V + W + sV is not the ambient");

    // M on W-basis columns: x -> (-2 <v,x> / <v,v>) w; zero on V and sV.
    Mat images(n, n);
    TowerScalar scale = TowerScalar(-2) / vv;
    for (std::size_t k = 0; k < w_space.dim(); ++k) {
        auto x = w_space.basis_vector(k);
        images.set_col(v_space.dim() + k, vec_scale(scale * form.inner(v, x), w));
    }
    Mat m = images * frame.inverse();
    Mat nmat = m - form.adjoint(m);

    ThreeStep out{m, NilpotentMap{nmat, 3}};
    Mat n2 = nmat * nmat;
    if (!(n2 * nmat).is_zero()) throw Error(ErrorClass::Validation, "N^3 != 0");
    auto lhs = vec_scale(TowerScalar(Rat(1, 2)), n2.apply(u));
    lhs = vec_add(lhs, nmat.apply(v));
    lhs = vec_add(lhs, w);
    if (!vec_is_zero(lhs))
        throw Error(ErrorClass::Validation, "three-step identity N^2 u / 2 + N v + w = 0 failed");
    if (form.adjoint(nmat) != -nmat) throw Error(ErrorClass::Validation, "N is not skew");
    return out;
}

std::optional<Subspace> isotropic_with_pairing(const std::vector<TowerScalar>& target,
                                               const Subspace& kill,
                                               const std::vector<TowerScalar>& pairing,
                                               const HermForm& form) {
    std::size_t n = form.dim();
    Subspace y0 = orth_complement(kill, form);
    if (!y0.contains(target)) return std::nullopt;
    if (!form.inner(target, target).is_zero()) return std::nullopt;
    if (!form.inner(pairing, target).is_zero()) return Subspace::line(target);
    Subspace y1 = y0.intersect(orth_complement(Subspace::line(target), form));
    // Spanning family of the isotropic vectors of Y1: radical basis plus
    // mixed-sign combinations from a diagonalized complement.
    Subspace rad = y1.intersect(orth_complement(y1, form));
    std::vector<std::vector<TowerScalar>> family;
    for (std::size_t k = 0; k < rad.dim(); ++k) family.push_back(rad.basis_vector(k));
    std::vector<std::vector<TowerScalar>> ycols;
    for (std::size_t k = 0; k < y1.dim(); ++k) ycols.push_back(y1.basis_vector(k));
    auto added = extend_basis(rad.basis(), ycols);
    Mat comp(n, added.size());
    for (std::size_t k = 0; k < added.size(); ++k) comp.set_col(k, added[k]);
    Subspace nondeg = Subspace::span(n, comp);
    if (nondeg.dim() > 0) {
        DiagonalizedGram dg = congruence_diagonalize(nondeg, form);
        std::vector<std::size_t> pos, neg;
        for (std::size_t k = 0; k < dg.values.size(); ++k)
            (dg.values[k].sign() > 0 ? pos : neg).push_back(k);
        for (auto i : pos)
            for (auto j : neg) {
                TowerScalar ratio = dg.values[i] / -dg.values[j];
                if (ratio.is_rational()) {
                    if (auto z = gauss_norm_point(ratio.rational_value())) {
                        family.push_back(
                            vec_add(dg.vectors[i], vec_scale(TowerScalar(*z), dg.vectors[j])));
                        family.push_back(vec_add(
                            dg.vectors[i], vec_scale(TowerScalar(z->conj()), dg.vectors[j])));
                    }
                }
                try {
                    TowerScalar t = sqrt_positive_real(ratio);
                    family.push_back(vec_add(dg.vectors[i], vec_scale(t, dg.vectors[j])));
                    family.push_back(vec_add(dg.vectors[i], vec_scale(-t, dg.vectors[j])));
                } catch (const TowerObstruction&) {
                    // Pair unusable in a square-root tower; other members
                    // may still pair with w.
                }
            }
    }
    for (const auto& u : family) {
        if (form.inner(pairing, u).is_zero()) continue;
        Mat cols(n, 2);
        cols.set_col(0, target);
        cols.set_col(1, u);
        Subspace vl = Subspace::span(n, cols);
        if (!is_isotropic(vl, form))
            throw Error(ErrorClass::Validation, "isotropic_with_pairing produced a bad span");
        return vl;
    }
    return std::nullopt;
}

}  // namespace rloop
