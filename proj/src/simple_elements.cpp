#include "rloop/simple_elements.hpp"

namespace rloop {

const char* element_kind_name(ElementKind k) {
    switch (k) {
        case ElementKind::P: return "p";
        case ElementKind::PHerm: return "p_herm";
        case ElementKind::QGlnr: return "q_glnr";
        case ElementKind::RGlnr: return "r_glnr";
        case ElementKind::QUpq: return "q_upq";
        case ElementKind::M: return "m";
        case ElementKind::NUpq: return "n_upq";
        case ElementKind::S: return "s";
    }
    return "?";
}

Mat projector(const Subspace& v, const Subspace& w) {
    std::size_t n = v.ambient_dim();
    Mat frame = Mat::hcat(v.basis(), w.basis());
    if (frame.cols() != n || frame.rank() != n)
        throw InvalidDecomposition("V + W is not a direct decomposition of the ambient space");
    Mat sel(n, n);
    for (std::size_t k = 0; k < v.dim(); ++k) sel.at(k, k) = TowerScalar(1);
    return frame * sel * frame.inverse();
}

namespace {

Mat triple_projector(const Mat& frame, std::size_t from, std::size_t count) {
    std::size_t n = frame.rows();
    Mat sel(n, n);
    for (std::size_t k = 0; k < count; ++k) sel.at(from + k, from + k) = TowerScalar(1);
    return frame * sel * frame.inverse();
}

std::vector<TowerScalar> element_hints(const TowerScalar& a, const TowerScalar& b) {
    return {a, b, a.conj(), b.conj()};
}

void check_nilpotent2(const Mat& n) {
    if (!(n * n).is_zero()) throw NotNilpotent("N^2 != 0");
}

}  // namespace

RationalLoop nilpotent_loop(const TowerScalar& alpha, int k, const Mat& n) {
    std::size_t dim = n.rows();
    Poly pk = Poly::one();
    for (int j = 0; j < k; ++j) pk = pk * Poly::linear(alpha);
    PolyMat num = PolyMat::identity(dim) * pk + PolyMat::from_scalar(n);
    return RationalLoop::make(std::move(num), {{alpha, k}}, {alpha});
}

SimpleElement make_p(const TowerScalar& alpha, const TowerScalar& beta, const Subspace& v,
                     const Subspace& w) {
    if (alpha == beta) throw InvalidDecomposition("p needs alpha != beta");
    std::size_t n = v.ambient_dim();
    Mat pv = projector(v, w);
    Mat pw = Mat::identity(n) - pv;
    PolyMat num = PolyMat::from_scalar(pv) * Poly::linear(alpha) +
                  PolyMat::from_scalar(pw) * Poly::linear(beta);
    SimpleElement e;
    e.kind = ElementKind::P;
    e.n = n;
    e.alpha = alpha;
    e.beta = beta;
    e.V = v;
    e.W = w;
    e.loop = RationalLoop::make(std::move(num), {{beta, 1}}, element_hints(alpha, beta));
    return e;
}

SimpleElement make_p_herm(const TowerScalar& alpha, const Subspace& v, const HermForm& form) {
    if (alpha == alpha.conj()) throw InvalidDecomposition("p_herm needs a nonreal alpha");
    Subspace vperp = orth_complement(v, form);
    if (!radical(v, form).is_zero())
        throw InvalidDecomposition("p_herm needs V with trivial radical");
    SimpleElement e = make_p(alpha, alpha.conj(), v, vperp);
    e.kind = ElementKind::PHerm;
    e.p = form.p();
    e.q = form.q();
    return e;
}

SimpleElement make_q_glnr(const TowerScalar& alpha, const TowerScalar& beta, const Subspace& v,
                          const Subspace& w) {
    if (alpha.is_real() && beta.is_real())
        throw InvalidDecomposition("q needs alpha or beta nonreal");
    if (alpha == beta || alpha == beta.conj())
        throw InvalidDecomposition("q needs {alpha, conj alpha} disjoint from {beta, conj beta}");
    if (v.conj() != v || w.conj() != w)
        throw InvalidDecomposition("q needs conjugation-invariant V and W");
    std::size_t n = v.ambient_dim();
    Mat pv = projector(v, w);
    Mat pw = Mat::identity(n) - pv;
    Poly na = Poly::linear(alpha) * Poly::linear(alpha.conj());
    Poly nb = Poly::linear(beta) * Poly::linear(beta.conj());
    PolyMat num = PolyMat::from_scalar(pv) * na + PolyMat::from_scalar(pw) * nb;
    std::vector<std::pair<TowerScalar, int>> den;
    if (beta.is_real())
        den = {{beta, 2}};
    else
        den = {{beta, 1}, {beta.conj(), 1}};
    SimpleElement e;
    e.kind = ElementKind::QGlnr;
    e.n = n;
    e.alpha = alpha;
    e.beta = beta;
    e.V = v;
    e.W = w;
    e.reality = RealityMode::Glnr;
    e.loop = RationalLoop::make(std::move(num), std::move(den), element_hints(alpha, beta));
    // The element is the product of two plain p factors at conjugate parameters.
    if (e.loop != make_p(alpha, beta, v, w).loop * make_p(alpha.conj(), beta.conj(), v, w).loop)
        throw Error(ErrorClass::Validation, "q factorization identity failed");
    return e;
}

SimpleElement make_r_glnr(const TowerScalar& alpha, const TowerScalar& beta, const Subspace& v,
                          const Subspace& w) {
    if (alpha == beta || alpha.conj() == beta)
        throw InvalidDecomposition("r needs alpha distinct from beta and conj(beta)");
    std::size_t n = v.ambient_dim();
    Subspace vbar = v.conj();
    if (!v.intersect(vbar).is_zero()) throw InvalidDecomposition("r needs V with V n conj(V) = 0");
    if (w.conj() != w) throw InvalidDecomposition("r needs conjugation-invariant W");
    Mat frame = Mat::hcat(Mat::hcat(v.basis(), w.basis()), vbar.basis());
    if (frame.cols() != n || frame.rank() != n)
        throw InvalidDecomposition("r needs C^n = V + W + conj(V)");
    Mat pv = triple_projector(frame, 0, v.dim());
    Mat pw = triple_projector(frame, v.dim(), w.dim());
    Mat pvbar = triple_projector(frame, v.dim() + w.dim(), vbar.dim());
    Poly fa = Poly::linear(alpha) * Poly::linear(beta.conj());
    Poly fb = Poly::linear(beta) * Poly::linear(beta.conj());
    Poly fc = Poly::linear(alpha.conj()) * Poly::linear(beta);
    PolyMat num = PolyMat::from_scalar(pv) * fa + PolyMat::from_scalar(pw) * fb +
                  PolyMat::from_scalar(pvbar) * fc;
    std::vector<std::pair<TowerScalar, int>> den;
    if (beta.is_real())
        den = {{beta, 2}};
    else
        den = {{beta, 1}, {beta.conj(), 1}};
    SimpleElement e;
    e.kind = ElementKind::RGlnr;
    e.n = n;
    e.alpha = alpha;
    e.beta = beta;
    e.V = v;
    e.W = w;
    e.reality = RealityMode::Glnr;
    e.loop = RationalLoop::make(std::move(num), std::move(den), element_hints(alpha, beta));
    Subspace wv = w.sum(vbar), wv2 = w.sum(v);
    if (e.loop != make_p(alpha, beta, v, wv).loop *
                      make_p(alpha.conj(), beta.conj(), vbar, wv2).loop)
        throw Error(ErrorClass::Validation, "r factorization identity failed");
    return e;
}

SimpleElement make_q_upq(const TowerScalar& alpha, const TowerScalar& beta, const Subspace& v,
                         const HermForm& form) {
    if (alpha == beta) throw InvalidDecomposition("q needs alpha != beta");
    std::size_t n = v.ambient_dim();
    if (!is_isotropic(v, form)) throw InvalidDecomposition("q needs an isotropic V");
    Mat s = form.s_matrix();
    Subspace sv = v.image_under(s);
    Subspace w = orth_complement(v.sum(sv), form);
    Mat frame = Mat::hcat(Mat::hcat(v.basis(), w.basis()), sv.basis());
    if (frame.cols() != n || frame.rank() != n)
        throw InvalidDecomposition("q needs C^n = V + (V+sV)^perp + sV");
    Mat pv = triple_projector(frame, 0, v.dim());
    Mat pw = triple_projector(frame, v.dim(), w.dim());
    Mat psv = triple_projector(frame, v.dim() + w.dim(), sv.dim());
    // Common denominator (lambda-beta)(lambda-conj alpha).
    Poly fa = Poly::linear(alpha) * Poly::linear(alpha.conj());
    Poly fb = Poly::linear(beta) * Poly::linear(alpha.conj());
    Poly fc = Poly::linear(beta.conj()) * Poly::linear(beta);
    PolyMat num = PolyMat::from_scalar(pv) * fa + PolyMat::from_scalar(pw) * fb +
                  PolyMat::from_scalar(psv) * fc;
    std::vector<std::pair<TowerScalar, int>> den;
    if (beta == alpha.conj())
        den = {{beta, 2}};
    else
        den = {{beta, 1}, {alpha.conj(), 1}};
    SimpleElement e;
    e.kind = ElementKind::QUpq;
    e.n = n;
    e.alpha = alpha;
    e.beta = beta;
    e.V = v;
    e.p = form.p();
    e.q = form.q();
    e.reality = RealityMode::Upq;
    e.loop = RationalLoop::make(std::move(num), std::move(den), element_hints(alpha, beta));
    Subspace svperp = orth_complement(sv, form);
    Subspace vperp = orth_complement(v, form);
    if (e.loop != make_p(alpha, beta, v, svperp).loop *
                      make_p(beta.conj(), alpha.conj(), sv, vperp).loop)
        throw Error(ErrorClass::Validation, "q_upq factorization identity failed");
    return e;
}

SimpleElement make_m(const TowerScalar& alpha, int k, const Mat& nilpotent, RealityMode reality,
                     std::size_t p, std::size_t q) {
    if (k < 1) throw InvalidDecomposition("m needs k >= 1");
    check_nilpotent2(nilpotent);
    if (reality == RealityMode::Glnr) {
        if (!alpha.is_real()) throw InvalidDecomposition("real-form m needs a real alpha");
        if (!nilpotent.is_real()) throw NotRealMatrix();
    } else if (reality == RealityMode::Upq) {
        if (!alpha.is_real()) throw InvalidDecomposition("indefinite m needs a real alpha");
        HermForm form(p, q);
        if (!form.is_skew(nilpotent)) throw NotSkew();
    }
    SimpleElement e;
    e.kind = ElementKind::M;
    e.n = nilpotent.rows();
    e.alpha = alpha;
    e.k = k;
    e.N = nilpotent;
    e.reality = reality;
    e.p = p;
    e.q = q;
    e.loop = nilpotent_loop(alpha, k, nilpotent);
    return e;
}

SimpleElement make_n_upq(const TowerScalar& alpha, int k, const Mat& nilpotent, const Subspace& v,
                         const HermForm& form) {
    if (k < 1) throw InvalidDecomposition("n needs k >= 1");
    if (!alpha.is_real()) throw InvalidDecomposition("n needs a real alpha");
    std::size_t n = form.dim();
    if (!is_isotropic(v, form) || v.dim() != std::min(form.p(), form.q()))
        throw InvalidDecomposition("n needs a maximal isotropic V");
    if (!form.is_skew(nilpotent)) throw NotSkew();
    Mat n2 = nilpotent * nilpotent;
    if (!(n2 * nilpotent).is_zero()) throw NotNilpotent("N^3 != 0");
    // N must be M - M* for some M: (V+sV)^perp -> V, equivalently:
    // N(V) = 0, N(W) in V, N(sV) in W.
    Mat s = form.s_matrix();
    Subspace sv = v.image_under(s);
    Subspace w = orth_complement(v.sum(sv), form);
    for (std::size_t j = 0; j < v.dim(); ++j)
        if (!vec_is_zero(nilpotent.apply(v.basis_vector(j))))
            throw InvalidDecomposition("n needs N(V) = 0");
    for (std::size_t j = 0; j < w.dim(); ++j)
        if (!v.contains(nilpotent.apply(w.basis_vector(j))))
            throw InvalidDecomposition("n needs N((V+sV)^perp) inside V");
    for (std::size_t j = 0; j < sv.dim(); ++j)
        if (!w.contains(nilpotent.apply(sv.basis_vector(j))))
            throw InvalidDecomposition("n needs N(sV) inside (V+sV)^perp");

    Poly pk = Poly::one();
    for (int j = 0; j < k; ++j) pk = pk * Poly::linear(alpha);
    Poly p2k = pk * pk;
    PolyMat num = PolyMat::identity(n) * p2k + PolyMat::from_scalar(nilpotent) * pk +
                  PolyMat::from_scalar(n2 * TowerScalar(Rat(1, 2)));
    SimpleElement e;
    e.kind = ElementKind::NUpq;
    e.n = n;
    e.alpha = alpha;
    e.k = k;
    e.N = nilpotent;
    e.V = v;
    e.reality = RealityMode::Upq;
    e.p = form.p();
    e.q = form.q();
    e.loop = RationalLoop::make(std::move(num), {{alpha, 2 * k}}, {alpha});
    return e;
}

SimpleElement make_twisted_pair(const TowerScalar& alpha, const Mat& nilpotent) {
    if (alpha.is_zero()) throw AlphaZero();
    if (!alpha.is_real()) throw InvalidDecomposition("twisted pair needs a real alpha");
    check_nilpotent2(nilpotent);
    std::size_t n = nilpotent.rows();
    TowerScalar half = TowerScalar(1) / (TowerScalar(2) * alpha);
    TowerScalar quarter = half * half;
    Mat nt = nilpotent.transpose();
    Mat core = Mat::identity(n) + (nt * nilpotent) * quarter;
    Mat core_inv;
    try {
        core_inv = core.inverse();
    } catch (const NotWellDefined&) {
        throw NotWellDefined("Id + N^t N / (4 alpha^2) is singular");
    }
    Mat left = Mat::identity(n) - nilpotent * half;
    Mat right = Mat::identity(n) + nilpotent * half;
    Mat nprime = left * core_inv * nt * right;
    check_nilpotent2(nprime);
    SimpleElement e;
    e.kind = ElementKind::S;
    e.n = n;
    e.alpha = alpha;
    e.k = 1;
    e.N = nilpotent;
    e.Nprime = nprime;
    e.loop = nilpotent_loop(-alpha, 1, nprime) * nilpotent_loop(alpha, 1, nilpotent);
    if (!e.loop.check_twisted().ok)
        throw Error(ErrorClass::Validation, "twisted pair failed the twisting identity");
    if (nilpotent.is_real() && !e.loop.check_glnr_reality().ok)
        throw Error(ErrorClass::Validation, "twisted pair failed the reality identity");
    return e;
}

SimpleElement inverse_of(const SimpleElement& e) {
    switch (e.kind) {
        case ElementKind::P:
            return make_p(e.beta, e.alpha, e.V, e.W);
        case ElementKind::PHerm:
            return make_p_herm(e.alpha.conj(), e.V, HermForm(e.p, e.q));
        case ElementKind::QGlnr:
            return make_q_glnr(e.beta, e.alpha, e.V, e.W);
        case ElementKind::RGlnr:
            return make_r_glnr(e.beta, e.alpha, e.V, e.W);
        case ElementKind::QUpq:
            return make_q_upq(e.beta, e.alpha, e.V, HermForm(e.p, e.q));
        case ElementKind::M:
            return make_m(e.alpha, e.k, -e.N, e.reality, e.p, e.q);
        case ElementKind::NUpq:
            return make_n_upq(e.alpha, e.k, -e.N, e.V, HermForm(e.p, e.q));
        case ElementKind::S:
            throw Error(ErrorClass::Validation, "twisted pairs have no single-element inverse");
    }
    throw Error(ErrorClass::Validation, "unknown element kind");
}

void validate(const SimpleElement& e) {
    SimpleElement rebuilt;
    switch (e.kind) {
        case ElementKind::P: rebuilt = make_p(e.alpha, e.beta, e.V, e.W); break;
        case ElementKind::PHerm: rebuilt = make_p_herm(e.alpha, e.V, HermForm(e.p, e.q)); break;
        case ElementKind::QGlnr: rebuilt = make_q_glnr(e.alpha, e.beta, e.V, e.W); break;
        case ElementKind::RGlnr: rebuilt = make_r_glnr(e.alpha, e.beta, e.V, e.W); break;
        case ElementKind::QUpq: rebuilt = make_q_upq(e.alpha, e.beta, e.V, HermForm(e.p, e.q)); break;
        case ElementKind::M: rebuilt = make_m(e.alpha, e.k, e.N, e.reality, e.p, e.q); break;
        case ElementKind::NUpq:
            rebuilt = make_n_upq(e.alpha, e.k, e.N, e.V, HermForm(e.p, e.q));
            break;
        case ElementKind::S: rebuilt = make_twisted_pair(e.alpha, e.N); break;
    }
    if (rebuilt.loop != e.loop)
        throw Error(ErrorClass::Validation, "element loop does not match its parameters");
}

}  // namespace rloop
