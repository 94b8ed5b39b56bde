#include "rloop/dressing.hpp"

namespace rloop {

namespace {

void require_positive(const RationalLoop& f) {
    if (!f.den_factors().empty())
        throw Error(ErrorClass::Validation, "dressing input must be holomorphic on C");
}

Mat invert_or_fail(const Mat& a, const char* what) {
    try {
        return a.inverse();
    } catch (const NotWellDefined&) {
        throw NotWellDefined(what);
    }
}

// Taylor coefficients f_0..f_k of a polynomial loop at alpha.
std::vector<Mat> jets(const RationalLoop& f, const TowerScalar& alpha, int k) {
    PolyMat shifted = f.num().shifted(alpha);
    std::vector<Mat> out;
    std::size_t n = f.dim();
    for (int j = 0; j <= k; ++j) {
        Mat m(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m.at(r, c) = shifted.at(r, c).coeff(j);
        out.push_back(m);
    }
    return out;
}

}  // namespace

SimplePoleDressing dress_simple_pole(const TowerScalar& alpha, const Mat& nilpotent,
                                     const RationalLoop& f) {
    require_positive(f);
    if (!(nilpotent * nilpotent).is_zero()) throw NotNilpotent();
    std::size_t n = f.dim();
    auto j = jets(f, alpha, 1);
    Mat f0 = j[0];
    Mat f0_inv = invert_or_fail(f0, "f(alpha) is singular");
    Mat f1 = j[1] * f0_inv;
    Mat core = Mat::identity(n) + nilpotent * f1;
    Mat core_inv = invert_or_fail(core, "Id + N f_1 is singular");
    Mat n_tilde = f0_inv * core_inv * nilpotent * f0;
    if (!(n_tilde * n_tilde).is_zero())
        throw Error(ErrorClass::Validation, "dressed nilpotent is not two-step");
    RationalLoop dressed =
        nilpotent_loop(alpha, 1, nilpotent) * f * nilpotent_loop(alpha, 1, -n_tilde);
    if (dressed.is_pole_at(alpha))
        throw Error(ErrorClass::Validation, "dressed loop kept a pole at alpha");
    return {n_tilde, dressed};
}

Order2Dressing dress_order2(const TowerScalar& alpha, const Mat& nilpotent,
                            const RationalLoop& f) {
    require_positive(f);
    if (!(nilpotent * nilpotent).is_zero()) throw NotNilpotent();
    std::size_t n = f.dim();
    auto j = jets(f, alpha, 3);
    const Mat &f0 = j[0], &f1 = j[1], &f2 = j[2], &f3 = j[3];
    Mat base = nilpotent * f2 + f0;
    Mat base_inv = invert_or_fail(base, "N f_2 + f_0 is singular");
    Mat x = (nilpotent * f3 + f1) * base_inv;
    Mat lead = base - x * nilpotent * f1;
    Mat lead_inv = invert_or_fail(lead, "N f_2 + f_0 - X N f_1 is singular");
    Mat m1 = lead_inv * (x * nilpotent * f0 - nilpotent * f1);
    Mat m2 = -(base_inv * (nilpotent * f1 * m1 + nilpotent * f0));

    Poly lin = Poly::linear(alpha);
    Poly lin2 = lin * lin;
    PolyMat mult_num = PolyMat::identity(n) * lin2 + PolyMat::from_scalar(m1) * lin +
                       PolyMat::from_scalar(m2);
    RationalLoop multiplier = RationalLoop::make(std::move(mult_num), {{alpha, 2}}, {alpha});
    RationalLoop dressed = nilpotent_loop(alpha, 2, nilpotent) * f * multiplier;
    if (dressed.is_pole_at(alpha))
        throw Error(ErrorClass::Validation, "order-2 dressed loop kept a pole at alpha");
    return {m1, m2, dressed};
}

Permuted permute(const TowerScalar& alpha, const Mat& n, const TowerScalar& beta, const Mat& m) {
    if (alpha == beta) throw Error(ErrorClass::Validation, "permute needs alpha != beta");
    if (!(n * n).is_zero() || !(m * m).is_zero()) throw NotNilpotent();
    std::size_t dim = n.rows();
    Mat id = Mat::identity(dim);
    TowerScalar d = (alpha - beta).inv();
    TowerScalar e = (beta - alpha).inv();
    Mat core_n = invert_or_fail(id + (n * m) * (d * d), "Id + NM/(alpha-beta)^2 is singular");
    Mat n_hat = (id + m * d) * core_n * n * (id - m * d);
    Mat core_m = invert_or_fail(id + (m * n) * (e * e), "Id + MN/(beta-alpha)^2 is singular");
    Mat m_hat = (id + n * e) * core_m * m * (id - n * e);
    if (!(n_hat * n_hat).is_zero() || !(m_hat * m_hat).is_zero())
        throw Error(ErrorClass::Validation, "permuted maps are not two-step nilpotent");
    RationalLoop lhs = nilpotent_loop(beta, 1, m_hat) * nilpotent_loop(alpha, 1, n);
    RationalLoop rhs = nilpotent_loop(alpha, 1, n_hat) * nilpotent_loop(beta, 1, m);
    if (lhs != rhs) throw Error(ErrorClass::Validation, "permutability identity failed");
    return {n_hat, m_hat};
}

TwistedDressing dress_twisted_pair(const SimpleElement& s, const RationalLoop& f) {
    if (s.kind != ElementKind::S)
        throw Error(ErrorClass::Validation, "dress_twisted_pair needs an s-type element");
    TwistedDressing out;
    RationalLoop stage1;
    try {
        auto d1 = dress_simple_pole(s.alpha, s.N, f);
        out.n_tilde = d1.n_tilde;
        stage1 = d1.dressed;
    } catch (const NotWellDefined& e) {
        throw NotWellDefined(std::string("stage 1: ") + e.what(), 1);
    }
    try {
        auto d2 = dress_simple_pole(-s.alpha, s.Nprime, stage1);
        out.n_tilde_prime = d2.n_tilde;
        out.dressed = d2.dressed;
    } catch (const NotWellDefined& e) {
        throw NotWellDefined(std::string("stage 2: ") + e.what(), 2);
    }
    return out;
}

}  // namespace rloop
