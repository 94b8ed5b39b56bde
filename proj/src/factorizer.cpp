#include "rloop/factorizer.hpp"

#include <algorithm>

namespace rloop {

int EpsilonTuple::cmp(const EpsilonTuple& x, const EpsilonTuple& y) {
    std::size_t m = std::max(x.a.size(), y.a.size());
    for (std::size_t i = m; i-- > 0;) {
        int ax = i < x.a.size() ? x.a[i] : 0;
        int ay = i < y.a.size() ? y.a[i] : 0;
        if (ax != ay) return ax < ay ? -1 : 1;
    }
    return 0;
}

bool EpsilonTuple::is_minimal() const {
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] != 0) return false;
    return true;
}

long EpsilonTuple::weight() const {
    long w = 0;
    for (std::size_t i = 0; i < a.size(); ++i) w += static_cast<long>(i) * a[i];
    return w;
}

Mat Filtration::coeff(int i) const {
    if (i < 0 || i > r) return Mat(A[0].rows(), A[0].cols());
    return A[i];
}

const Subspace& Filtration::kernel_at(int i) const {
    if (i <= 0) return K[0];
    if (i >= r + 1) return K[r + 1];
    return K[i];
}

Filtration compute_filtration(const RationalLoop& g, const TowerScalar& alpha) {
    // A[0] is the holomorphic value at alpha: the identity for a normalized
    // single-singularity loop, and the zeroth Laurent coefficient in general.
    Filtration f;
    f.alpha = alpha;
    f.A = g.principal_part(alpha);
    f.r = static_cast<int>(f.A.size()) - 1;
    std::size_t n = g.dim();
    f.K.assign(f.r + 2, Subspace());
    f.V.assign(f.r + 2, Subspace());
    f.K[f.r + 1] = Subspace::full(n);
    f.V[f.r + 1] = Subspace::span(n, Mat(n, 0));
    for (int i = f.r; i >= 0; --i) {
        f.K[i] = f.K[i + 1].intersect(rref_kernel_image(f.A[i]).kernel);
        f.V[i] = f.V[i + 1].sum(f.K[i + 1].image_under(f.A[i]));
    }
    f.eps.a.resize(f.r + 1);
    for (int i = 0; i <= f.r; ++i)
        f.eps.a[i] = static_cast<int>(f.K[i + 1].dim()) - static_cast<int>(f.K[i].dim());
    return f;
}

RationalLoop FactorizationResult::product(std::size_t n) const {
    RationalLoop g = RationalLoop::identity(n);
    for (const auto& f : factors) g = g * f.loop;
    return g;
}

namespace {

bool spaces_orthogonal(const Subspace& a, const Subspace& b, const HermForm& form) {
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            if (!form.inner(a.basis_vector(i), b.basis_vector(j)).is_zero()) return false;
    return true;
}

// Smallest s >= 0 with im A_i inside V_i for all i >= s.
int compute_s(const Filtration& f) {
    int s = 0;
    for (int i = f.r; i >= 0; --i) {
        Subspace im = rref_kernel_image(f.A[i]).image;
        if (!f.V[i].contains(im)) {
            s = i + 1;
            break;
        }
    }
    return s;
}

TowerScalar fresh_real_point(const std::vector<TowerScalar>& taken) {
    for (long k = 0;; ++k) {
        TowerScalar cand{Rat(k)};
        bool clash = false;
        for (const auto& t : taken)
            if (t == cand) { clash = true; break; }
        if (!clash) return cand;
    }
}

struct ReductionSite {
    int s = 0, l = 0;
    std::vector<TowerScalar> v;
};

// The index pair (s, l) and witness vector of the basic induction step.
ReductionSite find_site(const Filtration& f) {
    ReductionSite site;
    site.s = compute_s(f);
    if (site.s == 0) throw SZeroImpossible();
    int s = site.s;
    const Subspace& vs1 = f.V[s - 1];
    const Mat& as1 = f.A[s - 1];
    for (int l = s + 1; l <= f.r + 1; ++l) {
        if (vs1.contains(f.K[l].image_under(as1))) continue;
        site.l = l;
        for (std::size_t c = 0; c < f.K[l].dim(); ++c) {
            auto cand = f.K[l].basis_vector(c);
            if (!vs1.contains(as1.apply(cand))) {
                site.v = cand;
                return site;
            }
        }
        throw Error(ErrorClass::Validation, "no witness vector in K_l");
    }
    throw Error(ErrorClass::Validation, "no reduction index l found");
}

struct Engine {
    RationalLoop h;
    RealityMode mode = RealityMode::None;
    std::size_t p = 0, q = 0;
    std::vector<SimpleElement> factors;
    std::vector<StepRecord> journal;
    long guard = 0;

    HermForm form() const { return HermForm(p, q); }
    std::size_t n() const { return h.dim(); }

    void bump() {
        if (++guard > 20000) throw FactorizationStuck("global step limit exceeded");
    }

    // Left-multiply by the reducer and emit its closed-form inverse.
    void apply(const SimpleElement& reducer) {
        h = reducer.loop * h;
        factors.push_back(inverse_of(reducer));
    }

    // Regression tripwire: the working loop keeps its reality condition by
    // construction; checked at a sample point after every multiplication
    // (the full rational identity is verified on entry and on every emitted
    // factor).
    void check_reality() const {
        TowerScalar x{Rat(7, 3)};
        while (h.is_pole_at(x)) x += TowerScalar(1);
        if (mode == RealityMode::Glnr) {
            Mat v = h.eval(x);
            if (!v.is_real())
                throw Error(ErrorClass::Validation, "intermediate loop lost the reality condition");
        } else if (mode == RealityMode::Upq) {
            Mat v = h.eval(x);
            if (!(form().adjoint(v) * v).is_identity())
                throw Error(ErrorClass::Validation, "intermediate loop lost the reality condition");
        }
    }

    Mat leading_moebius(const TowerScalar& alpha, const TowerScalar& beta, int k) const {
        return h.moebius_laurent(alpha, beta, -k, -k)[0];
    }

    void pole_step(const TowerScalar& alpha, const SimpleElement& reducer) {
        StepRecord rec;
        rec.kind = StepKind::Pole;
        rec.location = alpha;
        rec.pole_before = h.pole_data_at(alpha);
        apply(reducer);
        rec.pole_after = h.pole_data_at(alpha);
        if (!(rec.pole_after < rec.pole_before))
            throw FactorizationStuck(
                "pole data did not decrease: (" + std::to_string(rec.pole_before.k) + "," +
                std::to_string(rec.pole_before.rank) + ") -> (" +
                std::to_string(rec.pole_after.k) + "," + std::to_string(rec.pole_after.rank) +
                ") at " + alpha.to_string());
        journal.push_back(rec);
        check_reality();
    }

    void zero_step(const TowerScalar& alpha, const SimpleElement& reducer) {
        StepRecord rec;
        rec.kind = StepKind::Zero;
        rec.location = alpha;
        rec.zero_before = h.det_order_at(alpha);
        apply(reducer);
        if (h.is_pole_at(alpha))
            throw FactorizationStuck("zero step reintroduced a pole");
        rec.zero_after = h.det_order_at(alpha);
        if (rec.zero_after >= rec.zero_before)
            throw FactorizationStuck("zero order did not decrease");
        journal.push_back(rec);
        check_reality();
    }

    // ---- plain mode ----

    void resolve_pair_glnc(const TowerScalar& alpha, const TowerScalar& beta) {
        while (h.is_pole_at(alpha)) {
            bump();
            int k = h.pole_order_at(alpha);
            Mat lead = leading_moebius(alpha, beta, k);
            Subspace v = rref_kernel_image(lead).image;
            Subspace w = complement(v);
            pole_step(alpha, make_p(alpha, beta, v, w));
        }
        while (h.det_order_at(alpha) > 0) {
            bump();
            Mat g0 = h.eval(alpha);
            Subspace w = rref_kernel_image(g0).image;
            Subspace v = complement(w);
            zero_step(alpha, make_p(beta, alpha, v, w));
        }
    }

    // ---- real form ----

    void resolve_nonreal_glnr(const TowerScalar& alpha, const TowerScalar& beta) {
        while (h.is_pole_at(alpha)) {
            bump();
            int k = h.pole_order_at(alpha);
            Mat lead = leading_moebius(alpha, beta, k);
            Subspace im = rref_kernel_image(lead).image;
            Subspace v0 = im.intersect(im.conj());
            if (v0.dim() > 0) {
                Subspace w = real_complement(v0);
                pole_step(alpha, make_q_glnr(alpha, beta, v0, w));
            } else {
                Subspace w = real_complement(im.sum(im.conj()));
                pole_step(alpha, make_r_glnr(alpha, beta, im, w));
            }
        }
        while (h.det_order_at(alpha) > 0) {
            bump();
            Mat g0 = h.eval(alpha);
            Subspace im = rref_kernel_image(g0).image;
            ConjSplit cs = conj_split(im);
            if (cs.w1.dim() > 0) {
                Subspace v = cs.w1.conj();
                Subspace u = cs.inv_part.sum(cs.w1).sum(v);
                Subspace w2 = real_complement(u);
                zero_step(alpha, make_r_glnr(beta, alpha, v, cs.inv_part.sum(w2)));
            } else {
                Subspace v = real_complement(im);
                zero_step(alpha, make_q_glnr(beta, alpha, v, im));
            }
        }
    }

    void resolve_real_pair_glnr(const TowerScalar& alpha, const TowerScalar& beta) {
        while (h.is_pole_at(alpha)) {
            bump();
            int k = h.pole_order_at(alpha);
            Mat lead = leading_moebius(alpha, beta, k);
            Subspace v = rref_kernel_image(lead).image;
            if (v.conj() != v)
                throw Error(ErrorClass::Validation, "leading image is not conjugation-invariant");
            pole_step(alpha, make_p(alpha, beta, v, real_complement(v)));
        }
        while (h.det_order_at(alpha) > 0) {
            bump();
            Mat g0 = h.eval(alpha);
            Subspace w = rref_kernel_image(g0).image;
            if (w.conj() != w)
                throw Error(ErrorClass::Validation, "value image is not conjugation-invariant");
            zero_step(alpha, make_p(beta, alpha, real_complement(w), w));
        }
    }

    // ---- indefinite form ----

    void resolve_nonreal_upq(const TowerScalar& alpha, const TowerScalar& beta) {
        HermForm f = form();
        while (h.is_pole_at(alpha)) {
            bump();
            int k = h.pole_order_at(alpha);
            Mat lead = leading_moebius(alpha, beta, k);
            Subspace im = rref_kernel_image(lead).image;
            Subspace rad = radical(im, f);
            // The radical is an isotropic subspace already in the field; a
            // nondegenerate image lets the hermitian p element drop the
            // whole leading coefficient. Neither branch extends the tower.
            if (rad.dim() > 0) {
                pole_step(alpha, make_q_upq(alpha, beta, rad, f));
            } else {
                pole_step(alpha, make_p_herm(alpha, im, f));
            }
        }
        while (h.det_order_at(alpha) > 0) {
            bump();
            Mat g0 = h.eval(alpha);
            Subspace im = rref_kernel_image(g0).image;
            Subspace rad = radical(im, f);
            if (rad.dim() == 0) {
                zero_step(alpha, make_p_herm(alpha.conj(), orth_complement(im, f), f));
            } else {
                zero_step(alpha, make_q_upq(beta, alpha, rad.image_under(f.s_matrix()), f));
            }
        }
    }

    // ---- single-singularity phases ----

    // The basic induction with all independent witnesses of a site cancelled
    // at once; the rank-one step of single_singularity_reduce iterated per
    // vector emits the same kind of factors with far fewer rounds.
    void single_phase_basic(const TowerScalar& alpha) {
        Filtration f0 = compute_filtration(h, alpha);
        long cap = 2 * f0.eps.weight() + 4;
        long steps = 0;
        while (!h.is_identity()) {
            bump();
            if (++steps > cap) throw FactorizationStuck("single-singularity step bound exceeded");
            Filtration f = compute_filtration(h, alpha);
            StepRecord rec;
            rec.kind = StepKind::Single;
            rec.location = alpha;
            rec.eps_before = f.eps;

            ReductionSite site = find_site(f);
            const Subspace& vs1 = f.V[site.s - 1];
            const Mat& as1 = f.A[site.s - 1];
            const Mat& al1 = f.A[site.l - 1];
            // All K_l basis vectors whose images are independent modulo V_{s-1}.
            std::vector<std::vector<TowerScalar>> wits, pivots;
            Mat span = vs1.basis();
            std::size_t rank = span.cols() ? span.rank() : 0;
            for (std::size_t c = 0; c < f.K[site.l].dim(); ++c) {
                auto cand = f.K[site.l].basis_vector(c);
                auto img = as1.apply(cand);
                Mat aug = Mat::hcat(span, Mat::column(img));
                if (aug.rank() > rank) {
                    span = aug;
                    ++rank;
                    wits.push_back(cand);
                    pivots.push_back(img);
                }
            }
            if (wits.empty()) throw Error(ErrorClass::Validation, "empty reduction site");
            Mat pivot_cols(n(), pivots.size());
            for (std::size_t c = 0; c < pivots.size(); ++c) pivot_cols.set_col(c, pivots[c]);
            Subspace spine = vs1.sum(Subspace::span(n(), pivot_cols));
            Subspace rest = complement(spine);
            Mat frame = Mat::hcat(Mat::hcat(vs1.basis(), pivot_cols), rest.basis());
            if (frame.cols() != n() || frame.rank() != n())
                throw Error(ErrorClass::Validation, "functional frame is degenerate");
            Mat finv = frame.inverse();
            Mat nmat(n(), n());
            for (std::size_t t = 0; t < wits.size(); ++t) {
                auto target = al1.apply(wits[t]);
                std::size_t row = vs1.dim() + t;
                for (std::size_t cidx = 0; cidx < n(); ++cidx)
                    for (std::size_t ridx = 0; ridx < n(); ++ridx)
                        nmat.at(ridx, cidx) -= target[ridx] * finv.at(row, cidx);
            }
            if (!(nmat * nmat).is_zero())
                throw Error(ErrorClass::Validation, "reduction nilpotent is not two-step");
            if (mode == RealityMode::Glnr && !nmat.is_real())
                throw Error(ErrorClass::Validation, "reduction produced a complex nilpotent");
            SimpleElement reducer = make_m(alpha, site.l - site.s, nmat, mode);
            apply(reducer);
            if (!h.is_identity()) {
                rec.eps_after = compute_filtration(h, alpha).eps;
                if (EpsilonTuple::cmp(rec.eps_after, rec.eps_before) >= 0)
                    throw FactorizationStuck("epsilon did not decrease");
            }
            journal.push_back(rec);
            check_reality();
        }
    }

    // Reduce away the pole at a real point. m and n factors drive the
    // epsilon tuple down whenever a reduction site exists; the value A_0 at
    // alpha takes the role the identity coefficient plays for a
    // single-singularity loop, and the reality relations keep exactly the
    // shape the constructions need. When every coefficient image already
    // sits inside its target space (s0 = 0), those same relations make the
    // leading image orthogonal to everything the next coefficient produces,
    // so one q factor drops the pole order outright.
    void resolve_real_point_upq(const TowerScalar& alpha) {
        Filtration f0 = compute_filtration(h, alpha);
        long cap = 2 * f0.eps.weight() + 4 + 2 * f0.r;
        long steps = 0;
        while (h.is_pole_at(alpha)) {
            bump();
            if (++steps > cap) throw FactorizationStuck("real-point step bound exceeded");
            Filtration f = compute_filtration(h, alpha);
            if (compute_s(f) == 0 || !single_upq_step(alpha)) real_point_q_step(alpha);
        }
        if (h.det_order_at(alpha) != 0)
            throw FactorizationStuck("real point still singular after pole removal");
    }

    void real_point_q_step(const TowerScalar& alpha) {
        HermForm fm = form();
        TowerScalar beta;
        bool have = false;
        std::vector<TowerScalar> taken;
        for (const auto& s : h.singularities()) {
            taken.push_back(s.location);
            if (s.location.is_real() && s.location != alpha &&
                (!have || value_cmp(s.location, beta) < 0)) {
                beta = s.location;
                have = true;
            }
        }
        if (!have) beta = fresh_real_point(taken);
        int k = h.pole_order_at(alpha);
        Mat lead = leading_moebius(alpha, beta, k);
        Subspace v = rref_kernel_image(lead).image;
        if (!is_isotropic(v, fm))
            throw FactorizationStuck("real-pole leading image is not isotropic");
        pole_step(alpha, make_q_upq(beta, alpha, v.image_under(fm.s_matrix()), fm));
    }

    void single_upq_check_invariants(const Filtration& f) {
        HermForm fm = form();
        for (int i = 1; i <= f.r + 1; ++i)
            if (!is_isotropic(f.V[i], fm))
                throw Error(ErrorClass::Validation, "filtration target space is not isotropic");
        if (!spaces_orthogonal(f.V[0], f.V[1], fm))
            throw Error(ErrorClass::Validation, "V_0 is not orthogonal to V_1");
    }

    // One epsilon-decreasing move with m or n factors (two in the rotation
    // case). Returns false, leaving the loop untouched, when the filtration
    // offers no usable site; the caller then falls back to a q factor,
    // whose leading term dies precisely in those states.
    bool single_upq_step(const TowerScalar& alpha) {
        Filtration f = compute_filtration(h, alpha);
        single_upq_check_invariants(f);
        EpsilonTuple before = f.eps;
        StepRecord rec;
        rec.kind = StepKind::Single;
        rec.location = alpha;
        rec.eps_before = before;
        rec.factors_emitted = 0;

        bool done = false;
        for (int attempt = 0; attempt < 3 && !done; ++attempt) {
            if (attempt > 0) {
                f = compute_filtration(h, alpha);
                single_upq_check_invariants(f);
            }
            if (try_skew_site(alpha, f, rec)) {
                done = true;
                break;
            }
            auto blocked = blocked_state_step(alpha, f, rec);
            if (!blocked.has_value()) {
                if (rec.factors_emitted > 0)
                    throw FactorizationStuck("blocked state degenerated after a rotation");
                return false;
            }
            done = *blocked;
        }
        if (!done) throw FactorizationStuck("pairing rotation did not converge");
        if (h.is_pole_at(alpha)) {
            rec.eps_after = compute_filtration(h, alpha).eps;
            if (EpsilonTuple::cmp(rec.eps_after, before) >= 0)
                throw FactorizationStuck("epsilon did not decrease");
        }
        journal.push_back(rec);
        check_reality();
        return true;
    }

    // Basic induction step with a skew nilpotent built on a small isotropic
    // subspace; mirrors the plain construction but stays inside the form.
    bool try_skew_site(const TowerScalar& alpha, const Filtration& f, StepRecord& rec) {
        HermForm fm = form();
        ReductionSite site = find_site(f);
        auto w = f.A[site.s - 1].apply(site.v);
        auto y = f.A[site.l - 1].apply(site.v);
        if (vec_is_zero(y)) throw Error(ErrorClass::Validation, "vanishing target coefficient");
        TowerScalar c = fm.inner(w, y);
        if (!c.real_part().is_zero())
            throw Error(ErrorClass::Validation, "pairing is not purely imaginary at the site");
        auto vprime = vec_scale(TowerScalar(-1), y);
        auto vl = isotropic_with_pairing(vprime, f.V[site.s - 1], w, fm);
        if (!vl) return false;
        NilpotentMap nmap = build_skew_nilpotent(*vl, vprime, w, fm);
        SimpleElement reducer = make_m(alpha, site.l - site.s, nmap.matrix, RealityMode::Upq, p, q);
        apply(reducer);
        rec.factors_emitted += 1;
        return true;
    }

    // Blocked state of the unequal-signature proof: V_k maximal isotropic,
    // im A_k inside V^perp but not V. Emits a skew m factor or an n factor
    // (returns true), or a pairing-rotation m factor (returns false).
    // Returns nullopt without touching the loop when the state does not
    // have the blocked shape at all.
    std::optional<bool> blocked_state_step(const TowerScalar& alpha, const Filtration& f,
                                           StepRecord& rec) {
        HermForm fm = form();
        int s0 = compute_s(f);
        if (s0 < 2) return std::nullopt;
        int k = s0 - 1;
        const Subspace& v_space = f.V[k];
        if (!is_isotropic(v_space, fm) || v_space.dim() != std::min(fm.p(), fm.q()))
            return std::nullopt;
        Subspace vperp = orth_complement(v_space, fm);
        if (!vperp.contains(rref_kernel_image(f.A[k]).image)) return std::nullopt;
        for (int j = k + 1; j <= f.r; ++j)
            if (!v_space.contains(rref_kernel_image(f.A[j]).image)) return std::nullopt;

        // s: depth of the first coefficient pairing with V.
        int s = -1;
        for (int j = 1; j <= k; ++j) {
            if (!vperp.contains(rref_kernel_image(f.coeff(k - j)).image)) {
                s = j;
                break;
            }
        }
        if (s < 0) return std::nullopt;

        // l and the witness vector.
        int l = -1000;
        std::vector<TowerScalar> v;
        for (int cand = -s + 1; cand <= f.r + 2 - k; ++cand) {
            const Subspace& kl1 = f.kernel_at(k + cand + 1);
            Subspace img = kl1.image_under(f.coeff(k - s));
            if (vperp.contains(img)) continue;
            l = cand;
            for (std::size_t cidx = 0; cidx < kl1.dim(); ++cidx) {
                auto cv = kl1.basis_vector(cidx);
                if (!vperp.contains(f.coeff(k - s).apply(cv))) {
                    v = cv;
                    break;
                }
            }
            break;
        }
        if (l == -1000 || v.empty()) return std::nullopt;

        auto u = f.coeff(k - s).apply(v);
        auto y = f.coeff(k + l).apply(v);
        if (vec_is_zero(y)) throw FactorizationStuck("blocked state: vanishing top coefficient");
        if (!v_space.contains(y))
            throw FactorizationStuck("blocked state: top coefficient escapes V");
        TowerScalar c = fm.inner(u, y);
        bool c_real = c.imag_part().is_zero();
        bool c_imag = c.real_part().is_zero();

        if ((s + l) % 2 != 0 || c_imag) {
            if (!c_imag) throw FactorizationStuck("odd-site pairing is not purely imaginary");
            NilpotentMap nmap =
                build_skew_nilpotent(v_space, vec_scale(TowerScalar(-1), y), u, fm);
            apply(make_m(alpha, s + l, nmap.matrix, RealityMode::Upq, p, q));
            rec.factors_emitted += 1;
            return true;
        }
        if (c_real) {
            int mid = k + (l - s) / 2;
            auto vmid = f.coeff(mid).apply(v);
            ThreeStep ts = build_three_step(v_space, u, vmid, y, fm);
            apply(make_n_upq(alpha, (s + l) / 2, ts.n.matrix, v_space, fm));
            rec.factors_emitted += 1;
            return true;
        }
        // Mixed pairing: rotate it to a real one with a preliminary m factor.
        TowerScalar mu = -(TowerScalar::i() * (c.imag_part() / c));
        NilpotentMap rot = build_skew_nilpotent(v_space, vec_scale(mu, y), u, fm);
        apply(make_m(alpha, s + l, rot.matrix, RealityMode::Upq, p, q));
        rec.factors_emitted += 1;
        return false;
    }
};

std::vector<TowerScalar> sorted_locations(const std::vector<SingularityReport>& sings) {
    std::vector<TowerScalar> pts;
    for (const auto& s : sings) pts.push_back(s.location);
    std::sort(pts.begin(), pts.end(),
              [](const TowerScalar& a, const TowerScalar& b) { return value_cmp(a, b) < 0; });
    return pts;
}

}  // namespace

SingleStep single_singularity_reduce(const RationalLoop& g, RealityMode mode) {
    if (mode == RealityMode::Upq)
        throw Error(ErrorClass::Validation,
                    "indefinite-form reduction is handled inside its factorizer");
    if (g.is_identity()) throw AlreadyIdentity();
    const auto& den = g.den_factors();
    if (den.size() != 1)
        throw Error(ErrorClass::Validation, "loop does not have a unique pole");
    TowerScalar alpha = den[0].first;
    if (mode == RealityMode::Glnr && !alpha.is_real())
        throw Error(ErrorClass::Validation, "real-form reduction needs a real pole");
    // det must be identically 1.
    Poly dn = g.den_poly();
    Poly dpow = Poly::one();
    for (std::size_t i = 0; i < g.dim(); ++i) dpow = dpow * dn;
    if (g.det_num() != dpow) throw SZeroImpossible("det of the loop is not identically 1");

    Filtration f = compute_filtration(g, alpha);
    if (!f.A[0].is_identity())
        throw Error(ErrorClass::Validation, "single-singularity loop is not normalized");
    ReductionSite site = find_site(f);
    std::size_t n = g.dim();

    // Rank-one nilpotent: N = -(A_{l-1} v) phi with phi = 1 on A_{s-1} v,
    // zero on V_{s-1} and on the complement spine.
    auto target = f.A[site.l - 1].apply(site.v);
    auto pivot = f.A[site.s - 1].apply(site.v);
    if (vec_is_zero(target)) throw Error(ErrorClass::Validation, "vanishing target coefficient");
    Subspace spine = f.V[site.s - 1].sum(Subspace::line(pivot));
    Subspace rest = complement(spine);
    Mat frame = Mat::hcat(Mat::hcat(f.V[site.s - 1].basis(), Mat::column(pivot)), rest.basis());
    if (frame.cols() != n || frame.rank() != n)
        throw Error(ErrorClass::Validation, "functional frame is degenerate");
    Mat finv = frame.inverse();
    std::size_t row = f.V[site.s - 1].dim();
    Mat nmat(n, n);
    for (std::size_t cidx = 0; cidx < n; ++cidx)
        for (std::size_t ridx = 0; ridx < n; ++ridx)
            nmat.at(ridx, cidx) = -(target[ridx] * finv.at(row, cidx));
    if (!(nmat * nmat).is_zero())
        throw Error(ErrorClass::Validation, "reduction nilpotent is not two-step");
    if (mode == RealityMode::Glnr && !nmat.is_real())
        throw Error(ErrorClass::Validation, "real-form reduction produced a complex nilpotent");

    SimpleElement reducer = make_m(alpha, site.l - site.s, nmat, mode);
    SingleStep out;
    out.g_prime = reducer.loop * g;
    out.factor = inverse_of(reducer);
    return out;
}

namespace {

FactorizationResult run_engine(Engine& eng) {
    if (!eng.h.is_negative()) throw NotNegative();
    while (!eng.h.is_identity()) {
        eng.bump();
        auto sings = eng.h.singularities();
        auto pts = sorted_locations(sings);
        if (pts.empty()) throw FactorizationStuck("nontrivial loop without singularities");

        if (eng.mode == RealityMode::None) {
            if (pts.size() >= 2) {
                TowerScalar alpha;
                bool found = false;
                for (const auto& s : sings)
                    if (s.is_pole) {
                        if (!found || value_cmp(s.location, alpha) < 0) {
                            alpha = s.location;
                            found = true;
                        }
                    }
                if (!found) throw FactorizationStuck("no pole among several singularities");
                TowerScalar beta;
                for (const auto& ptv : pts)
                    if (ptv != alpha) { beta = ptv; break; }
                eng.resolve_pair_glnc(alpha, beta);
            } else {
                eng.single_phase_basic(pts[0]);
            }
            continue;
        }

        // Reality modes: canonical representatives, nonreal first.
        std::vector<TowerScalar> nonreal, real_pts;
        for (const auto& ptv : pts) {
            if (ptv.is_real()) {
                real_pts.push_back(ptv);
            } else {
                TowerScalar rep = ptv.imag_part().sign() < 0 ? ptv.conj() : ptv;
                bool seen = false;
                for (const auto& r : nonreal)
                    if (r == rep) { seen = true; break; }
                if (!seen) nonreal.push_back(rep);
            }
        }
        std::sort(nonreal.begin(), nonreal.end(),
                  [](const TowerScalar& a, const TowerScalar& b) { return value_cmp(a, b) < 0; });

        if (!nonreal.empty()) {
            TowerScalar alpha = nonreal[0];
            TowerScalar beta;
            bool have_beta = false;
            for (const auto& ptv : pts)
                if (ptv != alpha && ptv != alpha.conj()) {
                    beta = ptv;
                    have_beta = true;
                    break;
                }
            if (!have_beta) beta = fresh_real_point(pts);
            if (eng.mode == RealityMode::Glnr)
                eng.resolve_nonreal_glnr(alpha, beta);
            else
                eng.resolve_nonreal_upq(alpha, beta);
            continue;
        }
        if (eng.mode == RealityMode::Upq) {
            // Real poles are removed point by point with m and n factors.
            TowerScalar alpha;
            bool found = false;
            for (const auto& s : sings)
                if (s.is_pole && (!found || value_cmp(s.location, alpha) < 0)) {
                    alpha = s.location;
                    found = true;
                }
            if (!found) throw FactorizationStuck("no pole among real singularities");
            eng.resolve_real_point_upq(alpha);
            continue;
        }
        if (real_pts.size() >= 2) {
            TowerScalar alpha;
            bool found = false;
            for (const auto& s : sings)
                if (s.is_pole) {
                    if (!found || value_cmp(s.location, alpha) < 0) {
                        alpha = s.location;
                        found = true;
                    }
                }
            if (!found) throw FactorizationStuck("no pole among several real singularities");
            TowerScalar beta;
            for (const auto& ptv : real_pts)
                if (ptv != alpha) { beta = ptv; break; }
            eng.resolve_real_pair_glnr(alpha, beta);
            continue;
        }
        eng.single_phase_basic(real_pts[0]);
    }
    FactorizationResult out;
    out.factors = std::move(eng.factors);
    out.journal = std::move(eng.journal);
    return out;
}

}  // namespace

FactorizationResult factor_glnc(const RationalLoop& g) {
    Engine eng;
    eng.h = g;
    eng.mode = RealityMode::None;
    return run_engine(eng);
}

FactorizationResult factor_glnr(const RationalLoop& g) {
    if (!g.check_glnr_reality().ok) throw RealityViolated();
    Engine eng;
    eng.h = g;
    eng.mode = RealityMode::Glnr;
    return run_engine(eng);
}

FactorizationResult factor_upq(const RationalLoop& g, std::size_t p, std::size_t q) {
    if (p > q) throw Error(ErrorClass::Validation, "signature convention requires p <= q");
    if (p + q != g.dim()) throw Error(ErrorClass::Validation, "signature does not match the loop");
    if (!g.check_upq_reality(HermForm(p, q)).ok) throw RealityViolated();
    Engine eng;
    eng.h = g;
    eng.mode = RealityMode::Upq;
    eng.p = p;
    eng.q = q;
    return run_engine(eng);
}

}  // namespace rloop
