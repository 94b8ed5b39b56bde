#include "rloop/loop.hpp"

#include <algorithm>

namespace rloop {

RationalLoop RationalLoop::identity(std::size_t n) {
    RationalLoop g;
    g.n_ = n;
    g.num_ = PolyMat::identity(n);
    g.det_num_ = Poly::one();
    return g;
}

RationalLoop RationalLoop::make(PolyMat num, std::vector<std::pair<TowerScalar, int>> den,
                                std::vector<TowerScalar> hints) {
    RationalLoop g;
    g.n_ = num.dim();
    g.num_ = std::move(num);
    g.den_ = std::move(den);
    g.det_num_ = g.num_.det();
    if (g.det_num_.is_zero()) throw IdenticallySingular();
    for (const auto& h : hints) g.add_hint(h);
    for (const auto& [root, mult] : g.den_) g.add_hint(root);
    g.reduce();
    g.sort_den();
    return g;
}

RationalLoop RationalLoop::from_entries(const std::vector<std::vector<RatFunc>>& entries,
                                        std::vector<TowerScalar> hints) {
    std::size_t n = entries.size();
    // Common denominator: least common multiple of factored entry denominators.
    std::vector<std::pair<TowerScalar, int>> den;
    for (const auto& row : entries)
        for (const auto& e : row) {
            auto roots = find_roots(e.den(), hints);
            for (const auto& [root, mult] : roots) {
                bool found = false;
                for (auto& [r, m] : den)
                    if (r == root) {
                        m = std::max(m, mult);
                        found = true;
                        break;
                    }
                if (!found) den.emplace_back(root, mult);
            }
        }
    PolyMat num(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const RatFunc& e = entries[r][c];
            if (e.is_zero()) continue;
            // Multiply by den / e.den as a product of remaining linear factors.
            Poly extra = Poly::one();
            Poly eden = e.den();
            for (const auto& [root, mult] : den) {
                int have = eden.root_multiplicity(root, &eden);
                for (int k = have; k < mult; ++k) extra = extra * Poly::linear(root);
            }
            num.at(r, c) = e.num() * extra;
        }
    return make(std::move(num), std::move(den), std::move(hints));
}

void RationalLoop::add_hint(const TowerScalar& x) {
    for (const auto& h : hints_)
        if (h == x) return;
    hints_.push_back(x);
}

void RationalLoop::reduce() {
    for (auto& [root, mult] : den_) {
        while (mult > 0 && num_.divide_all_by_root(root)) {
            --mult;
            // det_num loses n factors of (lambda - root).
            Poly lin = Poly::linear(root);
            for (std::size_t k = 0; k < n_; ++k) det_num_ = det_num_ / lin;
        }
    }
    den_.erase(std::remove_if(den_.begin(), den_.end(),
                              [](const auto& f) { return f.second == 0; }),
               den_.end());
}

void RationalLoop::sort_den() {
    std::sort(den_.begin(), den_.end(), [](const auto& a, const auto& b) {
        return TowerScalar::cmp(a.first, b.first) < 0;
    });
}

Poly RationalLoop::den_poly() const {
    Poly d = Poly::one();
    for (const auto& [root, mult] : den_)
        for (int k = 0; k < mult; ++k) d = d * Poly::linear(root);
    return d;
}

RatFunc RationalLoop::entry(std::size_t r, std::size_t c) const {
    Poly num = num_.at(r, c);
    if (num.is_zero()) return RatFunc();
    Poly den = Poly::one();
    for (const auto& [root, mult] : den_) {
        int have = num.root_multiplicity(root);
        int cancel = std::min(have, mult);
        Poly lin = Poly::linear(root);
        for (int k = 0; k < cancel; ++k) num = num / lin;
        for (int k = cancel; k < mult; ++k) den = den * lin;
    }
    return RatFunc(num, den);
}

RationalLoop RationalLoop::operator*(const RationalLoop& o) const {
    if (n_ != o.n_) throw Error(ErrorClass::Validation, "loop product dimension mismatch");
    RationalLoop g;
    g.n_ = n_;
    g.num_ = num_ * o.num_;
    g.den_ = den_;
    for (const auto& [root, mult] : o.den_) {
        bool found = false;
        for (auto& [r, m] : g.den_)
            if (r == root) {
                m += mult;
                found = true;
                break;
            }
        if (!found) g.den_.emplace_back(root, mult);
    }
    g.det_num_ = det_num_ * o.det_num_;
    g.hints_ = hints_;
    for (const auto& h : o.hints_) g.add_hint(h);
    g.reduce();
    g.sort_den();
    return g;
}

bool RationalLoop::operator==(const RationalLoop& o) const {
    if (n_ != o.n_) return false;
    Poly da = den_poly(), db = o.den_poly();
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c)
            if (num_.at(r, c) * db != o.num_.at(r, c) * da) return false;
    return true;
}

bool RationalLoop::is_identity() const {
    Poly d = den_poly();
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) {
            const Poly& want = (r == c) ? d : Poly::zero();
            if (num_.at(r, c) != want) return false;
        }
    return true;
}

RatFunc RationalLoop::det() const {
    Poly d = Poly::one();
    Poly dp = den_poly();
    for (std::size_t k = 0; k < n_; ++k) d = d * dp;
    return RatFunc(det_num_, d);
}

RationalLoop RationalLoop::inverse() const {
    // g^{-1} = adj(num) * den / det_num.
    PolyMat adj(n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) {
            PolyMat minor(n_ - 1);
            for (std::size_t i = 0, mi = 0; i < n_; ++i) {
                if (i == r) continue;
                for (std::size_t j = 0, mj = 0; j < n_; ++j) {
                    if (j == c) continue;
                    minor.at(mi, mj) = num_.at(i, j);
                    ++mj;
                }
                ++mi;
            }
            Poly cof = n_ == 1 ? Poly::one() : minor.det();
            if ((r + c) % 2 == 1) cof = -cof;
            adj.at(c, r) = cof;
        }
    auto det_roots = find_roots(det_num_, hints_);
    PolyMat num = adj * (den_poly() * det_num_.leading().inv());
    return make(std::move(num), std::move(det_roots), hints_);
}

Mat RationalLoop::eval(const TowerScalar& x) const {
    TowerScalar d(1);
    for (const auto& [root, mult] : den_) {
        TowerScalar f = x - root;
        if (f.is_zero()) throw EvalAtPole();
        for (int k = 0; k < mult; ++k) d *= f;
    }
    return num_.eval(x) * d.inv();
}

bool RationalLoop::is_pole_at(const TowerScalar& x) const {
    return pole_order_at(x) > 0;
}

int RationalLoop::pole_order_at(const TowerScalar& x) const {
    for (const auto& [root, mult] : den_)
        if (root == x) return mult;
    return 0;
}

std::optional<Mat> RationalLoop::eval_at_infinity() const {
    int dd = 0;
    for (const auto& [root, mult] : den_) dd += mult;
    Mat m(n_, n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) {
            const Poly& p = num_.at(r, c);
            if (p.degree() > dd) return std::nullopt;
            if (p.degree() == dd) m.at(r, c) = p.leading();  // den is monic
        }
    return m;
}

bool RationalLoop::is_negative() const {
    auto v = eval_at_infinity();
    return v.has_value() && v->is_identity();
}

int RationalLoop::det_order_at(const TowerScalar& x) const {
    int num_ord = det_num_.root_multiplicity(x);
    return num_ord - static_cast<int>(n_) * pole_order_at(x);
}

PoleData RationalLoop::pole_data_at(const TowerScalar& x) const {
    int k = pole_order_at(x);
    if (k == 0) return PoleData{0, 0};
    TowerScalar rest(1);
    for (const auto& [root, mult] : den_) {
        if (root == x) continue;
        TowerScalar f = x - root;
        for (int j = 0; j < mult; ++j) rest *= f;
    }
    Mat lead = num_.eval(x) * rest.inv();
    return PoleData{k, static_cast<int>(lead.rank())};
}

std::vector<std::pair<TowerScalar, int>> find_roots(const Poly& p,
                                                    const std::vector<TowerScalar>& hints) {
    if (p.is_zero()) throw Error(ErrorClass::Validation, "find_roots of zero polynomial");
    std::vector<std::pair<TowerScalar, int>> roots;
    Poly rest = p;
    auto try_root = [&](const TowerScalar& x) {
        Poly stripped;
        int m = rest.root_multiplicity(x, &stripped);
        if (m > 0) {
            for (auto& [r, k] : roots)
                if (r == x) {
                    k += m;
                    rest = stripped;
                    return;
                }
            roots.emplace_back(x, m);
            rest = stripped;
        }
    };
    for (const auto& h : hints) {
        if (rest.degree() < 1) break;
        try_root(h);
        try_root(h.conj());
        try_root(-h);
        try_root(-h.conj());
    }
    while (rest.degree() >= 1) {
        if (rest.degree() == 1) {
            try_root(-(rest.coeff(0) / rest.coeff(1)));
            continue;
        }
        if (rest.degree() == 2) {
            TowerScalar a = rest.coeff(2), b = rest.coeff(1), c = rest.coeff(0);
            TowerScalar disc = b * b - TowerScalar(4) * a * c;
            TowerScalar root;
            if (disc.is_zero()) {
                root = TowerScalar(0);
            } else if (!perfect_square_in_tower(disc, &root)) {
                if (disc.is_real()) {
                    root = disc.sign() > 0 ? sqrt_positive_real(disc)
                                           : TowerScalar::i() * sqrt_positive_real(-disc);
                } else {
                    throw IrreducibleDenominator(
                        "quadratic with irrational complex discriminant");
                }
            }
            TowerScalar two_a = TowerScalar(2) * a;
            try_root((-b + root) / two_a);
            try_root((-b - root) / two_a);
            if (rest.degree() >= 2)
                throw IrreducibleDenominator("quadratic did not split");
            continue;
        }
        throw IrreducibleDenominator("factor of degree >= 3 without a known root");
    }
    return roots;
}

std::vector<SingularityReport> RationalLoop::singularities() const {
    std::vector<SingularityReport> out;
    Poly rest = det_num_;
    for (const auto& [root, mult] : den_) {
        SingularityReport r;
        r.location = root;
        r.is_pole = true;
        r.pole = pole_data_at(root);
        out.push_back(r);
        rest.root_multiplicity(root, &rest);
    }
    // Remaining roots of the determinant numerator are zeros of the loop.
    auto zero_roots = find_roots(rest, hints_);
    for (const auto& [root, mult] : zero_roots) {
        SingularityReport r;
        r.location = root;
        r.is_pole = false;
        r.zero_order = mult;
        out.push_back(r);
    }
    return out;
}

std::vector<Mat> RationalLoop::moebius_laurent(const TowerScalar& alpha, const TowerScalar& beta,
                                               int lo, int hi) const {
    if (lo > hi) throw BadWindow();
    if (alpha == beta) throw Error(ErrorClass::Validation, "moebius_laurent needs alpha != beta");
    // lambda = (alpha - beta t) / (1 - t); for a degree-d poly p,
    // p(lambda(t)) * (1-t)^D = sum_i p_i (alpha - beta t)^i (1-t)^{D-i}.
    int dd = den_poly().degree();
    int dn = num_.max_degree();
    int D = std::max(dd, dn);
    Poly lam_num(std::vector<TowerScalar>{alpha, -beta});
    Poly one_minus(std::vector<TowerScalar>{TowerScalar(1), TowerScalar(-1)});
    std::vector<Poly> pow_num(D + 1), pow_den(D + 1);
    pow_num[0] = Poly::one();
    pow_den[0] = Poly::one();
    for (int k = 1; k <= D; ++k) {
        pow_num[k] = pow_num[k - 1] * lam_num;
        pow_den[k] = pow_den[k - 1] * one_minus;
    }
    auto transform = [&](const Poly& p) {
        Poly acc;
        for (int i = 0; i <= p.degree(); ++i) {
            if (p.coeff(i).is_zero()) continue;
            acc = acc + pow_num[i] * pow_den[D - i] * p.coeff(i);
        }
        return acc;
    };
    Poly tden = transform(den_poly());
    int v = 0;
    Poly unit = tden;
    {
        Poly stripped;
        v = tden.root_multiplicity(TowerScalar(0), &stripped);
        unit = stripped;
    }
    int order = hi + v;
    std::vector<Mat> out;
    if (order < 0) {
        for (int j = lo; j <= hi; ++j) out.push_back(Mat(n_, n_));
        return out;
    }
    Poly sinv = unit.series_inverse(order);
    std::vector<std::vector<Poly>> series(n_, std::vector<Poly>(n_));
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c)
            series[r][c] = Poly::mul_trunc(transform(num_.at(r, c)), sinv, order);
    for (int j = lo; j <= hi; ++j) {
        Mat m(n_, n_);
        int idx = j + v;
        if (idx >= 0)
            for (std::size_t r = 0; r < n_; ++r)
                for (std::size_t c = 0; c < n_; ++c) m.at(r, c) = series[r][c].coeff(idx);
        out.push_back(m);
    }
    return out;
}

std::vector<Mat> RationalLoop::principal_part(const TowerScalar& alpha) const {
    int k = pole_order_at(alpha);
    Poly rest = Poly::one();
    for (const auto& [root, mult] : den_) {
        if (root == alpha) continue;
        for (int j = 0; j < mult; ++j) rest = rest * Poly::linear(root);
    }
    Poly rest_series = rest.shifted(alpha);
    Poly sinv = rest_series.series_inverse(k);
    std::vector<Mat> out(k + 1, Mat(n_, n_));
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) {
            Poly shifted = num_.at(r, c).shifted(alpha);
            Poly ser = Poly::mul_trunc(shifted, sinv, k);
            for (int j = 0; j <= k; ++j) out[j].at(r, c) = ser.coeff(k - j);
        }
    return out;
}

ConditionReport RationalLoop::check_glnr_reality() const {
    Poly d = den_poly();
    Poly dc = d.conj_coeffs();
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c)
            if (num_.at(r, c).conj_coeffs() * d != num_.at(r, c) * dc)
                return {false, r, c};
    return {};
}

ConditionReport RationalLoop::check_upq_reality(const HermForm& form) const {
    // s * conj-coeff(num)^T * s * num = conj-coeff(den) * den * Id.
    PolyMat lhs = num_.conj_coeffs().transpose();
    Mat s = form.s_matrix();
    lhs = PolyMat::from_scalar(s) * lhs * PolyMat::from_scalar(s) * num_;
    Poly d = den_poly();
    Poly rhs = d.conj_coeffs() * d;
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) {
            const Poly& want = (r == c) ? rhs : Poly::zero();
            if (lhs.at(r, c) != want) return {false, r, c};
        }
    return {};
}

ConditionReport RationalLoop::check_twisted() const {
    PolyMat lhs = num_.negated_arg().transpose() * num_;
    Poly d = den_poly();
    Poly rhs = d.negated_arg() * d;
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) {
            const Poly& want = (r == c) ? rhs : Poly::zero();
            if (lhs.at(r, c) != want) return {false, r, c};
        }
    return {};
}

RationalLoop RationalLoop::conj_coeffs() const {
    RationalLoop g;
    g.n_ = n_;
    g.num_ = num_.conj_coeffs();
    for (const auto& [root, mult] : den_) g.den_.emplace_back(root.conj(), mult);
    g.det_num_ = det_num_.conj_coeffs();
    for (const auto& h : hints_) g.add_hint(h.conj());
    g.sort_den();
    return g;
}

RationalLoop RationalLoop::negated_arg() const {
    RationalLoop g;
    g.n_ = n_;
    g.num_ = num_.negated_arg();
    // den(-lambda) has roots at -root; restore monicity sign.
    TowerScalar scale(1);
    for (const auto& [root, mult] : den_) {
        g.den_.emplace_back(-root, mult);
        for (int k = 0; k < mult; ++k) scale = -scale;
    }
    if (!scale.is_one()) {
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = 0; c < n_; ++c) g.num_.at(r, c) = g.num_.at(r, c) * scale;
    }
    g.det_num_ = g.num_.det();
    for (const auto& h : hints_) g.add_hint(-h);
    g.sort_den();
    return g;
}

}  // namespace rloop
