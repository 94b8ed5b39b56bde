#include "rloop/poly.hpp"

#include <algorithm>

namespace rloop {

Poly Poly::from_roots(const std::vector<TowerScalar>& roots) {
    Poly p = Poly::one();
    for (const auto& r : roots) p = p * Poly::linear(r);
    return p;
}

const TowerScalar& Poly::leading() const {
    if (coeffs_.empty()) throw Error(ErrorClass::Validation, "leading coefficient of zero");
    return coeffs_.back();
}

Poly Poly::operator-() const {
    std::vector<TowerScalar> c(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] = -coeffs_[k];
    return Poly(std::move(c));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<TowerScalar> c(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeff(k) + o.coeff(k);
    return Poly(std::move(c));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly::zero();
    std::vector<TowerScalar> c(coeffs_.size() + o.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
            if (o.coeffs_[j].is_zero()) continue;
            c[i + j] += coeffs_[i] * o.coeffs_[j];
        }
    }
    return Poly(std::move(c));
}

Poly Poly::operator*(const TowerScalar& s) const {
    std::vector<TowerScalar> c(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] = coeffs_[k] * s;
    return Poly(std::move(c));
}

bool Poly::operator==(const Poly& o) const {
    if (coeffs_.size() != o.coeffs_.size()) return false;
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        if (coeffs_[k] != o.coeffs_[k]) return false;
    return true;
}

TowerScalar Poly::eval(const TowerScalar& x) const {
    TowerScalar acc(0);
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
    return acc;
}

Poly Poly::derivative() const {
    if (coeffs_.size() <= 1) return Poly::zero();
    std::vector<TowerScalar> c(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) c[k - 1] = coeffs_[k] * TowerScalar(Rat(k));
    return Poly(std::move(c));
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    TowerScalar linv = leading().inv();
    return *this * linv;
}

Poly Poly::shifted(const TowerScalar& alpha) const {
    // Synthetic division chain: repeated division by (mu) after substituting lambda = alpha + mu.
    std::vector<TowerScalar> work = coeffs_;
    std::vector<TowerScalar> out(coeffs_.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        // Divide work by (lambda - alpha): remainder is the k-th Taylor coefficient.
        TowerScalar rem(0);
        for (std::size_t j = work.size(); j-- > 0;) {
            TowerScalar tmp = work[j];
            work[j] = rem;
            rem = rem * alpha + tmp;
        }
        out[k] = rem;
        if (!work.empty()) work.pop_back();
    }
    return Poly(std::move(out));
}

Poly Poly::negated_arg() const {
    std::vector<TowerScalar> c = coeffs_;
    for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
    return Poly(std::move(c));
}

Poly Poly::conj_coeffs() const {
    std::vector<TowerScalar> c(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] = coeffs_[k].conj();
    return Poly(std::move(c));
}

void Poly::divrem(const Poly& a, const Poly& b, Poly* q, Poly* r) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    std::vector<TowerScalar> rem = a.coeffs_;
    int db = b.degree();
    TowerScalar linv = b.leading().inv();
    std::vector<TowerScalar> quot;
    if (a.degree() >= db) quot.resize(a.degree() - db + 1);
    for (int k = a.degree(); k >= db; --k) {
        TowerScalar c = rem[k];
        if (!c.is_zero()) {
            c = c * linv;
            quot[k - db] = c;
            for (int j = 0; j <= db; ++j) rem[k - db + j] -= c * b.coeffs_[j];
        }
    }
    if (q) *q = Poly(std::move(quot));
    if (r) {
        if (static_cast<int>(rem.size()) > db) rem.resize(db < 0 ? 0 : db);
        *r = Poly(std::move(rem));
    }
}

Poly Poly::operator/(const Poly& o) const {
    Poly q, r;
    divrem(*this, o, &q, &r);
    if (!r.is_zero()) throw Error(ErrorClass::Validation, "inexact polynomial division");
    return q;
}

int Poly::root_multiplicity(const TowerScalar& x, Poly* strip) const {
    Poly cur = *this;
    int mult = 0;
    while (!cur.is_zero() && cur.eval(x).is_zero()) {
        Poly q, r;
        divrem(cur, Poly::linear(x), &q, &r);
        cur = q;
        ++mult;
    }
    if (strip) *strip = cur;
    return mult;
}

Poly Poly::mul_trunc(const Poly& a, const Poly& b, int order) {
    std::vector<TowerScalar> c(order + 1);
    for (std::size_t i = 0; i < a.coeffs_.size() && static_cast<int>(i) <= order; ++i) {
        if (a.coeffs_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.coeffs_.size() && static_cast<int>(i + j) <= order; ++j)
            c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Poly(std::move(c));
}

Poly Poly::series_inverse(int order) const {
    if (is_zero() || coeffs_[0].is_zero())
        throw Error(ErrorClass::Validation, "series inverse needs nonzero constant term");
    TowerScalar c0inv = coeffs_[0].inv();
    std::vector<TowerScalar> inv(order + 1);
    inv[0] = c0inv;
    for (int k = 1; k <= order; ++k) {
        TowerScalar acc(0);
        for (int j = 1; j <= k; ++j) acc += coeff(j) * inv[k - j];
        inv[k] = -(c0inv * acc);
    }
    return Poly(std::move(inv));
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero() && b.is_zero())
        throw Error(ErrorClass::Validation, "gcd of two zero polynomials");
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r;
        Poly::divrem(x, y, nullptr, &r);
        x = y;
        y = r;
    }
    return x.monic();
}

void RatFunc::normalize(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw ZeroDenominator();
    if (num.is_zero()) {
        num_ = Poly::zero();
        den_ = Poly::one();
        return;
    }
    Poly g = poly_gcd(num, den);
    Poly n = num / g, d = den / g;
    TowerScalar linv = d.leading().inv();
    num_ = n * linv;
    den_ = d * linv;
}

RatFunc RatFunc::operator-() const {
    RatFunc r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
    return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.is_zero()) throw DivisionByZero();
    return RatFunc(num_ * o.den_, den_ * o.num_);
}

std::optional<TowerScalar> RatFunc::eval(const TowerScalar& x) const {
    TowerScalar d = den_.eval(x);
    if (d.is_zero()) return std::nullopt;
    return num_.eval(x) / d;
}

std::optional<TowerScalar> RatFunc::eval_at_infinity() const {
    if (num_.is_zero()) return TowerScalar(0);
    int dn = num_.degree(), dd = den_.degree();
    if (dn < dd) return TowerScalar(0);
    if (dn == dd) return num_.leading() / den_.leading();
    return std::nullopt;
}

}  // namespace rloop
