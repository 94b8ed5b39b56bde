#pragma once

#include <optional>
#include <vector>

#include "rloop/tower.hpp"

namespace rloop {

/// Dense polynomial over TowerScalar, ascending coefficients, no trailing zeros.
class Poly {
public:
    Poly() = default;
    Poly(const TowerScalar& c) { coeffs_.push_back(c); strip(); }  // NOLINT
    explicit Poly(std::vector<TowerScalar> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

    static Poly zero() { return Poly(); }
    static Poly one() { return Poly(TowerScalar(1)); }
    /// The monomial lambda - alpha.
    static Poly linear(const TowerScalar& alpha) {
        return Poly(std::vector<TowerScalar>{-alpha, TowerScalar(1)});
    }
    static Poly from_roots(const std::vector<TowerScalar>& roots);

    const std::vector<TowerScalar>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const TowerScalar& leading() const;
    TowerScalar coeff(std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : TowerScalar(0);
    }

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const TowerScalar& s) const;
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    TowerScalar eval(const TowerScalar& x) const;
    Poly derivative() const;
    Poly monic() const;
    /// Coefficients of p(alpha + mu) as a polynomial in mu.
    Poly shifted(const TowerScalar& alpha) const;
    /// p(-lambda).
    Poly negated_arg() const;
    /// Coefficient-wise complex conjugate; realizes lambda -> conj(p(conj(lambda))).
    Poly conj_coeffs() const;

    /// Exact Euclidean division; denominator must be nonzero.
    static void divrem(const Poly& a, const Poly& b, Poly* q, Poly* r);
    /// True division; throws if remainder is nonzero.
    Poly operator/(const Poly& o) const;

    /// Multiplicity of root x (0 if not a root); if strip is nonnull, receives p/(lambda-x)^mult.
    int root_multiplicity(const TowerScalar& x, Poly* strip = nullptr) const;

    /// Truncated product: coefficients of a*b up to degree `order`.
    static Poly mul_trunc(const Poly& a, const Poly& b, int order);
    /// Series inverse to given order; constant term must be nonzero.
    Poly series_inverse(int order) const;

private:
    std::vector<TowerScalar> coeffs_;
    void strip() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }
};

/// Monic gcd via the exact Euclidean algorithm.
Poly poly_gcd(const Poly& a, const Poly& b);

/// Reduced quotient of polynomials: gcd-cancelled, monic denominator.
class RatFunc {
public:
    RatFunc() : num_(Poly::zero()), den_(Poly::one()) {}
    RatFunc(const TowerScalar& c) : num_(Poly(c)), den_(Poly::one()) {}  // NOLINT
    RatFunc(const Poly& num, const Poly& den) { normalize(num, den); }
    explicit RatFunc(const Poly& num) : num_(num), den_(Poly::one()) {}

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    RatFunc operator-() const;
    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    /// Exact value; nullopt encodes a pole.
    std::optional<TowerScalar> eval(const TowerScalar& x) const;
    /// Value at infinity per degree rule; nullopt encodes a pole at infinity.
    std::optional<TowerScalar> eval_at_infinity() const;

private:
    Poly num_, den_;
    void normalize(const Poly& num, const Poly& den);
};

}  // namespace rloop
