#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rloop/errors.hpp"

namespace rloop {

using Int = mpz_class;
using Rat = mpq_class;

/// Reduced rational with positive denominator.
inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw ZeroDenominator();
    Rat r(num, den);
    r.canonicalize();
    return r;
}
Rat parse_rat(const std::string& s);
std::string rat_to_string(const Rat& r);

/// Gaussian rational re + i*im.
struct Gauss {
    Rat re, im;

    Gauss() : re(0), im(0) {}
    Gauss(const Rat& r) : re(r), im(0) {}                    // NOLINT(google-explicit-constructor)
    Gauss(long r) : re(r), im(0) {}                          // NOLINT(google-explicit-constructor)
    Gauss(const Rat& r, const Rat& i) : re(r), im(i) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    Gauss conj() const { return {re, Rat(-im)}; }
    Rat norm() const { return re * re + im * im; }  // re^2 + im^2

    Gauss operator-() const { return {Rat(-re), Rat(-im)}; }
    Gauss operator+(const Gauss& o) const { return {re + o.re, im + o.im}; }
    Gauss operator-(const Gauss& o) const { return {re - o.re, im - o.im}; }
    Gauss operator*(const Gauss& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Gauss inv() const {
        if (is_zero()) throw DivisionByZero();
        Rat n = norm();
        return {re / n, -im / n};
    }
    Gauss operator/(const Gauss& o) const { return *this * o.inv(); }
    bool operator==(const Gauss& o) const { return re == o.re && im == o.im; }
    bool operator!=(const Gauss& o) const { return !(*this == o); }
};

/// Square-root extension tower over Q: a sorted list of squarefree-reduced
/// integer radicands r_1 < ... < r_m, pairwise independent modulo squares.
/// The field is Q(i)(sqrt r_1, ..., sqrt r_m); its real basis monomials are
/// prod_{k in S} sqrt(r_k) indexed by subset bitmasks S.
struct TowerData {
    std::vector<Int> radicands;
    bool operator==(const TowerData& o) const { return radicands == o.radicands; }
};
using TowerRef = std::shared_ptr<const TowerData>;

TowerRef trivial_tower();

/// Element of Q(i)(sqrt r_1,...,sqrt r_m): coords[S] is the Gaussian-rational
/// coefficient of the basis monomial prod_{k in S} sqrt(r_k).
class TowerScalar {
public:
    TowerScalar() : tower_(trivial_tower()), coords_(1) {}
    TowerScalar(const Rat& r) : tower_(trivial_tower()), coords_(1, Gauss(r)) {}   // NOLINT
    TowerScalar(long r) : tower_(trivial_tower()), coords_(1, Gauss(r)) {}         // NOLINT
    TowerScalar(const Gauss& g) : tower_(trivial_tower()), coords_(1, g) {}        // NOLINT
    TowerScalar(TowerRef tower, std::vector<Gauss> coords);

    static TowerScalar i() { return TowerScalar(Gauss(Rat(0), Rat(1))); }

    const TowerRef& tower() const { return tower_; }
    const std::vector<Gauss>& coords() const { return coords_; }
    std::size_t tower_levels() const { return tower_->radicands.size(); }

    bool is_zero() const;
    bool is_one() const { return (*this - TowerScalar(1)).is_zero(); }
    /// Rational (trivial monomial, zero imaginary part)?
    bool is_rational() const;
    /// Fixed by conjugation (all coords have zero imaginary part)?
    bool is_real() const;
    /// Value in Q(i) (trivial monomial support)?
    bool is_gaussian() const;
    Rat rational_value() const;   // requires is_rational()
    Gauss gaussian_value() const; // requires is_gaussian()

    TowerScalar conj() const;
    TowerScalar real_part() const;
    TowerScalar imag_part() const;  // the real scalar b in a + i b

    TowerScalar operator-() const;
    TowerScalar operator+(const TowerScalar& o) const;
    TowerScalar operator-(const TowerScalar& o) const;
    TowerScalar operator*(const TowerScalar& o) const;
    TowerScalar inv() const;
    TowerScalar operator/(const TowerScalar& o) const;
    TowerScalar& operator+=(const TowerScalar& o) { return *this = *this + o; }
    TowerScalar& operator-=(const TowerScalar& o) { return *this = *this - o; }
    TowerScalar& operator*=(const TowerScalar& o) { return *this = *this * o; }
    TowerScalar& operator/=(const TowerScalar& o) { return *this = *this / o; }

    bool operator==(const TowerScalar& o) const {
        if (tower_ == o.tower_ || *tower_ == *o.tower_) return coords_ == o.coords_;
        return (*this - o).is_zero();
    }
    bool operator!=(const TowerScalar& o) const { return !(*this == o); }

    /// Exact sign of a real scalar (-1, 0, +1) via interval refinement.
    int sign() const;

    /// Drop radicands whose coordinates all vanish; canonical minimal form.
    TowerScalar minimized() const;

    /// Deterministic total order: by minimized radicand list, then coords.
    /// Used for reproducible scheduling, not a field order.
    static int cmp(const TowerScalar& a, const TowerScalar& b);

    std::string to_string() const;

private:
    TowerRef tower_;
    std::vector<Gauss> coords_;  // size 2^m

    friend TowerScalar embed(const TowerScalar& x, const TowerRef& target);
};

/// Order by real part, then imaginary part (exact sign tests).
int value_cmp(const TowerScalar& a, const TowerScalar& b);

/// Smallest common tower containing both.
TowerRef merge_towers(const TowerRef& a, const TowerRef& b);
/// Rewrite x in the given (larger) tower. Target must contain x's tower.
TowerScalar embed(const TowerScalar& x, const TowerRef& target);
/// Bring two scalars into a common tower.
void align(TowerScalar& a, TowerScalar& b);

/// Exact square root of a real positive scalar. Extends the tower by one
/// positive rational radicand when needed; throws NotPositiveReal if r is not
/// real positive and TowerObstruction if the root does not live in any
/// real quadratic extension tower the engine can build.
TowerScalar sqrt_positive_real(const TowerScalar& r);

/// True iff x equals y^2 for some y in its own tower; returns y via out.
bool perfect_square_in_tower(const TowerScalar& x, TowerScalar* root);

/// Gaussian rational z with |z|^2 = rho, when rho is a sum of two rational
/// squares (searched directly; bounded work at desk scale).
std::optional<Gauss> gauss_norm_point(const Rat& rho);

}  // namespace rloop
