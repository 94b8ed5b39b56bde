#pragma once

#include <map>
#include <optional>
#include <vector>

#include "rloop/matrix.hpp"
#include "rloop/subspace.hpp"

namespace rloop {

/// (order k, rank of leading coefficient), ordered lexicographically.
struct PoleData {
    int k = 0;
    int rank = 0;
    bool operator==(const PoleData& o) const { return k == o.k && rank == o.rank; }
    bool operator<(const PoleData& o) const {
        return k < o.k || (k == o.k && rank < o.rank);
    }
};

struct SingularityReport {
    TowerScalar location;
    bool is_pole = false;
    PoleData pole;      // valid when is_pole
    int zero_order = 0; // valid when !is_pole
};

enum class RealityMode { None, Glnr, Upq };

struct ConditionReport {
    bool ok = true;
    std::size_t row = 0, col = 0;  // first failing entry when !ok
};

/// n x n matrix of rational functions with a common factored denominator:
/// g = num / prod (lambda - root)^mult. Determinant is cached as a polynomial
/// numerator. The representation is globally reduced: no denominator root
/// divides every numerator entry.
class RationalLoop {
public:
    RationalLoop() : n_(0) {}
    static RationalLoop identity(std::size_t n);
    /// From numerator matrix and factored denominator.
    static RationalLoop make(PolyMat num, std::vector<std::pair<TowerScalar, int>> den,
                             std::vector<TowerScalar> hints = {});
    /// From per-entry rational functions; denominators must factor over the
    /// tower (linear factors found via hints, degree <= 2 formulas).
    static RationalLoop from_entries(const std::vector<std::vector<RatFunc>>& entries,
                                     std::vector<TowerScalar> hints = {});

    std::size_t dim() const { return n_; }
    const PolyMat& num() const { return num_; }
    const std::vector<std::pair<TowerScalar, int>>& den_factors() const { return den_; }
    const std::vector<TowerScalar>& hints() const { return hints_; }
    Poly den_poly() const;
    const Poly& det_num() const { return det_num_; }

    /// Canonical per-entry rational function.
    RatFunc entry(std::size_t r, std::size_t c) const;

    RationalLoop operator*(const RationalLoop& o) const;
    bool operator==(const RationalLoop& o) const;
    bool operator!=(const RationalLoop& o) const { return !(*this == o); }
    bool is_identity() const;

    /// det as a reduced rational function.
    RatFunc det() const;
    /// Exact inverse via adjugate / det; denominator roots must be findable.
    RationalLoop inverse() const;
    /// Value at a non-pole point.
    Mat eval(const TowerScalar& x) const;
    bool is_pole_at(const TowerScalar& x) const;
    std::optional<Mat> eval_at_infinity() const;
    /// Normalized at infinity: g(inf) = Id.
    bool is_negative() const;

    int pole_order_at(const TowerScalar& x) const;
    /// ord_x det g (positive = zero, negative = pole of det).
    int det_order_at(const TowerScalar& x) const;
    PoleData pole_data_at(const TowerScalar& x) const;

    /// All finite singularities. Zero locations are found from the cached
    /// determinant numerator via hint roots and low-degree factorization;
    /// an unfactorable remainder raises IrreducibleDenominator.
    std::vector<SingularityReport> singularities() const;

    /// Coefficients g_lo..g_hi of the expansion in t = (lambda-alpha)/(lambda-beta).
    std::vector<Mat> moebius_laurent(const TowerScalar& alpha, const TowerScalar& beta, int lo,
                                     int hi) const;

    /// Laurent coefficients at alpha: result[j] is the matrix of (lambda-alpha)^{-j},
    /// j = 0..k where k is the pole order (result has size k+1; empty principal
    /// part, size 1, when holomorphic).
    std::vector<Mat> principal_part(const TowerScalar& alpha) const;

    ConditionReport check_glnr_reality() const;
    ConditionReport check_upq_reality(const HermForm& form) const;
    ConditionReport check_twisted() const;

    RationalLoop conj_coeffs() const;
    RationalLoop negated_arg() const;

private:
    std::size_t n_ = 0;
    PolyMat num_;
    std::vector<std::pair<TowerScalar, int>> den_;  // sorted by TowerScalar::cmp
    Poly det_num_;
    std::vector<TowerScalar> hints_;

    void reduce();
    void sort_den();
    void add_hint(const TowerScalar& x);
};

/// Roots with multiplicity; throws IrreducibleDenominator when a factor of
/// degree >= 3 remains after hint stripping, or an irrational complex
/// discriminant blocks the quadratic formula.
std::vector<std::pair<TowerScalar, int>> find_roots(const Poly& p,
                                                    const std::vector<TowerScalar>& hints);

}  // namespace rloop
