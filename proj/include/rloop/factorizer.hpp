#pragma once

#include "rloop/simple_elements.hpp"

namespace rloop {

/// Progress measure for single-singularity loops: a_i = dim K_{i+1} - dim K_i.
/// Total order compares from the top index down.
struct EpsilonTuple {
    std::vector<int> a;
    static int cmp(const EpsilonTuple& x, const EpsilonTuple& y);
    bool is_minimal() const;
    /// sum of i * a_i; bounds the number of reduction steps.
    long weight() const;
};

/// Laurent data at the unique singularity: coefficients A_i of
/// (lambda-alpha)^{-i}, kernels K_i and targets V_i.
struct Filtration {
    TowerScalar alpha;
    std::vector<Mat> A;
    std::vector<Subspace> K;  // K[0..r+1]
    std::vector<Subspace> V;  // V[0..r+1]
    int r = 0;
    EpsilonTuple eps;

    Mat coeff(int i) const;                  // zero outside [0, r]
    const Subspace& kernel_at(int i) const;  // clamped: K_j = C^n for j > r+1
};

Filtration compute_filtration(const RationalLoop& g, const TowerScalar& alpha);

enum class StepKind { Pole, Zero, Single };

struct StepRecord {
    StepKind kind = StepKind::Pole;
    TowerScalar location;
    PoleData pole_before, pole_after;
    int zero_before = 0, zero_after = 0;
    EpsilonTuple eps_before, eps_after;
    std::size_t factors_emitted = 1;
};

struct FactorizationResult {
    std::vector<SimpleElement> factors;
    std::vector<StepRecord> journal;
    /// Ordered product of the factor loops (identity when empty).
    RationalLoop product(std::size_t n) const;
};

/// Factor a negative rational loop into Table-1 elements.
FactorizationResult factor_glnc(const RationalLoop& g);
/// Factor under the real-form reality condition into Table-2 elements.
FactorizationResult factor_glnr(const RationalLoop& g);
/// Factor under the signature-(p,q) reality condition into Table-3 elements.
FactorizationResult factor_upq(const RationalLoop& g, std::size_t p, std::size_t q);

/// One reduction step on a loop with a single pole (no reality or the real
/// form): emits m_{alpha,l-s,N} and the strictly smaller remaining loop.
struct SingleStep {
    SimpleElement factor;
    RationalLoop g_prime;
};
SingleStep single_singularity_reduce(const RationalLoop& g, RealityMode mode);

}  // namespace rloop
