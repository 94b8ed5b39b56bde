#pragma once

#include <random>

#include "rloop/factorizer.hpp"

namespace rloop::testing {

using Rng = std::mt19937_64;

inline Rat random_rat(Rng& rng, int num_range = 6, int den_range = 3) {
    std::uniform_int_distribution<int> num(-num_range, num_range);
    std::uniform_int_distribution<int> den(1, den_range);
    return make_rat(num(rng), den(rng));
}

inline Gauss random_gauss(Rng& rng, int range = 6) {
    return Gauss(random_rat(rng, range), random_rat(rng, range));
}

inline TowerScalar random_scalar(Rng& rng, int range = 6) {
    return TowerScalar(random_gauss(rng, range));
}

inline TowerScalar random_nonzero_scalar(Rng& rng, int range = 6) {
    for (;;) {
        TowerScalar x = random_scalar(rng, range);
        if (!x.is_zero()) return x;
    }
}

/// Scalar possibly carrying a square root of 2, 3 or 5.
inline TowerScalar random_tower_scalar(Rng& rng) {
    TowerScalar base = random_scalar(rng, 4);
    std::uniform_int_distribution<int> pick(0, 3);
    int r = pick(rng);
    if (r == 0) return base;
    TowerScalar root = sqrt_positive_real(TowerScalar(Rat(r == 1 ? 2 : r == 2 ? 3 : 5)));
    return base + root * random_scalar(rng, 3);
}

inline Mat random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int range = 4) {
    Mat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = random_scalar(rng, range);
    return m;
}

inline Mat random_invertible(Rng& rng, std::size_t n, int range = 4) {
    for (;;) {
        Mat m = random_matrix(rng, n, n, range);
        if (!m.det().is_zero()) return m;
    }
}

inline Mat random_real_matrix(Rng& rng, std::size_t rows, std::size_t cols, int range = 4) {
    Mat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = TowerScalar(random_rat(rng, range));
    return m;
}

/// Random rank-one two-step nilpotent: N = u w^T with w^T u = 0.
inline Mat random_nilpotent(Rng& rng, std::size_t n, bool real_entries = false) {
    for (;;) {
        Mat u = real_entries ? random_real_matrix(rng, n, 1, 3) : random_matrix(rng, n, 1, 3);
        Mat w = real_entries ? random_real_matrix(rng, n, 1, 3) : random_matrix(rng, n, 1, 3);
        TowerScalar dot(0);
        for (std::size_t k = 0; k < n; ++k) dot += w.at(k, 0) * u.at(k, 0);
        if (u.is_zero() || w.is_zero()) continue;
        // Project w against u to enforce w^T u = 0: adjust one coordinate.
        std::size_t pivot = n;
        for (std::size_t k = 0; k < n; ++k)
            if (!u.at(k, 0).is_zero()) { pivot = k; break; }
        if (pivot == n) continue;
        w.at(pivot, 0) -= dot / u.at(pivot, 0);
        Mat nmat(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) nmat.at(r, c) = u.at(r, 0) * w.at(c, 0);
        if (nmat.is_zero()) continue;
        if (!(nmat * nmat).is_zero()) continue;
        return nmat;
    }
}

inline Subspace random_subspace(Rng& rng, std::size_t n, std::size_t dim) {
    for (;;) {
        Subspace s = Subspace::span(n, random_matrix(rng, n, dim, 3));
        if (s.dim() == dim) return s;
    }
}

inline std::vector<TowerScalar> to_vec(const Mat& col) {
    std::vector<TowerScalar> v(col.rows());
    for (std::size_t k = 0; k < col.rows(); ++k) v[k] = col.at(k, 0);
    return v;
}

}  // namespace rloop::testing
