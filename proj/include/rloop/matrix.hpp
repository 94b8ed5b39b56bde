#pragma once

#include <vector>

#include "rloop/poly.hpp"
#include "rloop/tower.hpp"

namespace rloop {

/// Dense matrix over TowerScalar. Sizes stay at desk scale (n <= 6).
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, TowerScalar(0)) {}
    static Mat identity(std::size_t n);
    static Mat zero(std::size_t rows, std::size_t cols) { return Mat(rows, cols); }
    /// Column matrix from a vector.
    static Mat column(const std::vector<TowerScalar>& v);
    /// Concatenate columns of a and b.
    static Mat hcat(const Mat& a, const Mat& b);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    TowerScalar& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const TowerScalar& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::vector<TowerScalar> col(std::size_t c) const;
    void set_col(std::size_t c, const std::vector<TowerScalar>& v);

    bool is_zero() const;
    bool is_identity() const;
    bool is_real() const;

    Mat operator-() const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat operator*(const TowerScalar& s) const;
    bool operator==(const Mat& o) const;
    bool operator!=(const Mat& o) const { return !(*this == o); }

    std::vector<TowerScalar> apply(const std::vector<TowerScalar>& v) const;

    Mat transpose() const;
    Mat conj() const;
    Mat conj_transpose() const { return conj().transpose(); }

    /// Reduced row echelon form in place; returns pivot column indices.
    std::vector<std::size_t> rref();
    std::size_t rank() const;
    TowerScalar det() const;
    Mat inverse() const;

    /// Null space as columns (echelonized by caller if needed).
    Mat kernel() const;

private:
    std::size_t rows_, cols_;
    std::vector<TowerScalar> a_;
};

/// Vector helpers.
std::vector<TowerScalar> vec_add(const std::vector<TowerScalar>& a,
                                 const std::vector<TowerScalar>& b);
std::vector<TowerScalar> vec_scale(const TowerScalar& s, const std::vector<TowerScalar>& v);
bool vec_is_zero(const std::vector<TowerScalar>& v);
/// Scale by a positive rational so all rational coordinates become integers
/// with trivial common content; keeps coefficient growth in check.
std::vector<TowerScalar> vec_primitive(const std::vector<TowerScalar>& v);

/// Matrix of polynomials; the numerator side of a rational loop.
class PolyMat {
public:
    PolyMat() : n_(0) {}
    explicit PolyMat(std::size_t n) : n_(n), a_(n * n, Poly::zero()) {}
    static PolyMat identity(std::size_t n);
    static PolyMat from_scalar(const Mat& m);

    std::size_t dim() const { return n_; }
    Poly& at(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
    const Poly& at(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

    PolyMat operator+(const PolyMat& o) const;
    PolyMat operator-(const PolyMat& o) const;
    PolyMat operator*(const PolyMat& o) const;
    PolyMat operator*(const Poly& p) const;
    bool operator==(const PolyMat& o) const;

    Mat eval(const TowerScalar& x) const;
    int max_degree() const;
    /// Entrywise Taylor shift to alpha.
    PolyMat shifted(const TowerScalar& alpha) const;
    PolyMat negated_arg() const;
    PolyMat conj_coeffs() const;
    PolyMat transpose() const;

    /// Exact determinant by fraction-free Bareiss elimination.
    Poly det() const;

    /// True if every entry is divisible by (lambda - x); if so divide all.
    bool divide_all_by_root(const TowerScalar& x);

private:
    std::size_t n_;
    std::vector<Poly> a_;
};

}  // namespace rloop
