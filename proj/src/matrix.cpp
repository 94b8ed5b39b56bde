#include "rloop/matrix.hpp"

namespace rloop {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t k = 0; k < n; ++k) m.at(k, k) = TowerScalar(1);
    return m;
}

Mat Mat::column(const std::vector<TowerScalar>& v) {
    Mat m(v.size(), 1);
    for (std::size_t k = 0; k < v.size(); ++k) m.at(k, 0) = v[k];
    return m;
}

Mat Mat::hcat(const Mat& a, const Mat& b) {
    if (a.rows_ == 0) return b;
    if (b.rows_ == 0) return a;
    if (a.rows_ != b.rows_) throw Error(ErrorClass::Validation, "hcat: row mismatch");
    Mat m(a.rows_, a.cols_ + b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        for (std::size_t c = 0; c < a.cols_; ++c) m.at(r, c) = a.at(r, c);
        for (std::size_t c = 0; c < b.cols_; ++c) m.at(r, a.cols_ + c) = b.at(r, c);
    }
    return m;
}

std::vector<TowerScalar> Mat::col(std::size_t c) const {
    std::vector<TowerScalar> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
    return v;
}

void Mat::set_col(std::size_t c, const std::vector<TowerScalar>& v) {
    for (std::size_t r = 0; r < rows_; ++r) at(r, c) = v[r];
}

bool Mat::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

bool Mat::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (at(r, c) != TowerScalar(r == c ? 1 : 0)) return false;
    return true;
}

bool Mat::is_real() const {
    for (const auto& x : a_)
        if (!x.is_real()) return false;
    return true;
}

Mat Mat::operator-() const {
    Mat m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = -a_[k];
    return m;
}

Mat Mat::operator+(const Mat& o) const {
    Mat m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
    return m;
}

Mat Mat::operator-(const Mat& o) const { return *this + (-o); }

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw Error(ErrorClass::Validation, "matrix product shape mismatch");
    Mat m(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            if (at(r, k).is_zero()) continue;
            for (std::size_t c = 0; c < o.cols_; ++c) m.at(r, c) += at(r, k) * o.at(k, c);
        }
    return m;
}

Mat Mat::operator*(const TowerScalar& s) const {
    Mat m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * s;
    return m;
}

bool Mat::operator==(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t k = 0; k < a_.size(); ++k)
        if (a_[k] != o.a_[k]) return false;
    return true;
}

std::vector<TowerScalar> Mat::apply(const std::vector<TowerScalar>& v) const {
    std::vector<TowerScalar> out(rows_, TowerScalar(0));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (!at(r, c).is_zero()) out[r] += at(r, c) * v[c];
    return out;
}

Mat Mat::transpose() const {
    Mat m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m.at(c, r) = at(r, c);
    return m;
}

Mat Mat::conj() const {
    Mat m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k].conj();
    return m;
}

std::vector<std::size_t> Mat::rref() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols_ && row < rows_; ++c) {
        std::size_t p = row;
        while (p < rows_ && at(p, c).is_zero()) ++p;
        if (p == rows_) continue;
        if (p != row)
            for (std::size_t j = 0; j < cols_; ++j) std::swap(at(p, j), at(row, j));
        TowerScalar inv = at(row, c).inv();
        for (std::size_t j = c; j < cols_; ++j) at(row, j) = at(row, j) * inv;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == row || at(r, c).is_zero()) continue;
            TowerScalar f = at(r, c);
            for (std::size_t j = c; j < cols_; ++j) at(r, j) -= f * at(row, j);
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

std::size_t Mat::rank() const {
    Mat copy = *this;
    return copy.rref().size();
}

TowerScalar Mat::det() const {
    if (rows_ != cols_) throw Error(ErrorClass::Validation, "det of non-square matrix");
    Mat m = *this;
    TowerScalar d(1);
    for (std::size_t c = 0; c < cols_; ++c) {
        std::size_t p = c;
        while (p < rows_ && m.at(p, c).is_zero()) ++p;
        if (p == rows_) return TowerScalar(0);
        if (p != c) {
            for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(p, j), m.at(c, j));
            d = -d;
        }
        d *= m.at(c, c);
        TowerScalar inv = m.at(c, c).inv();
        for (std::size_t r = c + 1; r < rows_; ++r) {
            if (m.at(r, c).is_zero()) continue;
            TowerScalar f = m.at(r, c) * inv;
            for (std::size_t j = c; j < cols_; ++j) m.at(r, j) -= f * m.at(c, j);
        }
    }
    return d;
}

Mat Mat::inverse() const {
    if (rows_ != cols_) throw Error(ErrorClass::Validation, "inverse of non-square matrix");
    Mat aug = hcat(*this, identity(rows_));
    auto pivots = aug.rref();
    if (pivots.size() != rows_ || (rows_ > 0 && pivots.back() >= cols_))
        throw NotWellDefined("matrix is singular");
    Mat inv(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) inv.at(r, c) = aug.at(r, cols_ + c);
    return inv;
}

Mat Mat::kernel() const {
    Mat m = *this;
    auto pivots = m.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::size_t k = cols_ - pivots.size();
    Mat ker(cols_, k);
    std::size_t idx = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
        if (is_pivot[c]) continue;
        ker.at(c, idx) = TowerScalar(1);
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            ker.at(pivots[pr], idx) = -m.at(pr, c);
        ++idx;
    }
    return ker;
}

std::vector<TowerScalar> vec_add(const std::vector<TowerScalar>& a,
                                 const std::vector<TowerScalar>& b) {
    std::vector<TowerScalar> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
    return out;
}

std::vector<TowerScalar> vec_scale(const TowerScalar& s, const std::vector<TowerScalar>& v) {
    std::vector<TowerScalar> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = s * v[k];
    return out;
}

bool vec_is_zero(const std::vector<TowerScalar>& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

std::vector<TowerScalar> vec_primitive(const std::vector<TowerScalar>& v) {
    Int num_gcd = 0, den_lcm = 1;
    for (const auto& x : v)
        for (const auto& g : x.coords()) {
            for (const Rat& r : {g.re, g.im}) {
                if (r == 0) continue;
                Int num = r.get_num();
                mpz_abs(num.get_mpz_t(), num.get_mpz_t());
                mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), num.get_mpz_t());
                mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), r.get_den_mpz_t());
            }
        }
    if (num_gcd == 0 || (num_gcd == 1 && den_lcm == 1)) return v;
    TowerScalar scale{make_rat(den_lcm, num_gcd)};
    return vec_scale(scale, v);
}

PolyMat PolyMat::identity(std::size_t n) {
    PolyMat m(n);
    for (std::size_t k = 0; k < n; ++k) m.at(k, k) = Poly::one();
    return m;
}

PolyMat PolyMat::from_scalar(const Mat& s) {
    PolyMat m(s.rows());
    for (std::size_t r = 0; r < s.rows(); ++r)
        for (std::size_t c = 0; c < s.cols(); ++c)
            if (!s.at(r, c).is_zero()) m.at(r, c) = Poly(s.at(r, c));
    return m;
}

PolyMat PolyMat::operator+(const PolyMat& o) const {
    PolyMat m(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
    return m;
}

PolyMat PolyMat::operator-(const PolyMat& o) const {
    PolyMat m(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
    return m;
}

PolyMat PolyMat::operator*(const PolyMat& o) const {
    PolyMat m(n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t k = 0; k < n_; ++k) {
            if (at(r, k).is_zero()) continue;
            for (std::size_t c = 0; c < n_; ++c) {
                if (o.at(k, c).is_zero()) continue;
                m.at(r, c) = m.at(r, c) + at(r, k) * o.at(k, c);
            }
        }
    return m;
}

PolyMat PolyMat::operator*(const Poly& p) const {
    PolyMat m(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * p;
    return m;
}

bool PolyMat::operator==(const PolyMat& o) const {
    if (n_ != o.n_) return false;
    for (std::size_t k = 0; k < a_.size(); ++k)
        if (a_[k] != o.a_[k]) return false;
    return true;
}

Mat PolyMat::eval(const TowerScalar& x) const {
    Mat m(n_, n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) m.at(r, c) = at(r, c).eval(x);
    return m;
}

int PolyMat::max_degree() const {
    int d = -1;
    for (const auto& p : a_) d = std::max(d, p.degree());
    return d;
}

PolyMat PolyMat::shifted(const TowerScalar& alpha) const {
    PolyMat m(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k].shifted(alpha);
    return m;
}

PolyMat PolyMat::negated_arg() const {
    PolyMat m(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k].negated_arg();
    return m;
}

PolyMat PolyMat::conj_coeffs() const {
    PolyMat m(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k].conj_coeffs();
    return m;
}

PolyMat PolyMat::transpose() const {
    PolyMat m(n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) m.at(c, r) = at(r, c);
    return m;
}

Poly PolyMat::det() const {
    // Bareiss fraction-free elimination over the polynomial ring.
    std::size_t n = n_;
    if (n == 0) return Poly::one();
    std::vector<Poly> w = a_;
    auto at_ = [&](std::size_t r, std::size_t c) -> Poly& { return w[r * n + c]; };
    Poly prev = Poly::one();
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (at_(k, k).is_zero()) {
            std::size_t p = k + 1;
            while (p < n && at_(p, k).is_zero()) ++p;
            if (p == n) return Poly::zero();
            for (std::size_t j = 0; j < n; ++j) std::swap(at_(k, j), at_(p, j));
            negate = !negate;
        }
        for (std::size_t r = k + 1; r < n; ++r)
            for (std::size_t c = k + 1; c < n; ++c) {
                Poly num = at_(r, c) * at_(k, k) - at_(r, k) * at_(k, c);
                at_(r, c) = num / prev;
            }
        prev = at_(k, k);
    }
    Poly d = at_(n - 1, n - 1);
    return negate ? -d : d;
}

bool PolyMat::divide_all_by_root(const TowerScalar& x) {
    for (const auto& p : a_)
        if (!p.is_zero() && !p.eval(x).is_zero()) return false;
    bool all_zero = true;
    for (const auto& p : a_)
        if (!p.is_zero()) all_zero = false;
    if (all_zero) return false;
    Poly lin = Poly::linear(x);
    for (auto& p : a_)
        if (!p.is_zero()) p = p / lin;
    return true;
}

}  // namespace rloop
