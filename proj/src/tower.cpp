#include "rloop/tower.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace rloop {

Rat parse_rat(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational");
    try {
        Rat r;
        if (r.set_str(s, 10) != 0) throw ParseError("bad rational: " + s);
        r.canonicalize();
        if (r.get_den() < 0) throw ParseError("negative denominator: " + s);
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational: " + s);
    }
}

std::string rat_to_string(const Rat& r) {
    return r.get_str();
}

TowerRef trivial_tower() {
    static const TowerRef t = std::make_shared<TowerData>();
    return t;
}

TowerScalar::TowerScalar(TowerRef tower, std::vector<Gauss> coords)
    : tower_(std::move(tower)), coords_(std::move(coords)) {
    assert(coords_.size() == (std::size_t{1} << tower_->radicands.size()));
}

bool TowerScalar::is_zero() const {
    for (const auto& c : coords_)
        if (!c.is_zero()) return false;
    return true;
}

bool TowerScalar::is_rational() const {
    if (!coords_[0].is_real()) return false;
    for (std::size_t s = 1; s < coords_.size(); ++s)
        if (!coords_[s].is_zero()) return false;
    return true;
}

bool TowerScalar::is_real() const {
    for (const auto& c : coords_)
        if (!c.is_real()) return false;
    return true;
}

bool TowerScalar::is_gaussian() const {
    for (std::size_t s = 1; s < coords_.size(); ++s)
        if (!coords_[s].is_zero()) return false;
    return true;
}

Rat TowerScalar::rational_value() const {
    if (!is_rational()) throw Error(ErrorClass::Validation, "scalar is not rational");
    return coords_[0].re;
}

Gauss TowerScalar::gaussian_value() const {
    if (!is_gaussian()) throw Error(ErrorClass::Validation, "scalar is not Gaussian rational");
    return coords_[0];
}

TowerScalar TowerScalar::conj() const {
    std::vector<Gauss> c(coords_.size());
    for (std::size_t s = 0; s < coords_.size(); ++s) c[s] = coords_[s].conj();
    return TowerScalar(tower_, std::move(c));
}

TowerScalar TowerScalar::real_part() const {
    std::vector<Gauss> c(coords_.size());
    for (std::size_t s = 0; s < coords_.size(); ++s) c[s] = Gauss(coords_[s].re);
    return TowerScalar(tower_, std::move(c));
}

TowerScalar TowerScalar::imag_part() const {
    std::vector<Gauss> c(coords_.size());
    for (std::size_t s = 0; s < coords_.size(); ++s) c[s] = Gauss(coords_[s].im);
    return TowerScalar(tower_, std::move(c));
}

TowerScalar TowerScalar::operator-() const {
    std::vector<Gauss> c(coords_.size());
    for (std::size_t s = 0; s < coords_.size(); ++s) c[s] = -coords_[s];
    return TowerScalar(tower_, std::move(c));
}

TowerScalar TowerScalar::operator+(const TowerScalar& o) const {
    if (tower_ == o.tower_ || *tower_ == *o.tower_) {
        TowerScalar a = *this;
        for (std::size_t s = 0; s < a.coords_.size(); ++s)
            a.coords_[s] = a.coords_[s] + o.coords_[s];
        return a;
    }
    TowerScalar a = *this, b = o;
    align(a, b);
    for (std::size_t s = 0; s < a.coords_.size(); ++s) a.coords_[s] = a.coords_[s] + b.coords_[s];
    return a;
}

TowerScalar TowerScalar::operator-(const TowerScalar& o) const {
    if (tower_ == o.tower_ || *tower_ == *o.tower_) {
        TowerScalar a = *this;
        for (std::size_t s = 0; s < a.coords_.size(); ++s)
            a.coords_[s] = a.coords_[s] - o.coords_[s];
        return a;
    }
    return *this + (-o);
}

TowerScalar TowerScalar::operator*(const TowerScalar& o) const {
    if (tower_->radicands.empty() && o.tower_->radicands.empty())
        return TowerScalar(coords_[0] * o.coords_[0]);
    TowerScalar a = *this, b = o;
    align(a, b);
    const auto& rads = a.tower_->radicands;
    std::vector<Gauss> out(a.coords_.size());
    for (std::size_t s = 0; s < a.coords_.size(); ++s) {
        if (a.coords_[s].is_zero()) continue;
        for (std::size_t t = 0; t < b.coords_.size(); ++t) {
            if (b.coords_[t].is_zero()) continue;
            std::size_t both = s & t;
            Int scale = 1;
            for (std::size_t k = 0; both >> k; ++k)
                if ((both >> k) & 1) scale *= rads[k];
            Gauss term = a.coords_[s] * b.coords_[t];
            if (scale != 1) term = term * Gauss(Rat(scale));
            out[s ^ t] = out[s ^ t] + term;
        }
    }
    return TowerScalar(a.tower_, std::move(out));
}

namespace {

// Inversion on raw coordinate vectors over the radicand list prefix.
std::vector<Gauss> inv_rec(const std::vector<Int>& rads, std::size_t levels,
                           const std::vector<Gauss>& c) {
    if (levels == 0) {
        return {c[0].inv()};
    }
    std::size_t half = std::size_t{1} << (levels - 1);
    std::vector<Gauss> u(c.begin(), c.begin() + half), v(c.begin() + half, c.end());
    bool vzero = true;
    for (const auto& g : v)
        if (!g.is_zero()) { vzero = false; break; }
    // x = u + v*sqrt(r); 1/x = (u - v*sqrt(r)) / (u^2 - v^2 r).
    auto mul_sub = [&](const std::vector<Gauss>& a, const std::vector<Gauss>& b) {
        std::vector<Gauss> out(half);
        for (std::size_t s = 0; s < half; ++s) {
            if (a[s].is_zero()) continue;
            for (std::size_t t = 0; t < half; ++t) {
                if (b[t].is_zero()) continue;
                std::size_t both = s & t;
                Int scale = 1;
                for (std::size_t k = 0; both >> k; ++k)
                    if ((both >> k) & 1) scale *= rads[k];
                Gauss term = a[s] * b[t];
                if (scale != 1) term = term * Gauss(Rat(scale));
                out[s ^ t] = out[s ^ t] + term;
            }
        }
        return out;
    };
    if (vzero) {
        std::vector<Gauss> ui = inv_rec(rads, levels - 1, u);
        ui.resize(2 * half);
        return ui;
    }
    std::vector<Gauss> u2 = mul_sub(u, u), v2 = mul_sub(v, v);
    Gauss rcoef{Rat(rads[levels - 1])};
    std::vector<Gauss> w(half);
    bool wzero = true;
    for (std::size_t s = 0; s < half; ++s) {
        w[s] = u2[s] - v2[s] * rcoef;
        if (!w[s].is_zero()) wzero = false;
    }
    if (wzero) throw DivisionByZero("inversion hit a dependent radical; tower is corrupted");
    std::vector<Gauss> wi = inv_rec(rads, levels - 1, w);
    std::vector<Gauss> top(2 * half);
    std::vector<Gauss> lo = mul_sub(u, wi), hi = mul_sub(v, wi);
    for (std::size_t s = 0; s < half; ++s) {
        top[s] = lo[s];
        top[half + s] = -hi[s];
    }
    return top;
}

}  // namespace

TowerScalar TowerScalar::inv() const {
    if (is_zero()) throw DivisionByZero();
    return TowerScalar(tower_, inv_rec(tower_->radicands, tower_->radicands.size(), coords_));
}

TowerScalar TowerScalar::operator/(const TowerScalar& o) const { return *this * o.inv(); }

namespace {

struct RatInterval {
    Rat lo, hi;
};

RatInterval mul_pos(const RatInterval& a, const RatInterval& b) {
    return {a.lo * b.lo, a.hi * b.hi};  // both nonnegative
}

}  // namespace

int TowerScalar::sign() const {
    if (!is_real()) throw Error(ErrorClass::Validation, "sign of a non-real scalar");
    if (is_zero()) return 0;
    const auto& rads = tower_->radicands;
    std::size_t m = rads.size();
    // Interval enclosures of each sqrt(r_k), refined by bisection as needed.
    std::vector<RatInterval> root(m);
    for (std::size_t k = 0; k < m; ++k) {
        Int s;
        mpz_sqrt(s.get_mpz_t(), rads[k].get_mpz_t());
        root[k] = {Rat(s), Rat(s + 1)};
    }
    for (int round = 0; round < 128; ++round) {
        RatInterval acc{Rat(0), Rat(0)};
        for (std::size_t s = 0; s < coords_.size(); ++s) {
            const Rat& c = coords_[s].re;
            if (c == 0) continue;
            RatInterval mono{Rat(1), Rat(1)};
            for (std::size_t k = 0; s >> k; ++k)
                if ((s >> k) & 1) mono = mul_pos(mono, root[k]);
            if (c > 0) {
                acc.lo += c * mono.lo;
                acc.hi += c * mono.hi;
            } else {
                acc.lo += c * mono.hi;
                acc.hi += c * mono.lo;
            }
        }
        if (acc.lo > 0) return 1;
        if (acc.hi < 0) return -1;
        for (std::size_t k = 0; k < m; ++k) {
            for (int step = 0; step < 2; ++step) {
                Rat mid = (root[k].lo + root[k].hi) / 2;
                if (mid * mid >= Rat(rads[k]))
                    root[k].hi = mid;
                else
                    root[k].lo = mid;
            }
        }
    }
    throw Error(ErrorClass::Validation, "sign refinement did not converge");
}

TowerScalar TowerScalar::minimized() const {
    std::size_t used = 0;
    for (std::size_t s = 0; s < coords_.size(); ++s)
        if (!coords_[s].is_zero()) used |= s;
    std::size_t m = tower_->radicands.size();
    std::size_t full = (std::size_t{1} << m) - 1;
    if (used == full) return *this;
    auto data = std::make_shared<TowerData>();
    std::vector<std::size_t> bits;
    for (std::size_t k = 0; k < m; ++k)
        if ((used >> k) & 1) {
            data->radicands.push_back(tower_->radicands[k]);
            bits.push_back(k);
        }
    std::vector<Gauss> c(std::size_t{1} << bits.size());
    for (std::size_t s = 0; s < coords_.size(); ++s) {
        if (coords_[s].is_zero()) continue;
        std::size_t packed = 0;
        for (std::size_t j = 0; j < bits.size(); ++j)
            if ((s >> bits[j]) & 1) packed |= std::size_t{1} << j;
        c[packed] = coords_[s];
    }
    return TowerScalar(bits.empty() ? trivial_tower() : TowerRef(std::move(data)), std::move(c));
}

int TowerScalar::cmp(const TowerScalar& a0, const TowerScalar& b0) {
    TowerScalar a = a0.minimized(), b = b0.minimized();
    const auto& ra = a.tower_->radicands;
    const auto& rb = b.tower_->radicands;
    if (ra.size() != rb.size()) return ra.size() < rb.size() ? -1 : 1;
    for (std::size_t k = 0; k < ra.size(); ++k)
        if (int c = ::cmp(ra[k], rb[k]); c != 0) return c < 0 ? -1 : 1;
    for (std::size_t s = 0; s < a.coords_.size(); ++s) {
        if (int c = ::cmp(a.coords_[s].re, b.coords_[s].re); c != 0) return c < 0 ? -1 : 1;
        if (int c = ::cmp(a.coords_[s].im, b.coords_[s].im); c != 0) return c < 0 ? -1 : 1;
    }
    return 0;
}

std::string TowerScalar::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t s = 0; s < coords_.size(); ++s) {
        if (coords_[s].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << coords_[s].re.get_str();
        if (coords_[s].im != 0) os << (coords_[s].im > 0 ? "+" : "") << coords_[s].im.get_str() << "i";
        os << ")";
        for (std::size_t k = 0; s >> k; ++k)
            if ((s >> k) & 1) os << "*sqrt(" << tower_->radicands[k].get_str() << ")";
    }
    if (first) os << "0";
    return os.str();
}

int value_cmp(const TowerScalar& a, const TowerScalar& b) {
    TowerScalar d = a - b;
    if (d.is_zero()) return 0;
    int s = d.real_part().sign();
    if (s != 0) return s;
    return d.imag_part().sign();
}

namespace {

bool subset_square(const std::vector<Int>& rads, const Int& r, std::size_t* mask_out, Int* root_out) {
    std::size_t m = rads.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        Int prod = r;
        for (std::size_t k = 0; k < m; ++k)
            if ((mask >> k) & 1) prod *= rads[k];
        if (mpz_perfect_square_p(prod.get_mpz_t())) {
            Int s;
            mpz_sqrt(s.get_mpz_t(), prod.get_mpz_t());
            *mask_out = mask;
            *root_out = s;
            return true;
        }
    }
    return false;
}

// sqrt(q) for positive rational q as (coeff, integer radicand d): sqrt(q) = coeff * sqrt(d),
// d squarefree up to a trial-division bound, d = 1 when q is a perfect square.
void reduce_radicand(const Rat& q, Rat* coeff, Int* d) {
    Int a = q.get_num(), b = q.get_den();
    Int m = a * b;
    Int s = 1;
    if (mpz_perfect_square_p(m.get_mpz_t())) {
        Int r;
        mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
        *coeff = Rat(r) / Rat(b);
        *d = 1;
        return;
    }
    for (Int p = 2; p * p <= m && p < 100000; ++p) {
        Int pp = p * p;
        while (mpz_divisible_p(m.get_mpz_t(), pp.get_mpz_t())) {
            m /= pp;
            s *= p;
        }
    }
    if (mpz_perfect_square_p(m.get_mpz_t())) {
        Int r;
        mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
        s *= r;
        m = 1;
    }
    *coeff = Rat(s) / Rat(b);
    *d = m;
}

}  // namespace

TowerRef merge_towers(const TowerRef& a, const TowerRef& b) {
    if (*a == *b || b->radicands.empty()) return a;
    if (a->radicands.empty()) return b;
    std::vector<Int> rads = a->radicands;
    for (const Int& r : b->radicands) {
        std::size_t mask;
        Int root;
        if (!subset_square(rads, r, &mask, &root)) {
            rads.insert(std::upper_bound(rads.begin(), rads.end(), r), r);
        }
    }
    auto data = std::make_shared<TowerData>();
    data->radicands = std::move(rads);
    return data;
}

TowerScalar embed(const TowerScalar& x, const TowerRef& target) {
    if (*x.tower() == *target) return TowerScalar(target, x.coords());
    const auto& src = x.tower()->radicands;
    const auto& dst = target->radicands;
    // Expansion of each source radical in the target basis: sqrt(r) = coeff * mono(mask).
    std::vector<std::pair<Rat, std::size_t>> rules(src.size());
    for (std::size_t k = 0; k < src.size(); ++k) {
        auto it = std::find(dst.begin(), dst.end(), src[k]);
        if (it != dst.end()) {
            rules[k] = {Rat(1), std::size_t{1} << (it - dst.begin())};
            continue;
        }
        std::size_t mask;
        Int root;
        if (!subset_square(dst, src[k], &mask, &root))
            throw Error(ErrorClass::Validation, "embed: target tower does not contain source");
        Int denom = 1;
        for (std::size_t j = 0; j < dst.size(); ++j)
            if ((mask >> j) & 1) denom *= dst[j];
        rules[k] = {make_rat(root, denom), mask};
    }
    std::vector<Gauss> out(std::size_t{1} << dst.size());
    for (std::size_t s = 0; s < x.coords().size(); ++s) {
        if (x.coords()[s].is_zero()) continue;
        Gauss c = x.coords()[s];
        std::size_t mask = 0;
        for (std::size_t k = 0; s >> k; ++k) {
            if (!((s >> k) & 1)) continue;
            c = c * Gauss(rules[k].first);
            std::size_t overlap = mask & rules[k].second;
            Int scale = 1;
            for (std::size_t j = 0; overlap >> j; ++j)
                if ((overlap >> j) & 1) scale *= dst[j];
            if (scale != 1) c = c * Gauss(Rat(scale));
            mask ^= rules[k].second;
        }
        out[mask] = out[mask] + c;
    }
    return TowerScalar(target, std::move(out));
}

void align(TowerScalar& a, TowerScalar& b) {
    if (a.tower() == b.tower() || *a.tower() == *b.tower()) return;
    TowerRef merged = merge_towers(a.tower(), b.tower());
    a = embed(a, merged);
    b = embed(b, merged);
}

namespace {

// Split a coordinate vector over `levels` radicals into (low, high) halves:
// x = lo + hi * sqrt(r_top).
TowerScalar prefix_scalar(const std::vector<Int>& rads, std::size_t levels,
                          std::vector<Gauss> coords) {
    if (levels == 0) return TowerScalar(coords[0]);
    auto data = std::make_shared<TowerData>();
    data->radicands.assign(rads.begin(), rads.begin() + levels);
    return TowerScalar(TowerRef(std::move(data)), std::move(coords));
}

bool gauss_square_root(const Gauss& q, Gauss* root) {
    auto rat_sqrt = [](const Rat& r, Rat* out) {
        if (r < 0) return false;
        Int n = r.get_num(), d = r.get_den();
        if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
            return false;
        Int sn, sd;
        mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
        *out = make_rat(sn, sd);
        return true;
    };
    if (q.im == 0) {
        Rat s;
        if (q.re >= 0) {
            if (!rat_sqrt(q.re, &s)) return false;
            *root = Gauss(s);
            return true;
        }
        if (!rat_sqrt(-q.re, &s)) return false;
        *root = Gauss(Rat(0), s);
        return true;
    }
    // (u + vi)^2 = q: u^2 = (re + |q|)/2, v = im / (2u).
    Rat nrm = q.norm(), len;
    if (!rat_sqrt(nrm, &len)) return false;
    Rat u2 = (q.re + len) / 2, u;
    if (!rat_sqrt(u2, &u) || u == 0) return false;
    Rat v = q.im / (2 * u);
    *root = Gauss(u, v);
    return true;
}

bool square_root_rec(const std::vector<Int>& rads, std::size_t levels,
                     const std::vector<Gauss>& coords, std::vector<Gauss>* root) {
    if (levels == 0) {
        Gauss g;
        if (!gauss_square_root(coords[0], &g)) return false;
        *root = {g};
        return true;
    }
    std::size_t half = std::size_t{1} << (levels - 1);
    std::vector<Gauss> A(coords.begin(), coords.begin() + half),
        B(coords.begin() + half, coords.end());
    bool bzero = true;
    for (const auto& g : B)
        if (!g.is_zero()) { bzero = false; break; }
    TowerScalar a = prefix_scalar(rads, levels - 1, A);
    Rat rtop(rads[levels - 1]);
    if (bzero) {
        // Either root lives in the subtower, or root = v*sqrt(r) with v^2 = A/r.
        std::vector<Gauss> sub;
        if (square_root_rec(rads, levels - 1, A, &sub)) {
            sub.resize(2 * half);
            *root = std::move(sub);
            return true;
        }
        TowerScalar over = a / TowerScalar(rtop);
        if (square_root_rec(rads, levels - 1, over.coords(), &sub)) {
            std::vector<Gauss> out(2 * half);
            for (std::size_t s = 0; s < half; ++s) out[half + s] = sub[s];
            *root = std::move(out);
            return true;
        }
        return false;
    }
    TowerScalar b = prefix_scalar(rads, levels - 1, B);
    // (u + v sqrt r)^2 = A + B sqrt r: u^2 = (A +- sqrt(A^2 - B^2 r))/2, v = B/(2u).
    TowerScalar disc = a * a - b * b * TowerScalar(rtop);
    std::vector<Gauss> e;
    if (!square_root_rec(rads, levels - 1, disc.coords(), &e)) return false;
    TowerScalar E = prefix_scalar(rads, levels - 1, e);
    for (int sign = 0; sign < 2; ++sign) {
        TowerScalar c = (a + (sign ? -E : E)) / TowerScalar(Rat(2));
        std::vector<Gauss> u;
        if (!square_root_rec(rads, levels - 1, c.coords(), &u)) continue;
        TowerScalar U = prefix_scalar(rads, levels - 1, u);
        if (U.is_zero()) continue;
        TowerScalar V = b / (TowerScalar(Rat(2)) * U);
        std::vector<Gauss> out(2 * half);
        for (std::size_t s = 0; s < half; ++s) {
            out[s] = U.coords()[s];
            out[half + s] = V.coords()[s];
        }
        // Guard against branch mix-ups.
        TowerScalar cand = prefix_scalar(rads, levels, out);
        TowerScalar orig = prefix_scalar(rads, levels, coords);
        if (cand * cand == orig) {
            *root = std::move(out);
            return true;
        }
    }
    return false;
}

}  // namespace

bool perfect_square_in_tower(const TowerScalar& x, TowerScalar* root) {
    std::vector<Gauss> r;
    if (!square_root_rec(x.tower()->radicands, x.tower()->radicands.size(), x.coords(), &r))
        return false;
    *root = TowerScalar(x.tower(), std::move(r));
    return true;
}

std::optional<Gauss> gauss_norm_point(const Rat& rho) {
    if (rho <= 0) return std::nullopt;
    // x^2 + y^2 = num*den solves |(x + i y)/den|^2 = rho; prefer the point
    // with the largest real part (rho = 1 gives z = 1).
    Int m = rho.get_num() * rho.get_den();
    if (m > 100000000) return std::nullopt;
    Int x;
    mpz_sqrt(x.get_mpz_t(), m.get_mpz_t());
    for (; x * x * 2 >= m; --x) {
        Int rest = m - x * x;
        if (mpz_perfect_square_p(rest.get_mpz_t())) {
            Int y;
            mpz_sqrt(y.get_mpz_t(), rest.get_mpz_t());
            return Gauss(make_rat(x, rho.get_den()), make_rat(y, rho.get_den()));
        }
    }
    return std::nullopt;
}

namespace {

// sqrt(a + b sqrt(d)) denests into the tower iff a^2 - b^2 d is a rational
// square; then a + b sqrt(d) = c (e + sqrt(d))^2 with rational c, e.
bool denest_single_radical(const TowerScalar& r, TowerScalar* out) {
    TowerScalar x = r.minimized();
    if (x.tower_levels() != 1) return false;
    Rat a = x.coords()[0].re, b = x.coords()[1].re;
    if (b == 0) return false;
    Int d = x.tower()->radicands[0];
    Rat norm = a * a - b * b * Rat(d);
    if (norm < 0) return false;
    Int nn = norm.get_num(), nd = norm.get_den();
    if (!mpz_perfect_square_p(nn.get_mpz_t()) || !mpz_perfect_square_p(nd.get_mpz_t()))
        return false;
    Int sn, sd;
    mpz_sqrt(sn.get_mpz_t(), nn.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), nd.get_mpz_t());
    Rat s = make_rat(sn, sd);
    for (int branch = 0; branch < 2; ++branch) {
        Rat e = (branch == 0 ? Rat(a + s) : Rat(a - s)) / b;
        std::vector<Gauss> uc(2);
        uc[0] = Gauss(e);
        uc[1] = Gauss(Rat(1));
        TowerScalar u(x.tower(), std::move(uc));
        TowerScalar usq = u * u;
        if (usq.is_zero()) continue;
        TowerScalar c = x / usq;
        if (!c.is_rational()) continue;
        Rat cv = c.rational_value();
        if (cv <= 0) continue;
        TowerScalar su = u.sign() > 0 ? u : -u;
        *out = sqrt_positive_real(TowerScalar(cv)) * su;
        return true;
    }
    return false;
}

}  // namespace

TowerScalar sqrt_positive_real(const TowerScalar& r) {
    if (!r.is_real() || r.sign() <= 0) throw NotPositiveReal();
    if (r.is_rational()) {
        Rat coeff;
        Int d;
        reduce_radicand(r.rational_value(), &coeff, &d);
        if (d == 1) return TowerScalar(coeff);
        const auto& rads = r.tower()->radicands;
        std::size_t mask;
        Int root;
        if (subset_square(rads, d, &mask, &root)) {
            Int denom = 1;
            for (std::size_t k = 0; k < rads.size(); ++k)
                if ((mask >> k) & 1) denom *= rads[k];
            std::vector<Gauss> c(std::size_t{1} << rads.size());
            c[mask] = Gauss(coeff * make_rat(root, denom));
            return TowerScalar(r.tower(), std::move(c));
        }
        auto data = std::make_shared<TowerData>();
        data->radicands = rads;
        auto pos = std::upper_bound(data->radicands.begin(), data->radicands.end(), d);
        std::size_t bit = pos - data->radicands.begin();
        data->radicands.insert(pos, d);
        TowerRef bigger(std::move(data));
        std::vector<Gauss> c(std::size_t{1} << bigger->radicands.size());
        // Old radicals keep their relative order; the new bit splits the index.
        c[std::size_t{1} << bit] = Gauss(coeff);
        return TowerScalar(bigger, std::move(c));
    }
    TowerScalar root;
    if (perfect_square_in_tower(r, &root)) {
        if (!root.is_real()) throw TowerObstruction();
        return root.sign() > 0 ? root : -root;
    }
    if (denest_single_radical(r, &root)) return root;
    // Try r = c * u^2 for a rational c taken from the coordinates.
    std::vector<Rat> candidates;
    for (const auto& g : r.coords())
        if (g.re != 0) candidates.push_back(abs(g.re));
    for (const Rat& c : candidates) {
        TowerScalar q = r / TowerScalar(c);
        TowerScalar u;
        if (perfect_square_in_tower(q, &u) && u.is_real()) {
            TowerScalar su = u.sign() > 0 ? u : -u;
            return sqrt_positive_real(TowerScalar(c)) * su;
        }
    }
    throw TowerObstruction();
}

}  // namespace rloop
