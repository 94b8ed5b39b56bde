#include "rloop/flows.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace rloop {

NumMat NumMat::identity(std::size_t n) {
    NumMat m(n, n);
    for (std::size_t k = 0; k < n; ++k) m.at(k, k) = 1.0;
    return m;
}

NumMat NumMat::diag(const std::vector<Cplx>& d) {
    NumMat m(d.size(), d.size());
    for (std::size_t k = 0; k < d.size(); ++k) m.at(k, k) = d[k];
    return m;
}

NumMat NumMat::operator+(const NumMat& o) const {
    NumMat m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
    return m;
}

NumMat NumMat::operator-(const NumMat& o) const {
    NumMat m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
    return m;
}

NumMat NumMat::operator*(const NumMat& o) const {
    NumMat m(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            Cplx v = at(r, k);
            if (v == 0.0) continue;
            for (std::size_t c = 0; c < o.cols_; ++c) m.at(r, c) += v * o.at(k, c);
        }
    return m;
}

NumMat NumMat::operator*(Cplx s) const {
    NumMat m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * s;
    return m;
}

NumMat NumMat::transpose() const {
    NumMat m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m.at(c, r) = at(r, c);
    return m;
}

Cplx NumMat::det() const {
    NumMat m = *this;
    std::size_t n = rows_;
    Cplx d = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m.at(r, c)) > std::abs(m.at(p, c))) p = r;
        if (std::abs(m.at(p, c)) == 0.0) return 0.0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(p, j), m.at(c, j));
            d = -d;
        }
        d *= m.at(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            Cplx f = m.at(r, c) / m.at(c, c);
            if (f == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) m.at(r, j) -= f * m.at(c, j);
        }
    }
    return d;
}

NumMat NumMat::inverse(bool* ok) const {
    std::size_t n = rows_;
    NumMat aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = at(r, c);
        aug.at(r, n + r) = 1.0;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(aug.at(r, c)) > std::abs(aug.at(p, c))) p = r;
        if (std::abs(aug.at(p, c)) < 1e-300) {
            if (ok) *ok = false;
            return identity(n);
        }
        if (p != c)
            for (std::size_t j = 0; j < 2 * n; ++j) std::swap(aug.at(p, j), aug.at(c, j));
        Cplx inv = 1.0 / aug.at(c, c);
        for (std::size_t j = 0; j < 2 * n; ++j) aug.at(c, j) *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            Cplx f = aug.at(r, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < 2 * n; ++j) aug.at(r, j) -= f * aug.at(c, j);
        }
    }
    NumMat out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.at(r, c) = aug.at(r, n + c);
    if (ok) *ok = true;
    return out;
}

std::vector<Cplx> NumMat::apply(const std::vector<Cplx>& v) const {
    std::vector<Cplx> out(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out[r] += at(r, c) * v[c];
    return out;
}

double NumMat::norm_inf() const {
    double m = 0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

NumMat NumMat::commutator_diag(const std::vector<double>& d, const NumMat& m) {
    NumMat out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.at(r, c) = (d[r] - d[c]) * m.at(r, c);
    return out;
}

NumMat NumMat::offdiag() const {
    NumMat out = *this;
    for (std::size_t k = 0; k < rows_; ++k) out.at(k, k) = 0.0;
    return out;
}

NumMat NumMat::tracefree() const {
    Cplx tr = 0.0;
    for (std::size_t k = 0; k < rows_; ++k) tr += at(k, k);
    NumMat out = *this;
    for (std::size_t k = 0; k < rows_; ++k) out.at(k, k) -= tr / static_cast<double>(rows_);
    return out;
}

std::size_t GridSpec::nx() const {
    return static_cast<std::size_t>(std::floor((x1 - x0) / hx + 0.5)) + 1;
}
std::size_t GridSpec::nt() const {
    return static_cast<std::size_t>(std::floor((t1 - t0) / ht + 0.5)) + 1;
}

double SolutionSurface::masked_fraction() const {
    if (!denom) return 0.0;
    std::size_t total = 0, hit = 0;
    for (std::size_t it = 0; it < grid.nt(); ++it)
        for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
            ++total;
            if (masked(grid.x(ix), grid.t(it))) ++hit;
        }
    return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

NumMat vacuum_frame(const FlowSpec& spec, double x, double t, Cplx lambda) {
    std::vector<Cplx> d(spec.n);
    Cplx lj = std::pow(lambda, spec.j);
    for (std::size_t k = 0; k < spec.n; ++k) {
        double bk = spec.b.empty() ? spec.a[k] : spec.b[k];
        d[k] = std::exp(spec.a[k] * lambda * x + bk * lj * t);
    }
    return NumMat::diag(d);
}

FrameEvaluator FrameEvaluator::zs_akns(const FlowSpec& spec, std::vector<DressStage> stages) {
    FrameEvaluator f;
    f.kind_ = Kind::ZsAkns;
    f.n_ = spec.n;
    f.spec_ = spec;
    f.stages_ = std::move(stages);
    return f;
}

FrameEvaluator FrameEvaluator::orthogonal(std::size_t n, std::vector<DressStage> stages) {
    FrameEvaluator f;
    f.kind_ = Kind::Orthogonal;
    f.n_ = n;
    f.stages_ = std::move(stages);
    return f;
}

FrameEvaluator::Jet FrameEvaluator::vacuum_jet(const std::vector<double>& xs, double t,
                                               Cplx lambda) const {
    Jet out{NumMat(n_, n_), NumMat(n_, n_)};
    if (kind_ == Kind::ZsAkns) {
        double x = xs[0];
        Cplx lj = std::pow(lambda, spec_.j);
        Cplx ljm1 = spec_.j >= 1 ? std::pow(lambda, spec_.j - 1) : Cplx(0.0);
        for (std::size_t k = 0; k < n_; ++k) {
            double bk = spec_.b.empty() ? spec_.a[k] : spec_.b[k];
            Cplx e = std::exp(spec_.a[k] * lambda * x + bk * lj * t);
            out.val.at(k, k) = e;
            out.dv.at(k, k) =
                e * (spec_.a[k] * x + bk * static_cast<double>(spec_.j) * ljm1 * t);
        }
    } else {
        for (std::size_t k = 0; k < n_; ++k) {
            Cplx e = std::exp(lambda * xs[k]);
            out.val.at(k, k) = e;
            out.dv.at(k, k) = e * xs[k];
        }
    }
    return out;
}

namespace {

// Jet of m_{alpha,1,N} at lambda (val and d/dlambda).
FrameEvaluator::Jet m_jet(double alpha, const NumMat& n, Cplx lambda) {
    Cplx inv = 1.0 / (lambda - alpha);
    return {NumMat::identity(n.rows()) + n * inv, n * (-inv * inv)};
}

FrameEvaluator::Jet product_jet(const FrameEvaluator::Jet& a, const FrameEvaluator::Jet& b) {
    return {a.val * b.val, a.dv * b.val + a.val * b.dv};
}

}  // namespace

std::vector<NumMat> FrameEvaluator::stage_nilpotents(const std::vector<double>& xs, double t,
                                                     bool* ok) const {
    *ok = true;
    std::vector<NumMat> ntildes;
    for (std::size_t s = 0; s < stages_.size(); ++s) {
        Jet j = jet(xs, t, stages_[s].alpha, ntildes, ok);
        if (!*ok) return ntildes;
        bool inv_ok = true;
        NumMat eval_inv = j.val.inverse(&inv_ok);
        if (!inv_ok) {
            *ok = false;
            return ntildes;
        }
        NumMat e1 = j.dv * eval_inv;
        NumMat core = NumMat::identity(n_) + stages_[s].N * e1;
        if (std::abs(core.det()) < 1e-12) {
            *ok = false;
            return ntildes;
        }
        NumMat core_inv = core.inverse(&inv_ok);
        if (!inv_ok) {
            *ok = false;
            return ntildes;
        }
        ntildes.push_back(eval_inv * core_inv * stages_[s].N * j.val);
    }
    return ntildes;
}

FrameEvaluator::Jet FrameEvaluator::jet(const std::vector<double>& xs, double t, Cplx lambda,
                                        const std::vector<NumMat>& ntildes, bool* ok) const {
    Jet acc = vacuum_jet(xs, t, lambda);
    for (std::size_t s = 0; s < ntildes.size() && s < stages_.size(); ++s) {
        Jet left = m_jet(stages_[s].alpha, stages_[s].N, lambda);
        // m_{alpha,1,Ntilde}^{-1} = Id - Ntilde/(lambda-alpha).
        Cplx inv = 1.0 / (lambda - stages_[s].alpha);
        Jet right{NumMat::identity(n_) - ntildes[s] * inv, ntildes[s] * (inv * inv)};
        acc = product_jet(product_jet(left, acc), right);
    }
    *ok = true;
    return acc;
}

NumMat FrameEvaluator::value(const std::vector<double>& xs, double t, Cplx lambda,
                             bool* ok) const {
    auto ntildes = stage_nilpotents(xs, t, ok);
    if (!*ok) return NumMat::identity(n_);
    Jet j = jet(xs, t, lambda, ntildes, ok);
    return j.val;
}

double FrameEvaluator::stage_denominator(const std::vector<double>& xs, double t) const {
    double dmin = 1.0;
    std::vector<NumMat> ntildes;
    for (std::size_t s = 0; s < stages_.size(); ++s) {
        bool ok = true;
        Jet j = jet(xs, t, stages_[s].alpha, ntildes, &ok);
        bool inv_ok = true;
        NumMat eval_inv = j.val.inverse(&inv_ok);
        if (!inv_ok) return 0.0;
        NumMat e1 = j.dv * eval_inv;
        NumMat core = NumMat::identity(n_) + stages_[s].N * e1;
        double d = std::abs(core.det());
        dmin = std::min(dmin, d);
        if (d < 1e-300) return 0.0;
        NumMat core_inv = core.inverse(&inv_ok);
        if (!inv_ok) return 0.0;
        ntildes.push_back(eval_inv * core_inv * stages_[s].N * j.val);
    }
    return dmin;
}

SolutionSurface dress_vacuum_closed_form(double alpha, int j, double n1, double n2, double n3,
                                         const GridSpec& grid, double mask_threshold) {
    SolutionSurface s;
    s.grid = grid;
    s.n = 2;
    s.mask_threshold = mask_threshold;
    double slope = j * std::pow(alpha, j - 1);
    s.denom = [n1, slope](double x, double t) { return 1.0 + 2.0 * n1 * (x + slope * t); };
    s.eval = [alpha, j, n1, n2, n3, slope](double x, double t) {
        double xi = x + slope * t;
        double phase = alpha * x + std::pow(alpha, j) * t;
        double pref = 2.0 / (1.0 + 2.0 * n1 * xi);
        NumMat u(2, 2);
        u.at(0, 1) = -pref * n2 * std::exp(-2.0 * phase);
        u.at(1, 0) = pref * n3 * std::exp(2.0 * phase);
        return u;
    };
    return s;
}

SolutionSurface dress_chain_numeric(const std::vector<DressStage>& chain, const FlowSpec& spec,
                                    const GridSpec& grid, double mask_threshold) {
    auto frame = std::make_shared<FrameEvaluator>(FrameEvaluator::zs_akns(spec, chain));
    SolutionSurface s;
    s.grid = grid;
    s.n = spec.n;
    s.mask_threshold = mask_threshold;
    FlowSpec sp = spec;
    s.eval = [frame, sp](double x, double t) {
        bool ok = true;
        auto ntildes = frame->stage_nilpotents({x}, t, &ok);
        NumMat u(sp.n, sp.n);
        if (!ok) return u;
        for (const auto& nt : ntildes) u = u - NumMat::commutator_diag(sp.a, nt);
        return u;
    };
    s.denom = [frame](double x, double t) { return frame->stage_denominator({x}, t); };
    return s;
}

SolutionSurface mkdv_closed_form(double alpha, double n1, double n2, double n3,
                                 const GridSpec& grid, double mask_threshold) {
    SolutionSurface s;
    s.grid = grid;
    s.n = 2;
    s.mask_threshold = mask_threshold;
    double a = alpha, a3 = alpha * alpha * alpha;
    auto bigA = [n1, a, a3](double x, double t) {
        return 16.0 * n1 * a * x + 48.0 * n1 * a3 * t + 8.0 * a;
    };
    auto bigB = [n1, a, a3](double x, double t) {
        double a2 = a * a, a4 = a2 * a2, a6 = a4 * a2;
        return 16.0 * a2 * n1 * n1 * x * x + 96.0 * a4 * n1 * n1 * x * t + 16.0 * a2 * n1 * x +
               48.0 * a4 * n1 * t + 144.0 * a6 * n1 * n1 * t * t + 4.0 * a2 + 2.0 * n1 * n1;
    };
    auto den = [n2, n3, a, a3, bigB](double x, double t) {
        double e4 = std::exp(4.0 * a * x + 4.0 * a3 * t);
        return n3 * n3 * e4 * e4 + bigB(x, t) * e4 + n2 * n2;
    };
    s.denom = den;
    s.eval = [n1, n2, n3, a, a3, bigA, den](double x, double t) {
        double e2 = std::exp(2.0 * a * x + 2.0 * a3 * t);
        double e4 = e2 * e2;
        double A = bigA(x, t);
        double q = -a * e2 * ((A - 8.0 * n1) * n3 * e4 + (A + 8.0 * n1) * n2) / den(x, t);
        NumMat u(2, 2);
        u.at(0, 1) = q;
        u.at(1, 0) = -q;
        return u;
    };
    return s;
}

SolutionSurface third_flow_order2(double n1, double n2, double n3, const GridSpec& grid,
                                  double mask_threshold) {
    SolutionSurface s;
    s.grid = grid;
    s.n = 2;
    s.mask_threshold = mask_threshold;
    auto den = [n1](double x, double t) {
        return 4.0 * n1 * n1 * std::pow(x, 4) - 12.0 * n1 * n1 * x * t + 3.0;
    };
    s.denom = den;
    s.eval = [n1, n2, n3, den](double x, double t) {
        double pref = 4.0 / den(x, t);
        NumMat u(2, 2);
        u.at(0, 1) = pref * n2 * (2.0 * n1 * x * x * x + 3.0 * x + 3.0 * n1 * t);
        u.at(1, 0) = -pref * n3 * (2.0 * n1 * x * x * x - 3.0 * x + 3.0 * n1 * t);
        return u;
    };
    return s;
}

namespace {

struct Stencil {
    int half;
    std::vector<double> d1, d3;  // coefficients over offsets [-half..half]
};

Stencil make_stencil(int order) {
    if (order <= 2) return {2, {0, -0.5, 0, 0.5, 0}, {-0.5, 1.0, 0, -1.0, 0.5}};
    if (order <= 4)
        return {3,
                {0, 1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12, 0},
                {1.0 / 8, -8.0 / 8, 13.0 / 8, 0, -13.0 / 8, 8.0 / 8, -1.0 / 8}};
    return {4,
            {0, -1.0 / 60, 9.0 / 60, -45.0 / 60, 0, 45.0 / 60, -9.0 / 60, 1.0 / 60, 0},
            {-7.0 / 240, 72.0 / 240, -338.0 / 240, 488.0 / 240, 0, -488.0 / 240, 338.0 / 240,
             -72.0 / 240, 7.0 / 240}};
}

}  // namespace

ResidualReport pde_residual(const SolutionSurface& surface, FlowKind flow, double h,
                            int accuracy_order) {
    Stencil st = make_stencil(accuracy_order);
    const GridSpec& g = surface.grid;
    std::size_t nx = static_cast<std::size_t>(std::floor((g.x1 - g.x0) / h + 0.5)) + 1;
    std::size_t nt = static_cast<std::size_t>(std::floor((g.t1 - g.t0) / h + 0.5)) + 1;
    int half = st.half;
    if (static_cast<int>(nx) < 2 * half + 1 || static_cast<int>(nt) < 2 * half + 1)
        throw GridTooCoarse();

    // Row ring buffer of sampled q (and r for the coupled flow).
    std::size_t rows = 2 * half + 1;
    std::vector<std::vector<double>> bq(rows, std::vector<double>(nx)),
        br(rows, std::vector<double>(nx));
    std::vector<std::vector<unsigned char>> bm(rows, std::vector<unsigned char>(nx));
    auto fill_row = [&](std::size_t slot, std::size_t it) {
        double t = g.t0 + static_cast<double>(it) * h;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            double x = g.x0 + static_cast<double>(ix) * h;
            if (surface.masked(x, t)) {
                bm[slot][ix] = 1;
                bq[slot][ix] = br[slot][ix] = 0;
                continue;
            }
            bm[slot][ix] = 0;
            NumMat u = surface.eval(x, t);
            bq[slot][ix] = u.at(0, 1).real();
            br[slot][ix] = u.at(1, 0).real();
        }
    };
    for (std::size_t k = 0; k < rows; ++k) fill_row(k, k);

    double h3 = h * h * h;
    double max_res = 0;
    std::size_t total = 0, masked = 0;
    for (std::size_t it = half; it + half < nt; ++it) {
        std::size_t center = it % rows;
        for (std::size_t ix = half; ix + half < nx; ++ix) {
            ++total;
            bool bad = false;
            for (int o = -half; o <= half && !bad; ++o) {
                if (bm[(it + rows + o) % rows][ix]) bad = true;
                if (bm[center][ix + o]) bad = true;
            }
            if (bad) {
                ++masked;
                continue;
            }
            auto dx1 = [&](const std::vector<std::vector<double>>& b) {
                double acc = 0;
                for (int o = -half; o <= half; ++o)
                    acc += st.d1[o + half] * b[center][ix + o];
                return acc / h;
            };
            auto dx3 = [&](const std::vector<std::vector<double>>& b) {
                double acc = 0;
                for (int o = -half; o <= half; ++o)
                    acc += st.d3[o + half] * b[center][ix + o];
                return acc / h3;
            };
            auto dt1 = [&](const std::vector<std::vector<double>>& b) {
                double acc = 0;
                for (int o = -half; o <= half; ++o)
                    acc += st.d1[o + half] * b[(it + rows + o) % rows][ix];
                return acc / h;
            };
            double q = bq[center][ix];
            double res = 0;
            switch (flow) {
                case FlowKind::TranslationJ1:
                    res = std::abs(dt1(bq) - dx1(bq));
                    res = std::max(res, std::abs(dt1(br) - dx1(br)));
                    break;
                case FlowKind::Mkdv:
                    res = std::abs(dt1(bq) - 0.25 * (dx3(bq) + 6.0 * q * q * dx1(bq)));
                    break;
                case FlowKind::ThirdCoupled: {
                    double r = br[center][ix];
                    double res_q = dt1(bq) - 0.25 * (dx3(bq) - 6.0 * q * r * dx1(bq));
                    double res_r = dt1(br) - 0.25 * (dx3(br) - 6.0 * q * r * dx1(br));
                    res = std::max(std::abs(res_q), std::abs(res_r));
                    break;
                }
            }
            max_res = std::max(max_res, res);
        }
        if (it + half + 1 < nt) fill_row((it + half + 1) % rows, it + half + 1);
    }
    ResidualReport rep;
    rep.flow = flow == FlowKind::TranslationJ1 ? "translation_j1"
               : flow == FlowKind::Mkdv        ? "mkdv"
                                               : "third_coupled";
    rep.h = h;
    rep.max_residual = max_res;
    rep.masked_fraction = total ? static_cast<double>(masked) / static_cast<double>(total) : 0.0;
    return rep;
}

GlnOnSolution gln_on_dress(std::size_t n, double alpha, const NumMat& nilpotent) {
    // N' from the twisted-pair formula in double precision.
    NumMat id = NumMat::identity(n);
    NumMat nt = nilpotent.transpose();
    double inv2a = 1.0 / (2.0 * alpha);
    bool ok = true;
    NumMat core = (id + (nt * nilpotent) * (inv2a * inv2a)).inverse(&ok);
    if (!ok) throw NotWellDefined("Id + N^t N/(4 alpha^2) is singular");
    NumMat nprime = (id - nilpotent * inv2a) * core * nt * (id + nilpotent * inv2a);

    GlnOnSolution sol{
        n, alpha, nilpotent, nprime,
        FrameEvaluator::orthogonal(n, {{alpha, nilpotent}, {-alpha, nprime}})};
    return sol;
}

NumMat GlnOnSolution::beta_hat(const std::vector<double>& xs, bool* ok) const {
    auto ntildes = frame.stage_nilpotents(xs, 0.0, ok);
    if (!*ok) return NumMat(n, n);
    NumMat sum(n, n);
    for (const auto& m : ntildes) sum = sum + m;
    return (sum * Cplx(-1.0)).offdiag();
}

NumMat GlnOnSolution::beta_hat_trace(const std::vector<double>& xs, bool* ok) const {
    auto ntildes = frame.stage_nilpotents(xs, 0.0, ok);
    if (!*ok) return NumMat(n, n);
    NumMat sum(n, n);
    for (const auto& m : ntildes) sum = sum + m;
    return (sum * Cplx(-1.0)).tracefree();
}

NumMat GlnOnSolution::frame_value(const std::vector<double>& xs, Cplx lambda, bool* ok) const {
    return frame.value(xs, 0.0, lambda, ok);
}

namespace {

void walk_anchors(std::size_t n, double lo, double hi, double step,
                  const std::function<void(const std::vector<double>&)>& fn) {
    std::vector<double> xs(n, lo);
    while (true) {
        fn(xs);
        std::size_t k = 0;
        while (k < n) {
            xs[k] += step;
            if (xs[k] <= hi + 1e-12) break;
            xs[k] = lo;
            ++k;
        }
        if (k == n) break;
    }
}

}  // namespace

double gln_on_system_residual(const GlnOnSolution& sol, double anchor, double h) {
    Stencil st = make_stencil(4);
    int half = st.half;
    std::size_t n = sol.n;
    double max_res = 0;
    walk_anchors(n, -1.0, 1.0, anchor, [&](const std::vector<double>& xs) {
        // beta at the stencil points along each axis.
        bool ok = true;
        NumMat b0 = sol.beta_hat(xs, &ok);
        if (!ok) return;
        std::vector<std::vector<NumMat>> line(n);
        for (std::size_t ax = 0; ax < n; ++ax) {
            line[ax].resize(2 * half + 1);
            for (int o = -half; o <= half; ++o) {
                std::vector<double> p = xs;
                p[ax] += o * h;
                bool pok = true;
                line[ax][o + half] = sol.beta_hat(p, &pok);
                if (!pok) { ok = false; return; }
            }
        }
        auto deriv = [&](std::size_t i, std::size_t j, std::size_t ax) {
            double acc_re = 0;
            for (int o = -half; o <= half; ++o)
                acc_re += st.d1[o + half] * line[ax][o + half].at(i, j).real();
            return acc_re / h;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == i || k == j) continue;
                    double lhs = deriv(i, j, k);
                    double rhs = (b0.at(i, k) * b0.at(k, j)).real();
                    max_res = std::max(max_res, std::abs(lhs - rhs));
                }
                double sum = deriv(i, j, i) + deriv(i, j, j);
                for (std::size_t k = 0; k < n; ++k)
                    sum += (b0.at(i, k) * b0.at(k, j)).real();
                max_res = std::max(max_res, std::abs(sum));
            }
    });
    return max_res;
}

EgoroffData egoroff_reconstruct(const GlnOnSolution& sol, const std::vector<double>& c,
                                const std::vector<double>& xs, double lambda, bool* ok) {
    // h(x) solves E(x,0) h(x) = h(0) = c, so h = E(x,0)^{-1} c; the immersion
    // is X = -i/lambda (E(x, i lambda) h(x) - c), removable at lambda = 0.
    EgoroffData out;
    std::vector<Cplx> cc(c.begin(), c.end());
    NumMat e0 = sol.frame_value(xs, 0.0, ok);
    if (!*ok) return out;
    bool inv_ok = true;
    NumMat e0inv = e0.inverse(&inv_ok);
    if (!inv_ok) {
        *ok = false;
        return out;
    }
    out.h = e0inv.apply(cc);
    if (std::abs(lambda) < 1e-12) {
        out.x_immersion.assign(sol.n, 0.0);
        return out;
    }
    NumMat eil = sol.frame_value(xs, Cplx(0.0, lambda), ok);
    if (!*ok) return out;
    auto moved = eil.apply(out.h);
    out.x_immersion.resize(sol.n);
    Cplx pref = Cplx(0.0, -1.0) / lambda;
    for (std::size_t k = 0; k < sol.n; ++k) out.x_immersion[k] = pref * (moved[k] - cc[k]);
    return out;
}

SolutionSurface dualize_solution(const SolutionSurface& surface) {
    SolutionSurface s = surface;
    auto inner = surface.eval;
    s.eval = [inner](double x, double t) { return inner(x, t) * Cplx(0.0, -1.0); };
    return s;
}

std::string surface_to_csv(const SolutionSurface& surface) {
    std::ostringstream os;
    os.precision(17);
    const GridSpec& g = surface.grid;
    os << "x,t";
    for (std::size_t r = 0; r < surface.n; ++r)
        for (std::size_t c = 0; c < surface.n; ++c) os << ",u" << r << c;
    os << "\n";
    for (std::size_t it = 0; it < g.nt(); ++it)
        for (std::size_t ix = 0; ix < g.nx(); ++ix) {
            double x = g.x(ix), t = g.t(it);
            os << x << "," << t;
            if (surface.masked(x, t)) {
                for (std::size_t k = 0; k < surface.n * surface.n; ++k) os << ",nan";
            } else {
                NumMat u = surface.eval(x, t);
                for (std::size_t r = 0; r < surface.n; ++r)
                    for (std::size_t c = 0; c < surface.n; ++c) os << "," << u.at(r, c).real();
            }
            os << "\n";
        }
    return os.str();
}

}  // namespace rloop
