#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "rloop/errors.hpp"

namespace rloop {

using Cplx = std::complex<double>;

/// Small dense complex matrix for the double-precision layer.
class NumMat {
public:
    NumMat() : rows_(0), cols_(0) {}
    NumMat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}
    static NumMat identity(std::size_t n);
    static NumMat diag(const std::vector<Cplx>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Cplx& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Cplx& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    NumMat operator+(const NumMat& o) const;
    NumMat operator-(const NumMat& o) const;
    NumMat operator*(const NumMat& o) const;
    NumMat operator*(Cplx s) const;
    NumMat transpose() const;
    Cplx det() const;
    /// Gauss-Jordan with partial pivoting; ok set false when singular.
    NumMat inverse(bool* ok) const;
    std::vector<Cplx> apply(const std::vector<Cplx>& v) const;
    double norm_inf() const;
    /// Commutator [d, m] for a diagonal d given as a vector.
    static NumMat commutator_diag(const std::vector<double>& d, const NumMat& m);
    NumMat offdiag() const;    // diagonal removed
    NumMat tracefree() const;  // trace/n subtracted from the diagonal

private:
    std::size_t rows_, cols_;
    std::vector<Cplx> a_;
};

/// Flow data: diagonal a (and b commuting with it) and the flow index j.
struct FlowSpec {
    std::size_t n = 2;
    std::vector<double> a;
    std::vector<double> b;  // defaults to a when empty
    int j = 1;
};

struct GridSpec {
    double x0 = -2, x1 = 2, t0 = -2, t1 = 2;
    double hx = 1e-2, ht = 1e-2;
    std::size_t nx() const;
    std::size_t nt() const;
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * hx; }
    double t(std::size_t i) const { return t0 + static_cast<double>(i) * ht; }
};

/// Matrix-valued surface over an (x,t) grid, carried as an evaluator plus an
/// optional masking denominator; samples are materialized on demand.
struct SolutionSurface {
    GridSpec grid;
    std::size_t n = 2;
    std::function<NumMat(double, double)> eval;
    std::function<double(double, double)> denom;  // mask where |denom| < threshold
    double mask_threshold = 1e-8;

    bool masked(double x, double t) const {
        return denom && std::abs(denom(x, t)) < mask_threshold;
    }
    double masked_fraction() const;
};

struct DressStage {
    double alpha = 1.0;
    NumMat N;
};

/// Frame built from a diagonal vacuum by a chain of simple-pole dressings.
/// The ZS-AKNS vacuum is E = exp(a(lambda x) + b lambda^j t); the
/// orthogonal-system vacuum is E(x, lambda) = diag(exp(lambda x_i)).
class FrameEvaluator {
public:
    enum class Kind { ZsAkns, Orthogonal };

    static FrameEvaluator zs_akns(const FlowSpec& spec, std::vector<DressStage> stages);
    static FrameEvaluator orthogonal(std::size_t n, std::vector<DressStage> stages);

    struct Jet {
        NumMat val, dv;  // E and dE/dlambda
    };

    std::size_t dim() const { return n_; }
    const std::vector<DressStage>& stages() const { return stages_; }

    /// Pointwise dressed nilpotents; ok false when a stage inverse fails.
    std::vector<NumMat> stage_nilpotents(const std::vector<double>& xs, double t,
                                         bool* ok) const;
    /// Dressed frame value at lambda; needs the stage nilpotents.
    Jet jet(const std::vector<double>& xs, double t, Cplx lambda,
            const std::vector<NumMat>& ntildes, bool* ok) const;
    NumMat value(const std::vector<double>& xs, double t, Cplx lambda, bool* ok) const;
    /// Smallest |det(Id + N E_1)| across stages; the masking denominator.
    double stage_denominator(const std::vector<double>& xs, double t) const;

private:
    Kind kind_ = Kind::ZsAkns;
    std::size_t n_ = 2;
    FlowSpec spec_;
    std::vector<DressStage> stages_;

    Jet vacuum_jet(const std::vector<double>& xs, double t, Cplx lambda) const;
};

/// E(x,t,lambda) for the diagonal vacuum of the flow.
NumMat vacuum_frame(const FlowSpec& spec, double x, double t, Cplx lambda);

/// Closed-form single-stage dressed solution of the j-th flow (the 2x2 case
/// with nilpotent entries n1, n2, n3, n1^2 + n2 n3 = 0).
SolutionSurface dress_vacuum_closed_form(double alpha, int j, double n1, double n2, double n3,
                                         const GridSpec& grid, double mask_threshold = 1e-8);

/// Pipeline solution u = -sum [a, Ntilde_i] from a dressing chain on the vacuum.
SolutionSurface dress_chain_numeric(const std::vector<DressStage>& chain, const FlowSpec& spec,
                                    const GridSpec& grid, double mask_threshold = 1e-8);

/// Closed-form two-stage (twisted pair) solution of the third flow.
SolutionSurface mkdv_closed_form(double alpha, double n1, double n2, double n3,
                                 const GridSpec& grid, double mask_threshold = 1e-8);

/// Closed-form order-2 dressed solution of the coupled third flow.
SolutionSurface third_flow_order2(double n1, double n2, double n3, const GridSpec& grid,
                                  double mask_threshold = 1e-8);

enum class FlowKind { TranslationJ1, Mkdv, ThirdCoupled };

struct ResidualReport {
    std::string flow;
    double h = 0;
    double max_residual = 0;
    double masked_fraction = 0;
};

/// Max |LHS - RHS| of the flow equation over interior unmasked points of
/// [x0,x1]x[t0,t1] at step h, with central differences of the given accuracy
/// order (2, 4 or 6).
ResidualReport pde_residual(const SolutionSurface& surface, FlowKind flow, double h,
                            int accuracy_order = 4);

/// Dressed solution of the n-dimensional orthogonal system with the frame.
struct GlnOnSolution {
    std::size_t n = 2;
    double alpha = 1.0;
    NumMat N, Nprime;
    FrameEvaluator frame;

    /// Rotation-coefficient solution: diagonal-removed -(Ntilde + Ntilde').
    NumMat beta_hat(const std::vector<double>& xs, bool* ok) const;
    /// Trace-subtracted alternative, reported for comparison.
    NumMat beta_hat_trace(const std::vector<double>& xs, bool* ok) const;
    NumMat frame_value(const std::vector<double>& xs, Cplx lambda, bool* ok) const;
};
GlnOnSolution gln_on_dress(std::size_t n, double alpha, const NumMat& nilpotent);

/// Max residual of the orthogonal system for a beta field sampled at anchors
/// spaced `anchor` apart on [-1,1]^n, finite differences at step h.
double gln_on_system_residual(const GlnOnSolution& sol, double anchor, double h);

/// Metric data reconstructed from a dressed frame: h(x) = E(x, 0) c and the
/// associated immersion X(x, lambda).
struct EgoroffData {
    std::vector<Cplx> h;
    std::vector<Cplx> x_immersion;
};
EgoroffData egoroff_reconstruct(const GlnOnSolution& sol, const std::vector<double>& c,
                                const std::vector<double>& xs, double lambda, bool* ok);

/// Pointwise multiplication by -i (duality between the compact and noncompact
/// pictures); applying it twice negates the surface.
SolutionSurface dualize_solution(const SolutionSurface& surface);

/// CSV export: header x,t then row-major entries (real parts; surfaces here
/// are real). Masked points are written as nan.
std::string surface_to_csv(const SolutionSurface& surface);

}  // namespace rloop
