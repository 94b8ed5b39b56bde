#pragma once

#include "rloop/loop.hpp"

namespace rloop {

enum class ElementKind { P, PHerm, QGlnr, RGlnr, QUpq, M, NUpq, S };

const char* element_kind_name(ElementKind k);

/// A validated simple element together with its materialized loop.
/// Unused parameter slots stay default-constructed.
struct SimpleElement {
    ElementKind kind = ElementKind::P;
    std::size_t n = 0;
    TowerScalar alpha, beta;
    int k = 1;
    Subspace V, W;
    Mat N, Nprime;
    RealityMode reality = RealityMode::None;
    std::size_t p = 0, q = 0;  // form signature for upq kinds
    RationalLoop loop;
};

/// Table row p: ((lambda-alpha)/(lambda-beta)) pi_V + pi_W, C^n = V + W.
SimpleElement make_p(const TowerScalar& alpha, const TowerScalar& beta, const Subspace& v,
                     const Subspace& w);
/// Hermitian row p: ((lambda-alpha)/(lambda-conj alpha)) pi_V + pi_{V^perp},
/// V nondegenerate, alpha nonreal.
SimpleElement make_p_herm(const TowerScalar& alpha, const Subspace& v, const HermForm& form);
/// Real-form row q: product of two p's at conjugate parameters, V, W conj-invariant.
SimpleElement make_q_glnr(const TowerScalar& alpha, const TowerScalar& beta, const Subspace& v,
                          const Subspace& w);
/// Real-form row r: C^n = V + W + conj(V), W conj-invariant.
SimpleElement make_r_glnr(const TowerScalar& alpha, const TowerScalar& beta, const Subspace& v,
                          const Subspace& w);
/// Indefinite row q: V isotropic, decomposition V + (V+sV)^perp + sV.
SimpleElement make_q_upq(const TowerScalar& alpha, const TowerScalar& beta, const Subspace& v,
                         const HermForm& form);
/// Nilpotent row m: Id + (lambda-alpha)^{-k} N, N^2 = 0. Reality tags add the
/// table conditions (real alpha with real N, or real alpha with skew N).
SimpleElement make_m(const TowerScalar& alpha, int k, const Mat& nilpotent,
                     RealityMode reality = RealityMode::None, std::size_t p = 0,
                     std::size_t q = 0);
/// Three-step row n: Id + t^{-k} N + t^{-2k} N^2 / 2 with N = M - M*,
/// M: (V+sV)^perp -> V, V maximal isotropic.
SimpleElement make_n_upq(const TowerScalar& alpha, int k, const Mat& nilpotent, const Subspace& v,
                         const HermForm& form);
/// Twisted pair s = m_{-alpha,1,N'} m_{alpha,1,N} with N' from the closed formula.
SimpleElement make_twisted_pair(const TowerScalar& alpha, const Mat& nilpotent);

/// Closed-form inverse element (parameter swap or sign flip).
SimpleElement inverse_of(const SimpleElement& e);

/// Re-run the constructor checks; used by acceptance tests on emitted factors.
void validate(const SimpleElement& e);

/// Projector onto V along W (their direct sum must be the ambient space).
Mat projector(const Subspace& v, const Subspace& w);

/// m_{alpha,k,N} as a loop.
RationalLoop nilpotent_loop(const TowerScalar& alpha, int k, const Mat& n);

}  // namespace rloop
