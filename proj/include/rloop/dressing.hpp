#pragma once

#include "rloop/simple_elements.hpp"

namespace rloop {

/// Dressing a holomorphic (polynomial) loop by m_{alpha,1,N}:
/// Ntilde = f(alpha)^{-1} (Id + N f_1)^{-1} N f(alpha) with
/// f_1 = f'(alpha) f(alpha)^{-1}; the dressed loop
/// m_{alpha,1,N} f m_{alpha,1,Ntilde}^{-1} is holomorphic.
struct SimplePoleDressing {
    Mat n_tilde;
    RationalLoop dressed;
};
SimplePoleDressing dress_simple_pole(const TowerScalar& alpha, const Mat& nilpotent,
                                     const RationalLoop& f);

/// Order-2 dressing: m_{alpha,2,N} f (Id + t^{-1} M1 + t^{-2} M2) is
/// holomorphic at alpha, with M1, M2 from the jet of f at alpha.
struct Order2Dressing {
    Mat m1, m2;
    RationalLoop dressed;
};
Order2Dressing dress_order2(const TowerScalar& alpha, const Mat& nilpotent,
                            const RationalLoop& f);

/// Permutability: m_{beta,1,Mhat} m_{alpha,1,N} = m_{alpha,1,Nhat} m_{beta,1,M}.
struct Permuted {
    Mat n_hat, m_hat;
};
Permuted permute(const TowerScalar& alpha, const Mat& n, const TowerScalar& beta, const Mat& m);

/// Twisted-pair dressing: stage one at alpha with N, stage two at -alpha
/// with N'; failures carry the stage index.
struct TwistedDressing {
    Mat n_tilde, n_tilde_prime;
    RationalLoop dressed;
};
TwistedDressing dress_twisted_pair(const SimpleElement& s, const RationalLoop& f);

}  // namespace rloop
