#ifndef THETAFORGE_PAIRING_HPP
#define THETAFORGE_PAIRING_HPP

#include "thetaforge/theta.hpp"

namespace thetaforge {

enum class PairingKind { C, A };

/// g x g bilinear combination of theta data, tagged with its defining
/// indices.  Kind C pairs first derivatives at 4n*tau:
///   C^{ab}_ij = 2 d_i theta[a,0] d_j theta[b,0] + 2 d_j theta[a,0] d_i theta[b,0];
/// kind A pairs values with second derivatives at 2n*tau:
///   A^{ab}_ij = d_i d_j theta[a,eps] theta[b,eps] - theta[a,eps] d_i d_j theta[b,eps].
/// Both are symmetric in (i,j); C is symmetric and A antisymmetric under
/// swapping the indices a,b, and C^{aa} has rank at most one.
struct PairingMatrix {
    CMatrix entries;
    PairingKind kind;
    RationalVector index_a;
    RationalVector index_b;
    RationalVector lower_char; // the eps subscript; zero for kind C
    int order_n;
    PeriodMatrix tau_ref;
};

PairingMatrix build_C(const PeriodMatrix& tau, const RationalVector& a, const RationalVector& b,
                      int n, const TruncationPolicy& policy = {});

PairingMatrix build_A(const PeriodMatrix& tau, const RationalVector& a, const RationalVector& b,
                      const RationalVector& eps, int n, const TruncationPolicy& policy = {});

/// Entry matrices for literal (unreduced) indices, used inside the phased
/// sums of the A/C correspondence.
CMatrix c_matrix_raw(const PeriodMatrix& tau, const RatVec& a, const RatVec& b, int n,
                     const TruncationPolicy& policy = {});
CMatrix a_matrix_raw(const PeriodMatrix& tau, const RatVec& a, const RatVec& b, const RatVec& eps,
                     int n, const TruncationPolicy& policy = {});

} // namespace thetaforge

#endif
