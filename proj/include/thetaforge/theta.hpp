#ifndef THETAFORGE_THETA_HPP
#define THETAFORGE_THETA_HPP

#include <Eigen/Dense>
#include <complex>

#include "thetaforge/period_matrix.hpp"
#include "thetaforge/rational.hpp"
#include "thetaforge/truncation.hpp"

namespace thetaforge {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// e(t) = exp(2 pi i t).  The rational overload reduces t mod 1 exactly
/// first, so e(k) is exactly 1 for integers and the quarter rotations are
/// exact; identity phases are always routed through this overload.
Complex cexp(const Rat& t);
Complex cexp(double t);

/// Value and derivative jet of one theta function at one point.
///
/// gradient and hessian are the z-derivatives at the supplied z.  tau_deriv
/// holds the weighted tau-derivative matrix (full d/dtau_jj on the diagonal,
/// half of d/dtau_jk off it, treating the symmetric pair tau_jk = tau_kj as
/// one variable); with those weights it satisfies
/// tau_deriv = hessian / (4 pi i), the heat equation, which the evaluator
/// accumulates through an independent term-wise coefficient as a
/// cross-check surface.
struct ThetaJet {
    Complex value{0.0, 0.0};
    CVector gradient;
    CMatrix hessian;
    CMatrix tau_deriv;
    bool degraded = false;
    int radius = 0;
};

/// theta[eps,delta](tau, z) with its full jet, one lattice pass over the box
/// ||n+eps||_inf <= R.  Characteristics are exact rationals mod 1.
ThetaJet theta_jet(const PeriodMatrix& tau, const CVector& z, const RationalVector& eps,
                   const RationalVector& delta, const TruncationPolicy& policy = {});

/// Same evaluation for literal (unreduced) rational characteristics.  The
/// series makes sense for any real characteristic, and evaluating the
/// literal values is exactly what the addition theorems require: reducing a
/// lower characteristic mod 1 changes the function by a phase.
ThetaJet theta_jet_raw(const PeriodMatrix& tau, const CVector& z, const RatVec& eps,
                       const RatVec& delta, const TruncationPolicy& policy = {});

enum class ZScaling {
    full, // theta[a,0](m tau, m z): section-of-mTheta convention, chain rule applied
    none  // theta[a,0](m tau, z): the gradient-map convention, argument as written
};

/// Order-m theta function jet.  Requires order(a) | m.  With ZScaling::full
/// the reported z-derivatives include the chain-rule powers of m and
/// tau_deriv is taken with respect to the outer tau (one factor m).
ThetaJet theta_scaled_jet(const PeriodMatrix& tau, const CVector& z, const RationalVector& a,
                          long long order_m, ZScaling z_scaling,
                          const TruncationPolicy& policy = {});

/// Spec surface for the truncation bound; see theta_tail_bound.
double tail_bound(const PeriodMatrix& tau, const CVector& z, const RationalVector& eps, int radius,
                  int deriv_order);

/// Residual scale convention used by every identity check: max(1, largest
/// magnitude among the compared terms).  Guards the relative residual
/// against division by near-zero theta constants.
double residual_scale(std::initializer_list<Complex> terms);
double residual_scale(const CMatrix& lhs, const CMatrix& rhs);

} // namespace thetaforge

#endif
