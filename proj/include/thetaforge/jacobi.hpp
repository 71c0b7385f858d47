#ifndef THETAFORGE_JACOBI_HPP
#define THETAFORGE_JACOBI_HPP

#include <vector>

#include "thetaforge/report.hpp"
#include "thetaforge/theta.hpp"

namespace thetaforge {

/// Result of applying the weighted tau-derivative operator (full weight on
/// the diagonal, half off it) to a scalar function of tau.
struct DOperatorResult {
    CMatrix matrix;
    Complex det;
};

/// The operator applied to the quotient theta[a,delta](2n tau)/theta[0,delta](2n tau)
/// via the quotient rule.  Every constituent tau-derivative is taken with
/// respect to tau (chain factor 2n included) and is computed along two
/// independent series routes, the direct tau-coefficient accumulation and
/// hessian/(4 pi i); a disagreement above 1e-9 relative raises a
/// cross-check error.
DOperatorResult d_operator_quotient(const PeriodMatrix& tau, const RationalVector& a,
                                    const RationalVector& delta, int n,
                                    const TruncationPolicy& policy = {});

/// Phased sum over all g-tuples of half-integral shifts of the squared
/// Jacobian determinants D([a/2+eps_1,0],...,[a/2+eps_g,0])^2 at 4n tau.
Complex rhs_sum(const PeriodMatrix& tau, const RationalVector& a, const RationalVector& delta,
                int n, const TruncationPolicy& policy = {});

/// The left side without its constant:
/// (theta[0,delta](2n tau))^{2g} * det of the quotient derivative matrix.
Complex lhs_noconst(const PeriodMatrix& tau, const RationalVector& a, const RationalVector& delta,
                    int n, const TruncationPolicy& policy = {});

struct ConstantEstimate {
    Complex value{0.0, 0.0};
    std::vector<Complex> ratios;
    double rel_std = 0.0;
    int sample_count = 0;
    int genus = 0;
    int level_n = 0;
    RationalVector a;
    RationalVector delta;
};

/// Estimates the undetermined constant as the componentwise median of the
/// per-sample ratios rhs/lhs, discarding samples where either side is below
/// 1e-12.  Fewer than 10 usable samples raises InsufficientDataError.  A
/// relative standard deviation at rounding level is the numerical
/// verification that the constant does not depend on tau.
ConstantEstimate estimate_constant(const std::vector<PeriodMatrix>& taus, const RationalVector& a,
                                   const RationalVector& delta, int n,
                                   const TruncationPolicy& policy = {});

/// Genus-1 derivative formula: theta'[1/2,1/2](tau,0) against
/// -pi theta[0,0] theta[1/2,0] theta[0,1/2] at tau, 0.
IdentityReport classical_jacobi_residual(const PeriodMatrix& tau,
                                         const TruncationPolicy& policy = {}, double tol = 1e-9);

} // namespace thetaforge

#endif
