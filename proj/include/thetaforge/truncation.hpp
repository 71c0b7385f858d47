#ifndef THETAFORGE_TRUNCATION_HPP
#define THETAFORGE_TRUNCATION_HPP

#include <Eigen/Dense>

#include "thetaforge/period_matrix.hpp"

namespace thetaforge {

/// Controls the lattice-sum truncation of theta series.
///
/// The summation region is the box ||n+eps||_inf <= R.  R is the smallest
/// radius whose proven tail bound (see theta_tail_bound) is below
/// tail_bound, capped at max_radius; hitting the cap sets the degraded flag
/// on the resulting jet instead of failing silently.  radius_multiplier
/// scales the chosen radius (the identity suites rerun with multiplier 2 to
/// certify that residuals measure identity truth, not truncation error);
/// forced_radius, when positive, bypasses the choice entirely.
struct TruncationPolicy {
    double tail_bound = 1e-13;
    int max_radius = 60;
    int deriv_order = 2; // 0, 1 or 2: highest derivative the bound must cover
    int radius_multiplier = 1;
    int forced_radius = 0;

    void validate() const;
};

/// Proven upper bound on the tail sum over ||n+eps||_inf > radius of
/// P(||n+eps||) * exp(-pi lambda_min(Im tau) ||n+eps||^2 + 2 pi ||n+eps|| ||Im z||),
/// with P(r) = r^d scaled by 1, 2*pi, (2*pi)^2 for deriv_order d = 0, 1, 2.
/// The bound holds uniformly in the characteristic offset eps and is
/// monotone nonincreasing in the radius.
double theta_tail_bound(const PeriodMatrix& tau, const Eigen::VectorXcd& z, int radius,
                        int deriv_order);

/// Smallest radius meeting policy.tail_bound (then scaled by the policy
/// multiplier and capped).  Sets degraded when the bound at the returned
/// radius exceeds the target.
int choose_radius(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                  const TruncationPolicy& policy, bool& degraded);

} // namespace thetaforge

#endif
