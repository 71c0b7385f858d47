#include "thetaforge/truncation.hpp"

#include <cmath>
#include <numbers>

#include "thetaforge/error.hpp"

namespace thetaforge {

void TruncationPolicy::validate() const {
    if (!(tail_bound > 0.0)) throw DomainError("truncation policy: tail bound must be positive");
    if (max_radius < 1) throw DomainError("truncation policy: max radius must be >= 1");
    if (deriv_order < 0 || deriv_order > 2)
        throw DomainError("truncation policy: derivative order must be 0, 1 or 2");
    if (radius_multiplier < 1)
        throw DomainError("truncation policy: radius multiplier must be >= 1");
    if (forced_radius < 0) throw DomainError("truncation policy: forced radius must be >= 0");
}

double theta_tail_bound(const PeriodMatrix& tau, const Eigen::VectorXcd& z, int radius,
                        int deriv_order) {
    if (radius < 1) throw DomainError("tail bound: radius must be >= 1");
    if (deriv_order < 0 || deriv_order > 2)
        throw DomainError("tail bound: derivative order must be 0, 1 or 2");
    const int g = tau.genus();
    if (z.size() != g) throw DomainError("tail bound: z has wrong dimension");

    const double pi = std::numbers::pi;
    const double lambda = tau.min_imag_eigenvalue();
    const double zim = z.imag().norm();
    const double sg = std::sqrt(static_cast<double>(g));
    const double cd = deriv_order == 0 ? 1.0 : (deriv_order == 1 ? 2.0 * pi : 4.0 * pi * pi);

    // Shell k holds the lattice points with ||n+eps||_inf in [k, k+1).  For
    // any real offset eps there are at most (2k+3)^g - (2k-1)^g of them, the
    // 2-norm r lies in [k, sqrt(g)(k+1)], and every omitted term is bounded by
    //   cd * r^d * exp(-pi lambda r^2 + 2 pi r zim)
    //   <= cd * (sqrt(g)(k+1))^d * exp(-pi lambda k^2 + 2 pi sqrt(g)(k+1) zim).
    double total = 0.0;
    for (int k = radius;; ++k) {
        const double outer = std::pow(2.0 * k + 3.0, g);
        const double inner = std::pow(2.0 * k - 1.0, g);
        const double count = outer - inner;
        const double rmax = sg * (k + 1.0);
        const double term =
            count * cd * std::pow(rmax, deriv_order) * std::exp(-pi * lambda * k * k + 2.0 * pi * rmax * zim);
        total += term;
        if (term == 0.0 || (k > radius + 4 && term < total * 1e-18)) break;
        if (k > radius + 100000) break; // unreachable for positive lambda
    }
    return total;
}

int choose_radius(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                  const TruncationPolicy& policy, bool& degraded) {
    policy.validate();
    if (policy.forced_radius > 0) {
        degraded =
            theta_tail_bound(tau, z, policy.forced_radius, policy.deriv_order) > policy.tail_bound;
        return policy.forced_radius;
    }
    int base = policy.max_radius;
    bool met = false;
    for (int r = 1; r <= policy.max_radius; ++r) {
        if (theta_tail_bound(tau, z, r, policy.deriv_order) <= policy.tail_bound) {
            base = r;
            met = true;
            break;
        }
    }
    degraded = !met;
    return std::min(base * policy.radius_multiplier, policy.max_radius);
}

} // namespace thetaforge
