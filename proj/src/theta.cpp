#include "thetaforge/theta.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "thetaforge/error.hpp"

namespace thetaforge {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Complex cexp(const Rat& t) {
    const Rat r = rat_mod1(t);
    if (r == Rat(0)) return {1.0, 0.0};
    if (r == Rat(1, 2)) return {-1.0, 0.0};
    if (r == Rat(1, 4)) return {0.0, 1.0};
    if (r == Rat(3, 4)) return {0.0, -1.0};
    const double arg = kTwoPi * rat_to_double(r);
    return {std::cos(arg), std::sin(arg)};
}

Complex cexp(double t) {
    const double arg = kTwoPi * t;
    return {std::cos(arg), std::sin(arg)};
}

ThetaJet theta_jet(const PeriodMatrix& tau, const CVector& z, const RationalVector& eps,
                   const RationalVector& delta, const TruncationPolicy& policy) {
    return theta_jet_raw(tau, z, eps.raw(), delta.raw(), policy);
}

ThetaJet theta_jet_raw(const PeriodMatrix& tau, const CVector& z, const RatVec& eps,
                       const RatVec& delta, const TruncationPolicy& policy) {
    policy.validate();
    const int g = tau.genus();
    if (z.size() != g || eps.size() != g || delta.size() != g)
        throw DomainError("theta_jet: dimension mismatch between tau, z and characteristics");
    for (int i = 0; i < g; ++i)
        if (!std::isfinite(z[i].real()) || !std::isfinite(z[i].imag()))
            throw DomainError("theta_jet: z must be finite");

    ThetaJet jet;
    jet.gradient = CVector::Zero(g);
    jet.hessian = CMatrix::Zero(g, g);
    jet.tau_deriv = CMatrix::Zero(g, g);
    jet.radius = choose_radius(tau, z, policy, jet.degraded);

    // Per-coordinate integer ranges covering |n_i + eps_i| <= R, computed
    // with exact rational floors so fractional offsets never lose a term.
    const Rat R(jet.radius);
    std::vector<long long> lo(g), hi(g), n(g);
    for (int i = 0; i < g; ++i) {
        lo[i] = -rat_floor(R + eps[i]);
        hi[i] = rat_floor(R - eps[i]);
        if (lo[i] > hi[i]) { // empty range: the whole series truncates to zero
            return jet;
        }
        n[i] = lo[i];
    }

    const std::vector<double> epsd = eps.to_doubles();
    const std::vector<double> deltad = delta.to_doubles();
    const Eigen::MatrixXcd& T = tau.entries();
    const Complex two_pi_i(0.0, kTwoPi);
    const Complex hess_coef = two_pi_i * two_pi_i;
    const Complex dtau_coef(0.0, std::numbers::pi); // weighted tau-derivative per term

    std::vector<double> N(g);
    for (;;) {
        for (int i = 0; i < g; ++i) N[i] = static_cast<double>(n[i]) + epsd[i];

        Complex arg(0.0, 0.0);
        for (int j = 0; j < g; ++j) {
            Complex row(0.0, 0.0);
            for (int k = 0; k < g; ++k) row += T(j, k) * N[k];
            arg += N[j] * (0.5 * row + z[j] + deltad[j]);
        }
        const Complex term = std::exp(two_pi_i * arg);

        jet.value += term;
        for (int j = 0; j < g; ++j) {
            jet.gradient[j] += two_pi_i * N[j] * term;
            for (int k = j; k < g; ++k) {
                jet.hessian(j, k) += hess_coef * N[j] * N[k] * term;
                jet.tau_deriv(j, k) += dtau_coef * N[j] * N[k] * term;
            }
        }

        int i = g - 1;
        while (i >= 0 && n[i] == hi[i]) {
            n[i] = lo[i];
            --i;
        }
        if (i < 0) break;
        ++n[i];
    }

    for (int j = 0; j < g; ++j)
        for (int k = 0; k < j; ++k) {
            jet.hessian(j, k) = jet.hessian(k, j);
            jet.tau_deriv(j, k) = jet.tau_deriv(k, j);
        }
    return jet;
}

ThetaJet theta_scaled_jet(const PeriodMatrix& tau, const CVector& z, const RationalVector& a,
                          long long order_m, ZScaling z_scaling, const TruncationPolicy& policy) {
    if (order_m < 1 || order_m % 2 != 0)
        throw DomainError("theta_scaled_jet: order must be a positive even integer");
    if (order_m % a.order() != 0)
        throw DomainError("theta_scaled_jet: characteristic order " + std::to_string(a.order()) +
                          " does not divide " + std::to_string(order_m));
    const PeriodMatrix mt = tau.scale(order_m);
    const double m = static_cast<double>(order_m);
    if (z_scaling == ZScaling::none)
        return theta_jet(mt, z, a, RationalVector::zero(tau.genus()), policy);
    ThetaJet jet = theta_jet(mt, m * z, a, RationalVector::zero(tau.genus()), policy);
    jet.gradient *= m;
    jet.hessian *= m * m;
    jet.tau_deriv *= m;
    return jet;
}

double tail_bound(const PeriodMatrix& tau, const CVector& z, const RationalVector& eps, int radius,
                  int deriv_order) {
    if (eps.size() != tau.genus()) throw DomainError("tail_bound: characteristic dimension mismatch");
    return theta_tail_bound(tau, z, radius, deriv_order);
}

double residual_scale(std::initializer_list<Complex> terms) {
    double s = 1.0;
    for (const Complex& t : terms) s = std::max(s, std::abs(t));
    return s;
}

double residual_scale(const CMatrix& lhs, const CMatrix& rhs) {
    double s = 1.0;
    s = std::max(s, lhs.cwiseAbs().maxCoeff());
    s = std::max(s, rhs.cwiseAbs().maxCoeff());
    return s;
}

} // namespace thetaforge
