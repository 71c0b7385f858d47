#include "thetaforge/jacobi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "thetaforge/error.hpp"

namespace thetaforge {

namespace {

constexpr double kDenominatorFloor = 1e-10;
constexpr double kUsableFloor = 1e-12;
constexpr double kRouteTolerance = 1e-9;

/// Weighted tau-derivative of theta[a,delta](2n tau, 0) with respect to tau,
/// by the direct series route, cross-checked against the heat-equation route.
CMatrix weighted_tau_derivative(const ThetaJet& jet, int n, const std::string& what) {
    const Complex four_pi_i(0.0, 4.0 * std::numbers::pi);
    const CMatrix direct = (2.0 * n) * jet.tau_deriv;
    const CMatrix via_heat = (2.0 * n) * (jet.hessian / four_pi_i);
    const double scale = residual_scale(direct, via_heat);
    const double res = (direct - via_heat).cwiseAbs().maxCoeff() / scale;
    if (res > kRouteTolerance)
        throw CrossCheckError("tau-derivative routes disagree for " + what + " (residual " +
                              std::to_string(res) + ")");
    return direct;
}

} // namespace

DOperatorResult d_operator_quotient(const PeriodMatrix& tau, const RationalVector& a,
                                    const RationalVector& delta, int n,
                                    const TruncationPolicy& policy) {
    if (n < 1) throw DomainError("d_operator_quotient: level must be positive");
    const int g = tau.genus();
    if (!delta.is_half_integral())
        throw DomainError("d_operator_quotient: delta must be half-integral");

    const PeriodMatrix t2 = tau.scale(2ll * n);
    const CVector z0 = CVector::Zero(g);
    const ThetaJet num = theta_jet(t2, z0, a, delta, policy);
    const ThetaJet den = theta_jet(t2, z0, RationalVector::zero(g), delta, policy);
    if (std::abs(den.value) < kDenominatorFloor)
        throw EvaluationError("d_operator_quotient: theta[0,delta](2n tau) vanishes at the sample");

    const CMatrix du = weighted_tau_derivative(num, n, "theta[" + a.str() + "," + delta.str() + "]");
    const CMatrix dv = weighted_tau_derivative(den, n, "theta[0," + delta.str() + "]");

    DOperatorResult res;
    res.matrix = (den.value * du - num.value * dv) / (den.value * den.value);
    res.det = res.matrix.determinant();
    return res;
}

Complex rhs_sum(const PeriodMatrix& tau, const RationalVector& a, const RationalVector& delta,
                int n, const TruncationPolicy& policy) {
    if (n < 1) throw DomainError("rhs_sum: level must be positive");
    const int g = tau.genus();
    if (!delta.is_half_integral()) throw DomainError("rhs_sum: delta must be half-integral");

    const PeriodMatrix t4 = tau.scale(4ll * n);
    const CVector z0 = CVector::Zero(g);
    const RatVec zero = RatVec::zero(g);
    const RatVec a_half = a.raw().half();

    // One gradient per half-integral shift, shared across all tuples.
    const auto shifts = char_grid(g, 2);
    std::vector<CVector> grads(shifts.size());
    for (size_t i = 0; i < shifts.size(); ++i)
        grads[i] = theta_jet_raw(t4, z0, a_half + shifts[i].raw(), zero, policy).gradient;

    const double pi_pow = std::pow(std::numbers::pi, -g);
    const size_t m = shifts.size();
    std::vector<size_t> tuple(static_cast<size_t>(g), 0);
    CMatrix cols(g, g);
    Complex acc(0.0, 0.0);
    for (;;) {
        RatVec shift_total = RatVec::zero(g);
        for (int k = 0; k < g; ++k) {
            cols.col(k) = grads[tuple[static_cast<size_t>(k)]];
            shift_total = shift_total + shifts[tuple[static_cast<size_t>(k)]].raw();
        }
        const Complex d = pi_pow * cols.determinant();
        acc += cexp(Rat(2) * delta.raw().dot(shift_total)) * d * d;

        int i = g - 1;
        while (i >= 0 && tuple[static_cast<size_t>(i)] == m - 1) {
            tuple[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++tuple[static_cast<size_t>(i)];
    }
    return acc;
}

Complex lhs_noconst(const PeriodMatrix& tau, const RationalVector& a, const RationalVector& delta,
                    int n, const TruncationPolicy& policy) {
    const int g = tau.genus();
    const PeriodMatrix t2 = tau.scale(2ll * n);
    const Complex v0 = theta_jet(t2, CVector::Zero(g), RationalVector::zero(g), delta, policy).value;
    const DOperatorResult d = d_operator_quotient(tau, a, delta, n, policy);
    return std::pow(v0, 2 * g) * d.det;
}

ConstantEstimate estimate_constant(const std::vector<PeriodMatrix>& taus, const RationalVector& a,
                                   const RationalVector& delta, int n,
                                   const TruncationPolicy& policy) {
    ConstantEstimate est;
    est.a = a;
    est.delta = delta;
    est.level_n = n;
    est.genus = taus.empty() ? 0 : taus.front().genus();

    for (const PeriodMatrix& tau : taus) {
        Complex lhs;
        try {
            lhs = lhs_noconst(tau, a, delta, n, policy);
        } catch (const EvaluationError&) {
            continue; // vanishing denominator at this sample
        }
        const Complex rhs = rhs_sum(tau, a, delta, n, policy);
        if (std::abs(lhs) < kUsableFloor || std::abs(rhs) < kUsableFloor) continue;
        est.ratios.push_back(rhs / lhs);
    }
    est.sample_count = static_cast<int>(est.ratios.size());
    if (est.sample_count < 10)
        throw InsufficientDataError("estimate_constant: only " +
                                    std::to_string(est.sample_count) +
                                    " usable samples (need 10); both sides may vanish identically");

    auto median_of = [](std::vector<double> xs) {
        std::sort(xs.begin(), xs.end());
        const size_t m = xs.size();
        return m % 2 ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
    };
    std::vector<double> re, im;
    for (const Complex& r : est.ratios) {
        re.push_back(r.real());
        im.push_back(r.imag());
    }
    est.value = Complex(median_of(re), median_of(im));

    double acc = 0.0;
    for (const Complex& r : est.ratios) acc += std::norm(r - est.value);
    est.rel_std = std::sqrt(acc / est.sample_count) / std::max(std::abs(est.value), 1e-300);
    return est;
}

IdentityReport classical_jacobi_residual(const PeriodMatrix& tau, const TruncationPolicy& policy,
                                         double tol) {
    const auto t0 = std::chrono::steady_clock::now();
    if (tau.genus() != 1) throw DomainError("classical Jacobi formula: genus must be 1");
    IdentityReport rep;
    rep.identity = "jacobi-classical";
    rep.genus = 1;

    const CVector z0 = CVector::Zero(1);
    const RationalVector h(std::vector<Rat>{Rat(1, 2)});
    const RationalVector zero = RationalVector::zero(1);

    const ThetaJet odd = theta_jet(tau, z0, h, h, policy);
    const Complex lhs = odd.gradient[0];
    const Complex rhs = -std::numbers::pi * theta_jet(tau, z0, zero, zero, policy).value *
                        theta_jet(tau, z0, h, zero, policy).value *
                        theta_jet(tau, z0, zero, h, policy).value;

    rep.scale = residual_scale({lhs, rhs});
    rep.residual = std::abs(lhs - rhs) / rep.scale;
    rep.degraded = odd.degraded;
    rep.inputs = {{"tau", tau.digest()}};
    rep.finish(tol);
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace thetaforge
