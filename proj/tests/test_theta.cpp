#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "support/oracle.hpp"
#include "thetaforge/error.hpp"
#include "thetaforge/harness.hpp"
#include "thetaforge/theta.hpp"

using namespace thetaforge;

namespace {

PeriodMatrix tau_1d(Complex t) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = t;
    return PeriodMatrix(m);
}

const Complex kI(0.0, 1.0);

// Frozen values computed with the direct-summation oracle (radius 40,
// tail below 1e-30).
constexpr double kTheta00_i = 1.0864348112133080;
constexpr double kThetaHalf0_i = 0.91357913815611682;
constexpr double kTheta00_2i = 1.0037348854877391;
constexpr double kThetaHalf0_2i = 0.41576060259602703;
constexpr double kTheta00_4i = 1.0000069746847124;
constexpr double kThetaHalf0_4i = 0.086427836528595597;

std::vector<double> dv(std::initializer_list<double> xs) { return std::vector<double>(xs); }

} // namespace

TEST_CASE("genus-1 anchor values") {
    const PeriodMatrix tau = tau_1d(kI);
    const CVector z0 = CVector::Zero(1);
    const RationalVector zero = RationalVector::zero(1);
    const RationalVector half = RationalVector::parse("1/2");

    CHECK(std::abs(theta_jet(tau, z0, zero, zero).value - kTheta00_i) < 1e-13);
    CHECK(std::abs(theta_jet(tau, z0, half, zero).value - kThetaHalf0_i) < 1e-13);
    CHECK(std::abs(theta_jet(tau, z0, zero, half).value - kThetaHalf0_i) < 1e-13);
    CHECK(std::abs(theta_jet(tau_1d(2.0 * kI), z0, zero, zero).value - kTheta00_2i) < 1e-13);
    CHECK(std::abs(theta_jet(tau_1d(2.0 * kI), z0, half, zero).value - kThetaHalf0_2i) < 1e-13);
    CHECK(std::abs(theta_jet(tau_1d(4.0 * kI), z0, zero, zero).value - kTheta00_4i) < 1e-13);
    CHECK(std::abs(theta_jet(tau_1d(4.0 * kI), z0, half, zero).value - kThetaHalf0_4i) < 1e-13);

    // An off-zero sample, frozen from the oracle.
    CVector z(1);
    z[0] = Complex(0.3, 0.1);
    const Complex v = theta_jet(tau, z, RationalVector::parse("1/4"), zero).value;
    CHECK(std::abs(v - Complex(0.66596392373914800, 0.050957021735944281)) < 1e-13);
}

TEST_CASE("odd characteristic vanishes at z = 0") {
    const RationalVector half = RationalVector::parse("1/2");
    CHECK(std::abs(theta_jet(tau_1d(kI), CVector::Zero(1), half, half).value) < 1e-14);
    CHECK(std::abs(theta_jet(tau_1d(Complex(0.3, 0.7)), CVector::Zero(1), half, half).value) <
          1e-14);
}

TEST_CASE("reindexing symmetry theta[a,0](tau,-z) = theta[-a,0](tau,z)") {
    const PeriodMatrix tau = tau_1d(kI);
    const RationalVector a = RationalVector::parse("1/4");
    const RationalVector zero = RationalVector::zero(1);
    CVector z(1);
    z[0] = Complex(0.3, 0.1);
    const Complex lhs = theta_jet(tau, -z, a, zero).value;
    const Complex rhs = theta_jet(tau, z, -a, zero).value;
    CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("parity of half-integral characteristics") {
    for (int g : {1, 2}) {
        const PeriodMatrix tau = sample_tau(g, 11, 0);
        const CVector z0 = CVector::Zero(g);
        for (const auto& eps : char_grid(g, 2))
            for (const auto& del : char_grid(g, 2)) {
                const ThetaJet jet = theta_jet(tau, z0, eps, del);
                const Rat prod = eps.dot(del) * Rat(4);
                REQUIRE(prod.denominator() == 1);
                if (prod.numerator() % 2 != 0) { // odd: value and hessian vanish
                    CHECK(std::abs(jet.value) < 1e-12);
                    CHECK(jet.hessian.cwiseAbs().maxCoeff() < 1e-10);
                } else { // even: gradient vanishes
                    CHECK(jet.gradient.cwiseAbs().maxCoeff() < 1e-11);
                }
            }
    }
}

TEST_CASE("jet matches the direct-summation oracle at genus 2") {
    const PeriodMatrix tau = sample_tau(2, 42, 3);
    CVector z(2);
    z[0] = Complex(0.21, -0.13);
    z[1] = Complex(-0.05, 0.33);
    const RationalVector eps = RationalVector::parse("1/4,0");
    const RationalVector del = RationalVector::parse("0,1/2");
    const ThetaJet jet = theta_jet(tau, z, eps, del);
    const oracle::Jet ref =
        oracle::direct_jet(tau.entries(), z, dv({0.25, 0.0}), dv({0.0, 0.5}), 20);
    CHECK(std::abs(jet.value - ref.value) < 1e-12);
    CHECK((jet.gradient - ref.grad).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((jet.hessian - ref.hess).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("heat-equation structure of the jet") {
    const PeriodMatrix tau = sample_tau(2, 5, 1);
    const CVector z = sample_z(2, 5, 1);
    const ThetaJet jet = theta_jet(tau, z, RationalVector::parse("1/8,3/8"),
                                   RationalVector::parse("1/2,1/4"));
    const Complex four_pi_i(0.0, 4.0 * std::numbers::pi);
    CHECK((jet.tau_deriv - jet.hessian / four_pi_i).cwiseAbs().maxCoeff() < 1e-12);
    // tau derivative against finite differences of the oracle value
    for (int j = 0; j < 2; ++j)
        for (int k = j; k < 2; ++k) {
            const Complex fd = oracle::fd_tau_derivative(tau.entries(), z, dv({0.125, 0.375}),
                                                         dv({0.5, 0.25}), j, k, 1e-5, 12);
            const Complex weighted = (j == k ? 1.0 : 0.5) * fd;
            CHECK(std::abs(jet.tau_deriv(j, k) - weighted) < 1e-9);
        }
}

TEST_CASE("quasi-periodicity under integral shifts") {
    const PeriodMatrix tau = sample_tau(2, 9, 2);
    const CVector z = sample_z(2, 9, 2);
    const RationalVector zero = RationalVector::zero(2);
    const Eigen::Vector2d m(1.0, -2.0), d(3.0, 1.0);
    CVector shifted = z;
    Complex quad(0.0, 0.0);
    for (int j = 0; j < 2; ++j) {
        Complex row(0.0, 0.0);
        for (int k = 0; k < 2; ++k) row += tau(j, k) * m[k];
        shifted[j] += row + d[j];
        quad += m[j] * (0.5 * row + z[j]);
    }
    const Complex lhs = theta_jet(tau, shifted, zero, zero).value;
    const Complex rhs = std::exp(Complex(0.0, -2.0 * std::numbers::pi) * quad) *
                        theta_jet(tau, z, zero, zero).value;
    CHECK(std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)) < 1e-12);
}

TEST_CASE("scaled jets") {
    const PeriodMatrix tau = tau_1d(kI);
    const RationalVector quarter = RationalVector::parse("1/4");
    const RationalVector zero = RationalVector::zero(1);
    const CVector z0 = CVector::Zero(1);

    SUBCASE("value at z=0 matches the plain jet at the scaled matrix") {
        const ThetaJet s = theta_scaled_jet(tau, z0, quarter, 4, ZScaling::full);
        const ThetaJet p = theta_jet(tau_1d(4.0 * kI), z0, quarter, zero);
        CHECK(std::abs(s.value - p.value) < 1e-14);
    }
    SUBCASE("chain rule factor between the two conventions") {
        const ThetaJet full = theta_scaled_jet(tau, z0, quarter, 4, ZScaling::full);
        const ThetaJet none = theta_scaled_jet(tau, z0, quarter, 4, ZScaling::none);
        CHECK(std::abs(full.gradient[0] - 4.0 * none.gradient[0]) < 1e-12);
        CHECK(std::abs(full.hessian(0, 0) - 16.0 * none.hessian(0, 0)) < 1e-11);
        CHECK(std::abs(full.value - none.value) < 1e-14);
    }
    SUBCASE("matches the oracle at genus 2") {
        const PeriodMatrix t2 = sample_tau(2, 77, 0);
        const ThetaJet s = theta_scaled_jet(t2, CVector::Zero(2),
                                            RationalVector::parse("1/4,0"), 4, ZScaling::full);
        const oracle::Jet ref = oracle::direct_jet(4.0 * t2.entries(), CVector::Zero(2),
                                                   dv({0.25, 0.0}), dv({0.0, 0.0}), 15);
        CHECK(std::abs(s.value - ref.value) < 1e-12);
        CHECK((s.gradient - 4.0 * ref.grad).cwiseAbs().maxCoeff() < 1e-11);
    }
    SUBCASE("order mismatch is rejected") {
        CHECK_THROWS_AS(theta_scaled_jet(tau, z0, RationalVector::parse("1/3"), 4, ZScaling::full),
                        DomainError);
        CHECK_THROWS_AS(theta_scaled_jet(tau, z0, quarter, 3, ZScaling::full), DomainError);
    }
}

TEST_CASE("tail bound behavior") {
    const PeriodMatrix tau = tau_1d(kI);
    const CVector z0 = CVector::Zero(1);
    const RationalVector zero = RationalVector::zero(1);

    CHECK(tail_bound(tau, z0, zero, 10, 0) < 1e-100);
    double prev = tail_bound(tau, z0, zero, 1, 0);
    for (int r = 2; r <= 12; ++r) {
        const double cur = tail_bound(tau, z0, zero, r, 0);
        CHECK(cur <= prev);
        prev = cur;
    }
    // Shrinking Im tau inflates the bound.
    const PeriodMatrix small = tau_1d(Complex(0.0, 0.01));
    CHECK(tail_bound(small, z0, zero, 10, 0) > 1e6 * tail_bound(tau, z0, zero, 10, 0));
    // Derivative orders only increase it.
    CHECK(tail_bound(tau, z0, zero, 5, 2) >= tail_bound(tau, z0, zero, 5, 0));
}

TEST_CASE("truncation soundness: radius doubling stays within the reported bound") {
    const PeriodMatrix tau = sample_tau(1, 3, 4);
    const CVector z = sample_z(1, 3, 4);
    const RationalVector zero = RationalVector::zero(1);
    for (int radius : {3, 4, 6}) {
        TruncationPolicy p1;
        p1.forced_radius = radius;
        TruncationPolicy p2;
        p2.forced_radius = 2 * radius;
        const Complex v1 = theta_jet(tau, z, zero, zero, p1).value;
        const Complex v2 = theta_jet(tau, z, zero, zero, p2).value;
        CHECK(std::abs(v1 - v2) <= tail_bound(tau, z, zero, radius, 0) + 1e-15);
    }
}

TEST_CASE("degraded flag instead of silent failure") {
    const PeriodMatrix thin = tau_1d(Complex(0.0, 0.05));
    TruncationPolicy tight;
    tight.max_radius = 3;
    const ThetaJet jet = theta_jet(thin, CVector::Zero(1), RationalVector::zero(1),
                                   RationalVector::zero(1), tight);
    CHECK(jet.degraded);
    CHECK(std::isfinite(jet.value.real()));
    TruncationPolicy roomy;
    const ThetaJet ok = theta_jet(thin, CVector::Zero(1), RationalVector::zero(1),
                                  RationalVector::zero(1), roomy);
    CHECK_FALSE(ok.degraded);
}

TEST_CASE("period matrix validation") {
    Eigen::MatrixXcd bad(2, 2);
    bad << Complex(0.1, 1.0), Complex(0.2, 0.1), Complex(0.25, 0.1), Complex(0.0, 1.2);
    CHECK_THROWS_AS(PeriodMatrix{bad}, DomainError); // not symmetric as stored

    Eigen::MatrixXcd negative(1, 1);
    negative << Complex(0.3, -0.2);
    CHECK_THROWS_AS(PeriodMatrix{negative}, DomainError);

    Eigen::MatrixXcd near(1, 1);
    near << Complex(0.0, 5e-4);
    CHECK_THROWS_AS(PeriodMatrix{near}, DomainError);
    CHECK_NOTHROW(PeriodMatrix(near, /*allow_near_degenerate=*/true));
}
