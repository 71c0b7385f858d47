#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "support/oracle.hpp"
#include "thetaforge/error.hpp"
#include "thetaforge/harness.hpp"
#include "thetaforge/jacobi.hpp"
#include "thetaforge/moduli.hpp"
#include "thetaforge/pairing.hpp"

using namespace thetaforge;

namespace {

PeriodMatrix tau_1d(Complex t) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = t;
    return PeriodMatrix(m);
}

const Complex kI(0.0, 1.0);

/// Finite-difference probe of the weighted derivative matrix of
/// f(tau) = theta[a,delta](2n tau)/theta[0,delta](2n tau), built on oracle
/// values only.
Complex fd_quotient_entry(const PeriodMatrix& tau, const std::vector<double>& a,
                          const std::vector<double>& delta, int n, int j, int k) {
    const int g = tau.genus();
    auto quotient = [&](const Eigen::MatrixXcd& t) {
        const Eigen::MatrixXcd arg = 2.0 * n * t;
        const CVector z0 = CVector::Zero(g);
        return oracle::direct_value(arg, z0, a, delta, 16) /
               oracle::direct_value(arg, z0, std::vector<double>(a.size(), 0.0), delta, 16);
    };
    auto value_at = [&](double step) {
        Eigen::MatrixXcd t = tau.entries();
        t(j, k) += step;
        if (j != k) t(k, j) += step;
        return quotient(t);
    };
    const double h = 1e-5;
    auto central = [&](double s) { return (value_at(s) - value_at(-s)) / (2.0 * s); };
    const Complex d = (4.0 * central(h / 2) - central(h)) / 3.0;
    return (j == k ? 1.0 : 0.5) * d;
}

} // namespace

TEST_CASE("derivative operator on quotients") {
    SUBCASE("a = 0 gives the zero matrix") {
        const DOperatorResult r =
            d_operator_quotient(tau_1d(kI), RationalVector::zero(1), RationalVector::zero(1), 1);
        CHECK(std::abs(r.matrix(0, 0)) < 1e-14);
        CHECK(std::abs(r.det) < 1e-14);
    }
    SUBCASE("odd pair: quotient vanishes identically, both routes agree on zero") {
        const DOperatorResult r = d_operator_quotient(tau_1d(kI), RationalVector::parse("1/2"),
                                                      RationalVector::parse("1/2"), 1);
        CHECK(std::abs(r.det) < 1e-12);
    }
    SUBCASE("genus 1 against the finite-difference oracle") {
        const PeriodMatrix tau = tau_1d(kI);
        const DOperatorResult r = d_operator_quotient(tau, RationalVector::parse("1/2"),
                                                      RationalVector::zero(1), 1);
        const Complex fd = fd_quotient_entry(tau, {0.5}, {0.0}, 1, 0, 0);
        CHECK(std::abs(r.matrix(0, 0) - fd) / std::max(1.0, std::abs(fd)) < 1e-9);
    }
    SUBCASE("genus 2: symmetric matrix, every entry matches finite differences") {
        const PeriodMatrix tau = sample_tau(2, 160, 0);
        const RationalVector a = RationalVector::parse("1/2,0");
        const RationalVector delta = RationalVector::parse("0,1/2");
        const DOperatorResult r = d_operator_quotient(tau, a, delta, 1);
        CHECK((r.matrix - r.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-13);
        for (int j = 0; j < 2; ++j)
            for (int k = j; k < 2; ++k) {
                const Complex fd = fd_quotient_entry(tau, {0.5, 0.0}, {0.0, 0.5}, 1, j, k);
                CHECK(std::abs(r.matrix(j, k) - fd) / std::max(1.0, std::abs(fd)) < 1e-9);
            }
    }
}

TEST_CASE("phased sum of squared Jacobian determinants") {
    SUBCASE("a = 0 vanishes by parity") {
        CHECK(std::abs(rhs_sum(tau_1d(kI), RationalVector::zero(1), RationalVector::zero(1), 1)) <
              1e-20);
    }
    SUBCASE("genus 1 term-by-term against jacobian_det") {
        const PeriodMatrix tau = tau_1d(kI);
        const RationalVector a = RationalVector::parse("1/2");
        const RationalVector delta = RationalVector::parse("1/2");
        const Complex sum = rhs_sum(tau, a, delta, 1);
        const PeriodMatrix t4 = tau.scale(4);
        Complex ref(0.0, 0.0);
        for (const auto& eps : char_grid(1, 2)) {
            const RationalVector upper(a.raw().half() + eps.raw());
            const Complex d = jacobian_det(t4, {{upper, RationalVector::zero(1)}});
            ref += cexp(Rat(2) * delta.dot(eps)) * d * d;
        }
        CHECK(std::abs(sum - ref) < 1e-12);
    }
    SUBCASE("genus 2: sixteen terms against the oracle") {
        const PeriodMatrix tau = sample_tau(2, 170, 0);
        const RationalVector a = RationalVector::parse("1/2,1/2");
        const RationalVector delta = RationalVector::zero(2);
        const Complex sum = rhs_sum(tau, a, delta, 1);

        const Eigen::MatrixXcd arg = 4.0 * tau.entries();
        const auto shifts = char_grid(2, 2);
        std::vector<oracle::Jet> jets;
        for (const auto& s : shifts) {
            std::vector<double> upper = s.to_doubles();
            upper[0] += 0.25;
            upper[1] += 0.25;
            jets.push_back(oracle::direct_jet(arg, CVector::Zero(2), upper, {0.0, 0.0}, 12));
        }
        Complex ref(0.0, 0.0);
        const double pi2 = std::numbers::pi * std::numbers::pi;
        for (size_t i = 0; i < shifts.size(); ++i)
            for (size_t j = 0; j < shifts.size(); ++j) {
                const Complex det = jets[i].grad[0] * jets[j].grad[1] -
                                    jets[j].grad[0] * jets[i].grad[1];
                ref += det * det / pi2 / pi2 * (pi2); // (pi^{-2} det)^2 = det^2 / pi^4
            }
        ref = Complex(0.0, 0.0);
        for (size_t i = 0; i < shifts.size(); ++i)
            for (size_t j = 0; j < shifts.size(); ++j) {
                const Complex det = (jets[i].grad[0] * jets[j].grad[1] -
                                     jets[j].grad[0] * jets[i].grad[1]) /
                                    pi2;
                ref += det * det; // delta = 0: all phases are 1
            }
        CHECK(std::abs(sum - ref) / std::max(1.0, std::abs(sum)) < 1e-11);
    }
}

TEST_CASE("constant estimation for the generalized derivative formula") {
    auto taus_for = [](int g, int count) {
        std::vector<PeriodMatrix> taus;
        for (int i = 0; i < count; ++i)
            taus.push_back(sample_tau(g, 180, static_cast<std::uint64_t>(i)));
        return taus;
    };

    SUBCASE("genus 1 estimates are tau-independent and match the scalar closed form") {
        // For g = 1 the scalar case collapses to const = i e(-a delta)/(2 pi n),
        // which makes a sharp cross-check of every convention in the chain.
        struct Case {
            int n;
            const char* a;
            const char* d;
        };
        for (const Case& c : {Case{1, "1/2", "0"}, Case{2, "1/4", "0"}, Case{2, "1/4", "1/2"}}) {
            const RationalVector a = RationalVector::parse(c.a);
            const RationalVector d = RationalVector::parse(c.d);
            const ConstantEstimate est = estimate_constant(taus_for(1, 20), a, d, c.n);
            CHECK(est.sample_count >= 10);
            CHECK(est.rel_std < 1e-6);
            const Complex predicted =
                Complex(0.0, 1.0) * cexp(-a.dot(d)) / (2.0 * std::numbers::pi * c.n);
            CHECK(std::abs(est.value - predicted) < 1e-9 * std::abs(predicted));
        }
    }
    SUBCASE("degenerate tuples raise insufficient data") {
        CHECK_THROWS_AS(estimate_constant(taus_for(1, 20), RationalVector::zero(1),
                                          RationalVector::zero(1), 1),
                        InsufficientDataError);
        // the odd pair (1/2,1/2) at n = 1: both sides vanish identically
        CHECK_THROWS_AS(estimate_constant(taus_for(1, 20), RationalVector::parse("1/2"),
                                          RationalVector::parse("1/2"), 1),
                        InsufficientDataError);
    }
    SUBCASE("genus 2 constancy") {
        const ConstantEstimate est = estimate_constant(taus_for(2, 14),
                                                       RationalVector::parse("1/2,0"),
                                                       RationalVector::parse("0,1/2"), 1);
        CHECK(est.sample_count >= 10);
        CHECK(est.rel_std < 1e-6);
    }
    SUBCASE("held-out residual with the fitted constant") {
        const RationalVector a = RationalVector::parse("1/4");
        const RationalVector d = RationalVector::parse("1/2");
        const ConstantEstimate est = estimate_constant(taus_for(1, 20), a, d, 2);
        for (int i = 20; i < 26; ++i) {
            const PeriodMatrix tau = sample_tau(1, 180, static_cast<std::uint64_t>(i));
            const Complex lhs = est.value * lhs_noconst(tau, a, d, 2);
            const Complex rhs = rhs_sum(tau, a, d, 2);
            CHECK(std::abs(lhs - rhs) / residual_scale({lhs, rhs}) < 1e-9);
        }
    }
}

TEST_CASE("rank-one structure of the diagonal pairing matrix") {
    for (int i = 0; i < 6; ++i) {
        const PeriodMatrix tau = sample_tau(2, 190, static_cast<std::uint64_t>(i));
        SplitMix rng(mix_keys({190, static_cast<std::uint64_t>(i)}));
        const RationalVector a = random_char(rng, 2, 8);
        const PairingMatrix caa = build_C(tau, a, a, 2);
        const CVector grad = theta_jet(tau.scale(8), CVector::Zero(2), a,
                                       RationalVector::zero(2))
                                 .gradient;
        if (grad.norm() <= 1e-10) continue;
        Eigen::JacobiSVD<CMatrix> svd(caa.entries);
        CHECK(svd.singularValues()[1] < 1e-8 * svd.singularValues()[0]);
    }
}

TEST_CASE("classical derivative formula") {
    SUBCASE("tau = i, frozen anchors") {
        const auto rep = classical_jacobi_residual(tau_1d(kI));
        CHECK(rep.residual < 1e-10);
        const ThetaJet odd = theta_jet(tau_1d(kI), CVector::Zero(1),
                                       RationalVector::parse("1/2"), RationalVector::parse("1/2"));
        CHECK(std::abs(odd.gradient[0] - (-2.8486946039877873)) < 1e-12);
    }
    SUBCASE("another point and a seeded sweep") {
        CHECK(classical_jacobi_residual(tau_1d(Complex(0.5, 0.8))).residual < 1e-10);
        for (int i = 0; i < 20; ++i)
            CHECK(classical_jacobi_residual(sample_tau(1, 200, static_cast<std::uint64_t>(i)))
                      .residual < 1e-9);
    }
    SUBCASE("genus restriction") {
        CHECK_THROWS_AS(classical_jacobi_residual(sample_tau(2, 201, 0)), DomainError);
    }
}
