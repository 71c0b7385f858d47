#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "support/oracle.hpp"
#include "thetaforge/error.hpp"
#include "thetaforge/harness.hpp"
#include "thetaforge/identities.hpp"

using namespace thetaforge;

namespace {

PeriodMatrix tau_1d(Complex t) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = t;
    return PeriodMatrix(m);
}

const Complex kI(0.0, 1.0);

CVector zvec(std::initializer_list<Complex> entries) {
    CVector z(static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (const Complex& c : entries) z[i++] = c;
    return z;
}

} // namespace

TEST_CASE("shift formula") {
    SUBCASE("c = d = 0 is the identity case") {
        const PeriodMatrix tau = sample_tau(2, 1, 0);
        const auto rep = verify_shift(tau, sample_z(2, 1, 0), RationalVector::parse("1/8,1/4"),
                                      RationalVector::parse("3/8,0"), RationalVector::zero(2),
                                      RationalVector::zero(2));
        CHECK(rep.residual < 1e-14);
    }
    SUBCASE("half-integral shift at genus 1, against the oracle") {
        const PeriodMatrix tau = tau_1d(kI);
        const CVector z = zvec({Complex(0.2, 0.0)});
        const auto rep = verify_shift(tau, z, RationalVector::zero(1), RationalVector::zero(1),
                                      RationalVector::parse("1/2"), RationalVector::zero(1));
        CHECK(rep.residual < 1e-10);

        // Both sides independently by direct summation:
        // phase = e(-c^2 tau / 2 - c z) with c = 1/2, z = 0.2.
        const Complex lhs =
            oracle::direct_value(tau.entries(), zvec({Complex(0.2, 0.0) + kI * 0.5}), {0.0}, {0.0});
        const Complex phase = std::exp(Complex(0.0, 2.0 * std::numbers::pi) *
                                       (-0.5 * 0.25 * kI - 0.5 * 0.2));
        const Complex rhs = phase * oracle::direct_value(tau.entries(), z, {0.5}, {0.0});
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    SUBCASE("random eighth-integer characteristics at genus 2") {
        for (int i = 0; i < 6; ++i) {
            const PeriodMatrix tau = sample_tau(2, 13, static_cast<std::uint64_t>(i));
            SplitMix rng(mix_keys({13, tag_hash("shift-test"), static_cast<std::uint64_t>(i)}));
            const auto rep = verify_shift(tau, sample_z(2, 13, static_cast<std::uint64_t>(i)),
                                          random_char(rng, 2, 8), random_char(rng, 2, 8),
                                          random_char(rng, 2, 8), random_char(rng, 2, 8));
            CHECK(rep.residual < 1e-9);
        }
    }
}

TEST_CASE("doubling") {
    SUBCASE("a = beta = 0, z = 0 reduces to a two-term split") {
        const auto rep = verify_doubling(tau_1d(kI), CVector::Zero(1), RationalVector::zero(1),
                                         RationalVector::zero(1));
        CHECK(rep.residual < 1e-10);
        // theta[0,0](i,0) = theta[0,0](4i,0) + theta[1/2,0](4i,0), per the anchors
        CHECK(std::abs(1.0864348112133080 - (1.0000069746847124 + 0.086427836528595597)) < 1e-15);
    }
    SUBCASE("third-integer upper characteristic") {
        const auto rep = verify_doubling(tau_1d(kI), zvec({Complex(0.1, 0.0)}),
                                         RationalVector::parse("1/3"), RationalVector::parse("1/2"));
        CHECK(rep.residual < 1e-9);
    }
    SUBCASE("genus 2") {
        const auto rep = verify_doubling(sample_tau(2, 21, 0), sample_z(2, 21, 0),
                                         RationalVector::parse("1/4,1/2"),
                                         RationalVector::parse("1/2,0"));
        CHECK(rep.residual < 1e-9);
    }
    SUBCASE("non-half-integral beta is rejected") {
        CHECK_THROWS_AS(verify_doubling(tau_1d(kI), CVector::Zero(1), RationalVector::zero(1),
                                        RationalVector::parse("1/4")),
                        DomainError);
    }
}

TEST_CASE("addition theorem, forward form") {
    SUBCASE("a=b, z=w=0") {
        const auto rep = verify_addition_forward(tau_1d(kI), CVector::Zero(1), CVector::Zero(1),
                                                 RationalVector::parse("1/4"),
                                                 RationalVector::parse("1/4"),
                                                 RationalVector::zero(1), 1);
        CHECK(rep.residual < 1e-10);
    }
    SUBCASE("level 2, eighth-integer characteristics") {
        const auto rep = verify_addition_forward(
            tau_1d(kI), zvec({Complex(0.1, 0.0)}), zvec({Complex(-0.05, 0.2)}),
            RationalVector::parse("1/8"), RationalVector::parse("3/8"),
            RationalVector::parse("1/2"), 2);
        CHECK(rep.residual < 1e-9);
    }
    SUBCASE("genus 2") {
        SplitMix rng(404);
        const auto rep = verify_addition_forward(
            sample_tau(2, 31, 0), sample_z(2, 31, 0), sample_z(2, 31, 1), random_char(rng, 2, 4),
            random_char(rng, 2, 4), RationalVector::parse("0,1/2"), 1);
        CHECK(rep.residual < 1e-9);
    }
}

TEST_CASE("addition theorem, converse form") {
    SUBCASE("everything zero") {
        const auto rep = verify_addition_converse(tau_1d(kI), CVector::Zero(1), CVector::Zero(1),
                                                  RationalVector::zero(1), RationalVector::zero(1),
                                                  RationalVector::zero(1), RationalVector::zero(1),
                                                  1);
        CHECK(rep.residual < 1e-10);
    }
    SUBCASE("level 2 with half shifts") {
        const auto rep = verify_addition_converse(
            tau_1d(Complex(0.3, 1.1)), sample_z(1, 40, 0), sample_z(1, 40, 1),
            RationalVector::parse("1/4"), RationalVector::parse("3/4"),
            RationalVector::parse("1/2"), RationalVector::parse("1/2"), 2);
        CHECK(rep.residual < 1e-9);
    }
    SUBCASE("genus 2") {
        SplitMix rng(505);
        const auto rep = verify_addition_converse(
            sample_tau(2, 41, 0), sample_z(2, 41, 0), sample_z(2, 41, 1), random_char(rng, 2, 8),
            random_char(rng, 2, 8), RationalVector::parse("1/2,0"),
            RationalVector::parse("0,1/2"), 1);
        CHECK(rep.residual < 1e-9);
    }
}

TEST_CASE("derivation-chain consistency of the converse form") {
    for (int n : {1, 2}) {
        const auto rep = verify_addition_chain(
            sample_tau(1, 51, static_cast<std::uint64_t>(n)), sample_z(1, 51, 0), sample_z(1, 51, 1),
            RationalVector::parse("1/4"), RationalVector::parse("1/8"),
            RationalVector::parse("1/2"), RationalVector::parse("1/2"), n);
        CHECK(rep.residual < 1e-8);
    }
    const auto rep2 = verify_addition_chain(sample_tau(2, 52, 0), sample_z(2, 52, 0),
                                            sample_z(2, 52, 1), RationalVector::parse("1/4,0"),
                                            RationalVector::parse("0,1/4"),
                                            RationalVector::parse("1/2,1/2"),
                                            RationalVector::parse("0,1/2"), 1);
    CHECK(rep2.residual < 1e-8);
}

TEST_CASE("pairing matrices") {
    const PeriodMatrix tau = tau_1d(kI);

    SUBCASE("C^{aa} is a rank-one square, C symmetric under swap") {
        const PairingMatrix caa = build_C(tau, RationalVector::parse("1/4"),
                                          RationalVector::parse("1/4"), 1);
        // scalar case: 4 (theta')^2
        const oracle::Jet ref = oracle::direct_jet(4.0 * tau.entries(), CVector::Zero(1), {0.25},
                                                   {0.0});
        CHECK(std::abs(caa.entries(0, 0) - 4.0 * ref.grad[0] * ref.grad[0]) < 1e-12);

        const PairingMatrix cab = build_C(tau, RationalVector::parse("1/4"),
                                          RationalVector::parse("3/8"), 1);
        const PairingMatrix cba = build_C(tau, RationalVector::parse("3/8"),
                                          RationalVector::parse("1/4"), 1);
        CHECK((cab.entries - cba.entries).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("spec'd degenerate C: even-characteristic gradient kills the product") {
        const PairingMatrix c = build_C(tau, RationalVector::parse("1/4"),
                                        RationalVector::parse("1/2"), 1);
        const oracle::Jet g1 = oracle::direct_jet(4.0 * tau.entries(), CVector::Zero(1), {0.25},
                                                  {0.0});
        const oracle::Jet g2 = oracle::direct_jet(4.0 * tau.entries(), CVector::Zero(1), {0.5},
                                                  {0.0});
        CHECK(std::abs(c.entries(0, 0) - 4.0 * g1.grad[0] * g2.grad[0]) < 1e-12);
        CHECK(std::abs(c.entries(0, 0)) < 1e-12); // theta[1/2,0] is even
    }
    SUBCASE("A vanishes on the diagonal and flips sign under swap") {
        const RationalVector a = RationalVector::parse("1/8,0");
        const RationalVector b = RationalVector::parse("0,1/4");
        const RationalVector eps = RationalVector::parse("1/2,0");
        const PeriodMatrix t2 = sample_tau(2, 61, 0);
        CHECK(build_A(t2, a, a, eps, 2).entries.cwiseAbs().maxCoeff() < 1e-13);
        const CMatrix ab = build_A(t2, a, b, eps, 2).entries;
        const CMatrix ba = build_A(t2, b, a, eps, 2).entries;
        CHECK((ab + ba).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((ab - ab.transpose()).cwiseAbs().maxCoeff() < 1e-14); // symmetric in (i,j)
    }
    SUBCASE("scalar A matches the frozen oracle value") {
        // A for a=0, b=1/2, eps=0 at level 2, tau=i evaluates at 4i.
        const PairingMatrix a = build_A(tau, RationalVector::zero(1),
                                        RationalVector::parse("1/2"), RationalVector::zero(1), 2);
        CHECK(std::abs(a.entries(0, 0) - 0.85299070746504994) < 1e-12);
    }
}

TEST_CASE("A/C correspondence") {
    SUBCASE("exhaustive at genus 1, level 2") {
        const PeriodMatrix tau = tau_1d(kI);
        for (auto dir : {ACDirection::a, ACDirection::b}) {
            const auto reports = verify_AC(tau, 2, {}, dir, 7, 64, 1e-9);
            CHECK(reports.size() == 64);
            for (const auto& r : reports) CHECK(r.residual < 1e-9);
        }
    }
    SUBCASE("direction b with a = b: both sides vanish together") {
        const auto rep = verify_AC_tuple_b(tau_1d(kI), RationalVector::parse("1/4"),
                                           RationalVector::parse("1/4"),
                                           RationalVector::parse("1/2"), 2);
        CHECK(rep.residual < 1e-9);
    }
    SUBCASE("seeded genus-2 tuples") {
        const PeriodMatrix tau = sample_tau(2, 71, 0);
        const auto ra = verify_AC(tau, 2, {}, ACDirection::a, 71, 12, 1e-8);
        const auto rb = verify_AC(tau, 2, {}, ACDirection::b, 71, 12, 1e-8);
        for (const auto& r : ra) CHECK(r.residual < 1e-8);
        for (const auto& r : rb) CHECK(r.residual < 1e-8);
    }
    SUBCASE("round trip pins the normalization") {
        const auto rep = verify_AC_roundtrip(sample_tau(2, 72, 0), RationalVector::parse("1/8,0"),
                                             RationalVector::parse("1/8,1/4"),
                                             RationalVector::parse("1/2,0"), 2);
        CHECK(rep.residual < 1e-8);
    }
    SUBCASE("direction b rejects inadmissible pairs") {
        CHECK_THROWS_AS(verify_AC_tuple_b(tau_1d(kI), RationalVector::parse("1/8"),
                                          RationalVector::zero(1), RationalVector::zero(1), 2),
                        DomainError);
    }
}

TEST_CASE("cyclic identity") {
    SUBCASE("a = b = c vanishes identically") {
        const auto rep = verify_cyclic(tau_1d(kI), RationalVector::parse("1/4"),
                                       RationalVector::parse("1/4"), RationalVector::parse("1/4"),
                                       RationalVector::zero(1), 2);
        CHECK(rep.residual < 1e-14);
    }
    SUBCASE("spec'd genus-1 tuple") {
        const auto rep = verify_cyclic(tau_1d(kI), RationalVector::zero(1),
                                       RationalVector::parse("1/2"), RationalVector::parse("1/4"),
                                       RationalVector::zero(1), 2);
        CHECK(rep.residual < 1e-9);
    }
    SUBCASE("seeded genus-2 admissible triple") {
        SplitMix rng(808);
        const RationalVector a = random_char(rng, 2, 8);
        const RationalVector b = random_char(rng, 2, 4) + (-a);
        const RationalVector c = random_char(rng, 2, 4) + (-a);
        const auto rep = verify_cyclic(sample_tau(2, 81, 0), a, b, c,
                                       RationalVector::parse("1/2,0"), 2);
        CHECK(rep.residual < 1e-8);
    }
    SUBCASE("inadmissible triple is rejected") {
        CHECK_THROWS_AS(verify_cyclic(tau_1d(kI), RationalVector::parse("1/8"),
                                      RationalVector::zero(1), RationalVector::zero(1),
                                      RationalVector::zero(1), 2),
                        DomainError);
    }
}

TEST_CASE("identity residuals are stable under radius doubling") {
    TruncationPolicy base;
    TruncationPolicy doubled;
    doubled.radius_multiplier = 2;
    for (int i = 0; i < 4; ++i) {
        const PeriodMatrix tau = sample_tau(1, 91, static_cast<std::uint64_t>(i));
        SplitMix rng(mix_keys({91, static_cast<std::uint64_t>(i)}));
        const RationalVector a = random_char(rng, 1, 8), b = random_char(rng, 1, 8);
        const RationalVector c = random_char(rng, 1, 8), d = random_char(rng, 1, 8);
        const CVector z = sample_z(1, 91, static_cast<std::uint64_t>(i));
        const auto r1 = verify_shift(tau, z, a, b, c, d, base);
        const auto r2 = verify_shift(tau, z, a, b, c, d, doubled);
        CHECK(std::abs(r1.residual - r2.residual) < 1e-10);
    }
}

TEST_CASE("heat consistency check") {
    const auto rep1 = verify_heat_consistency(sample_tau(1, 95, 0), sample_z(1, 95, 0),
                                              RationalVector::parse("1/8"),
                                              RationalVector::parse("3/8"));
    CHECK(rep1.residual < 1e-9);
    const auto rep2 = verify_heat_consistency(sample_tau(2, 95, 1), sample_z(2, 95, 1),
                                              RationalVector::parse("1/4,1/2"),
                                              RationalVector::parse("0,1/8"));
    CHECK(rep2.residual < 1e-9);
}

TEST_CASE("report serialization carries the full record") {
    const auto rep = verify_shift(sample_tau(1, 97, 0), sample_z(1, 97, 0),
                                  RationalVector::parse("1/8"), RationalVector::parse("1/4"),
                                  RationalVector::parse("1/2"), RationalVector::zero(1));
    const nlohmann::json j = to_json(rep);
    CHECK(j.at("identity") == "shift");
    CHECK(j.at("pass") == rep.pass);
    CHECK(j.at("inputs").contains("tau"));
    CHECK(j.at("residual").get<double>() == rep.residual);
}
