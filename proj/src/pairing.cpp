#include "thetaforge/pairing.hpp"

#include "thetaforge/error.hpp"

namespace thetaforge {

CMatrix c_matrix_raw(const PeriodMatrix& tau, const RatVec& a, const RatVec& b, int n,
                     const TruncationPolicy& policy) {
    if (n < 1) throw DomainError("pairing matrix: level must be positive");
    const int g = tau.genus();
    const PeriodMatrix t4 = tau.scale(4ll * n);
    const CVector z0 = CVector::Zero(g);
    const RatVec zero = RatVec::zero(g);
    const CVector ga = theta_jet_raw(t4, z0, a, zero, policy).gradient;
    const CVector gb = theta_jet_raw(t4, z0, b, zero, policy).gradient;
    return 2.0 * (ga * gb.transpose() + gb * ga.transpose());
}

CMatrix a_matrix_raw(const PeriodMatrix& tau, const RatVec& a, const RatVec& b, const RatVec& eps,
                     int n, const TruncationPolicy& policy) {
    if (n < 1) throw DomainError("pairing matrix: level must be positive");
    const int g = tau.genus();
    const PeriodMatrix t2 = tau.scale(2ll * n);
    const CVector z0 = CVector::Zero(g);
    const ThetaJet ja = theta_jet_raw(t2, z0, a, eps, policy);
    const ThetaJet jb = theta_jet_raw(t2, z0, b, eps, policy);
    return ja.hessian * jb.value - ja.value * jb.hessian;
}

PairingMatrix build_C(const PeriodMatrix& tau, const RationalVector& a, const RationalVector& b,
                      int n, const TruncationPolicy& policy) {
    return PairingMatrix{c_matrix_raw(tau, a.raw(), b.raw(), n, policy),
                         PairingKind::C,
                         a,
                         b,
                         RationalVector::zero(tau.genus()),
                         n,
                         tau};
}

PairingMatrix build_A(const PeriodMatrix& tau, const RationalVector& a, const RationalVector& b,
                      const RationalVector& eps, int n, const TruncationPolicy& policy) {
    if (!eps.is_half_integral())
        throw DomainError("pairing matrix A: the lower characteristic must be half-integral");
    return PairingMatrix{a_matrix_raw(tau, a.raw(), b.raw(), eps.raw(), n, policy),
                         PairingKind::A,
                         a,
                         b,
                         eps,
                         n,
                         tau};
}

} // namespace thetaforge
