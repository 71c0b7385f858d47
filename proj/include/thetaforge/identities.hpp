#ifndef THETAFORGE_IDENTITIES_HPP
#define THETAFORGE_IDENTITIES_HPP

#include <vector>

#include "thetaforge/pairing.hpp"
#include "thetaforge/report.hpp"

namespace thetaforge {

/// Shift formula: theta[a,b](tau, z + tau c + d) against
/// e(-c^t tau c / 2 - c^t(z+b+d)) * theta[a+c,b+d](tau, z).
IdentityReport verify_shift(const PeriodMatrix& tau, const CVector& z, const RationalVector& a,
                            const RationalVector& b, const RationalVector& c,
                            const RationalVector& d, const TruncationPolicy& policy = {},
                            double tol = 1e-8);

/// Doubling: theta[a,beta](tau, 2z) against the 2^g-term sum of order-4
/// constituents e(beta^t(2 eps + a)) theta[eps + a/2, 0](4 tau, 4z).
IdentityReport verify_doubling(const PeriodMatrix& tau, const CVector& z, const RationalVector& a,
                               const RationalVector& beta, const TruncationPolicy& policy = {},
                               double tol = 1e-8);

/// Bilinear addition, forward form: the product at 4n tau against the
/// phased half-characteristic sum at 2n tau.
IdentityReport verify_addition_forward(const PeriodMatrix& tau, const CVector& z, const CVector& w,
                                       const RationalVector& a, const RationalVector& b,
                                       const RationalVector& eps, int n,
                                       const TruncationPolicy& policy = {}, double tol = 1e-8);

/// Bilinear addition, converse form: the product at 2n tau against the
/// phased sum of 4n tau terms.
IdentityReport verify_addition_converse(const PeriodMatrix& tau, const CVector& z, const CVector& w,
                                        const RationalVector& a, const RationalVector& b,
                                        const RationalVector& gamma, const RationalVector& sigma,
                                        int n, const TruncationPolicy& policy = {},
                                        double tol = 1e-8);

/// Three-way consistency along the converse form's derivation: the direct
/// product, the intermediate half-level expression obtained from the shift
/// formula plus the forward form, and the final phased sum must agree.
IdentityReport verify_addition_chain(const PeriodMatrix& tau, const CVector& z, const CVector& w,
                                     const RationalVector& a, const RationalVector& b,
                                     const RationalVector& gamma, const RationalVector& sigma,
                                     int n, const TruncationPolicy& policy = {}, double tol = 1e-8);

/// A/C correspondence, one index tuple each way, plus the substitution
/// round-trip that pins the 2^g normalization factors.
IdentityReport verify_AC_tuple_a(const PeriodMatrix& tau, const RationalVector& a,
                                 const RationalVector& b, int n,
                                 const TruncationPolicy& policy = {}, double tol = 1e-8);
IdentityReport verify_AC_tuple_b(const PeriodMatrix& tau, const RationalVector& a,
                                 const RationalVector& b, const RationalVector& delta, int n,
                                 const TruncationPolicy& policy = {}, double tol = 1e-8);
IdentityReport verify_AC_roundtrip(const PeriodMatrix& tau, const RationalVector& a,
                                   const RationalVector& b, const RationalVector& delta, int n,
                                   const TruncationPolicy& policy = {}, double tol = 1e-8);

enum class ACDirection { a, b };

/// Sweeps the correspondence over index tuples: exhaustively for genus 1,
/// a seeded subset of max_tuples otherwise.  Direction b ranges over the
/// admissible pairs with a+b in ((1/2n)Z/Z)^g.
std::vector<IdentityReport> verify_AC(const PeriodMatrix& tau, int n,
                                      const TruncationPolicy& policy, ACDirection direction,
                                      std::uint64_t seed, int max_tuples, double tol = 1e-8);

/// Cyclic relation A^{ab}_eps theta[c,eps] + A^{bc}_eps theta[a,eps]
/// + A^{ca}_eps theta[b,eps] = 0, for admissible triples.
IdentityReport verify_cyclic(const PeriodMatrix& tau, const RationalVector& a,
                             const RationalVector& b, const RationalVector& c,
                             const RationalVector& eps, int n,
                             const TruncationPolicy& policy = {}, double tol = 1e-8);

/// Heat-equation consistency of one jet: the weighted tau-derivative matrix
/// against hessian/(4 pi i), plus a Richardson-extrapolated central
/// finite-difference probe of the same matrix.
IdentityReport verify_heat_consistency(const PeriodMatrix& tau, const CVector& z,
                                       const RationalVector& eps, const RationalVector& delta,
                                       const TruncationPolicy& policy = {}, double tol = 1e-9);

/// Exact admissibility test: does v lie on ((1/denom) Z/Z)^g?
bool on_grid(const RationalVector& v, long long denom);

} // namespace thetaforge

#endif
