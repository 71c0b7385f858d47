#ifndef THETAFORGE_MODULI_HPP
#define THETAFORGE_MODULI_HPP

#include <utility>
#include <vector>

#include "thetaforge/theta.hpp"

namespace thetaforge {

/// Point of a complex projective space, stored with the max-modulus
/// coordinate scaled to 1.
struct ProjectivePoint {
    CVector coords;
    int norm_index = 0;

    static ProjectivePoint from(CVector raw);
};

/// Phase-invariant metric: normalize to unit vectors, then the minimal
/// Euclidean distance over a common phase, sqrt(2 - 2|<u,v>|).
double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);

/// g x (4n)^g matrix of theta gradients grad_{z=0} theta[a,0](4n tau, z),
/// columns indexed by a in ((1/4n)Z/Z)^g in lexicographic order.
struct GradientFrame {
    CMatrix matrix;
    int genus = 0;
    int level_n = 0;
};

/// Vector of all g x g minors of a frame, indexed by g-element column
/// subsets in lexicographic order, normalized projectively.
struct PlueckerVector {
    ProjectivePoint point;
};

/// Theta-constant map: the n^g values theta[a,0](n tau, 0) as a projective
/// point, a in ((1/n)Z/Z)^g lexicographic.
ProjectivePoint th_map(const PeriodMatrix& tau, int n, const TruncationPolicy& policy = {});

GradientFrame phi_map(const PeriodMatrix& tau, int n, const TruncationPolicy& policy = {});

/// pi^{-g} times the wedge of the g gradients of theta[eps_k,delta_k] at
/// z=0.  The caller supplies the full first argument (4n tau where the
/// level-n determinants are meant).
Complex jacobian_det(const PeriodMatrix& tau_arg,
                     const std::vector<std::pair<RationalVector, RationalVector>>& chars,
                     const TruncationPolicy& policy = {});

PlueckerVector pluecker(const GradientFrame& frame);

struct RankCheckResult {
    Eigen::VectorXd singular_values; // descending
    bool pass = false;               // sigma_min / sigma_max > 1e-8
};

/// Rank of the (2n)^g x (g(g+1)/2 + 1) matrix of values and Hessians of
/// theta[a + delta/2n, eps](2n tau) over all a in ((1/2n)Z/Z)^g.
RankCheckResult rank_check(const PeriodMatrix& tau, int n, const RationalVector& eps,
                           const RationalVector& delta, const TruncationPolicy& policy = {});

/// Recovers the projective point {theta[a + delta/2n, gamma](2n tau)} over
/// a in ((1/2n)Z/Z)^g from the level-4n gradient frame alone, by assembling
/// the cyclic relations among the frame-derived A matrices and extracting
/// the one-dimensional kernel.
ProjectivePoint reconstruct_constants(const GradientFrame& frame, const RationalVector& gamma,
                                      const RationalVector& delta, int n,
                                      const TruncationPolicy& policy = {});

/// Recovers {theta[a,gamma+sigma](n tau) theta[b,gamma](n tau)} over all
/// half-integral gamma from the frame, for admissible a, b (exact check of
/// a + b - delta/n in ((1/n)Z/Z)^g).
ProjectivePoint product_reconstruction(const GradientFrame& frame, const RationalVector& a,
                                       const RationalVector& b, const RationalVector& sigma,
                                       const RationalVector& delta, int n,
                                       const TruncationPolicy& policy = {});

/// Finds admissible (a, b) with theta[a,gamma+sigma](n tau) theta[b,gamma](n tau)
/// away from zero; guaranteed to exist for n > 1.
std::pair<RationalVector, RationalVector> nonvanishing_search(const PeriodMatrix& tau,
                                                              const RationalVector& gamma,
                                                              const RationalVector& sigma,
                                                              const RationalVector& delta, int n,
                                                              const TruncationPolicy& policy = {});

struct SeparationResult {
    double pluecker_distance = 0.0;
    double reconstruction_distance = 0.0;
};

/// Empirical separation probe: chordal distances between the Pluecker
/// images and between the reconstructed constant points of two tau.
SeparationResult separation_probe(const PeriodMatrix& tau1, const PeriodMatrix& tau2, int n,
                                  const TruncationPolicy& policy = {});

} // namespace thetaforge

#endif
