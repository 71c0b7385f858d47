#include "thetaforge/moduli.hpp"

#include <algorithm>
#include <map>
#include <numbers>

#include "thetaforge/error.hpp"
#include "thetaforge/identities.hpp"

namespace thetaforge {

namespace {

constexpr double kRankTolerance = 1e-8;
constexpr double kFrameRankTolerance = 1e-10;
constexpr double kKernelSeparation = 1e4;
constexpr long long kMaxMinors = 3'000'000;

long long binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > kMaxMinors * 64) return kMaxMinors * 64;
    }
    return r;
}

} // namespace

ProjectivePoint ProjectivePoint::from(CVector raw) {
    if (raw.size() == 0) throw DomainError("projective point needs at least one coordinate");
    int idx = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        const double m = std::abs(raw[i]);
        if (m > best) {
            best = m;
            idx = static_cast<int>(i);
        }
    }
    if (best == 0.0) throw EvaluationError("projective point: zero coordinate vector");
    const Complex pivot = raw[idx];
    raw /= pivot;
    return ProjectivePoint{std::move(raw), idx};
}

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    if (p.coords.size() != q.coords.size())
        throw DomainError("chordal distance: dimension mismatch");
    const CVector u = p.coords / p.coords.norm();
    const CVector v = q.coords / q.coords.norm();
    // Minimal Euclidean distance over a common phase.  The optimal phase is
    // arg<u,v>; forming the difference vector directly keeps full precision
    // for nearly identical points, where sqrt(2 - 2|<u,v>|) would not.
    const Complex c = v.dot(u);
    const Complex phase = std::abs(c) > 0.0 ? c / std::abs(c) : Complex(1.0, 0.0);
    return (u - phase * v).norm();
}

ProjectivePoint th_map(const PeriodMatrix& tau, int n, const TruncationPolicy& policy) {
    if (n < 1) throw DomainError("th_map: level must be positive");
    const int g = tau.genus();
    const PeriodMatrix tn = tau.scale(n);
    const CVector z0 = CVector::Zero(g);
    const auto grid = char_grid(g, n);
    CVector coords(grid.size());
    const RationalVector zero = RationalVector::zero(g);
    double best = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        coords[static_cast<Eigen::Index>(i)] = theta_jet(tn, z0, grid[i], zero, policy).value;
        best = std::max(best, std::abs(coords[static_cast<Eigen::Index>(i)]));
    }
    if (best < 1e-12)
        throw EvaluationError("th_map: all theta constants below 1e-12, cannot normalize");
    return ProjectivePoint::from(std::move(coords));
}

GradientFrame phi_map(const PeriodMatrix& tau, int n, const TruncationPolicy& policy) {
    if (n < 1) throw DomainError("phi_map: level must be positive");
    const int g = tau.genus();
    const PeriodMatrix t4 = tau.scale(4ll * n);
    const CVector z0 = CVector::Zero(g);
    const auto grid = char_grid(g, 4ll * n);
    CMatrix m(g, grid.size());
    const RationalVector zero = RationalVector::zero(g);
    for (size_t i = 0; i < grid.size(); ++i)
        m.col(static_cast<Eigen::Index>(i)) = theta_jet(t4, z0, grid[i], zero, policy).gradient;
    return GradientFrame{std::move(m), g, n};
}

Complex jacobian_det(const PeriodMatrix& tau_arg,
                     const std::vector<std::pair<RationalVector, RationalVector>>& chars,
                     const TruncationPolicy& policy) {
    const int g = tau_arg.genus();
    if (static_cast<int>(chars.size()) != g)
        throw DomainError("jacobian_det: need exactly genus characteristic pairs");
    const CVector z0 = CVector::Zero(g);
    CMatrix m(g, g);
    for (int k = 0; k < g; ++k)
        m.col(k) = theta_jet(tau_arg, z0, chars[k].first, chars[k].second, policy).gradient;
    return std::pow(std::numbers::pi, -g) * m.determinant();
}

PlueckerVector pluecker(const GradientFrame& frame) {
    const int g = frame.genus;
    const long long ncols = frame.matrix.cols();
    if (g < 1 || ncols < g) throw DomainError("pluecker: malformed frame");

    Eigen::JacobiSVD<CMatrix> svd(frame.matrix);
    const auto& sv = svd.singularValues();
    if (sv[g - 1] <= kFrameRankTolerance * sv[0])
        throw DegenerateFrameError("pluecker: frame rank below genus (sigma ratio " +
                                   std::to_string(sv[g - 1] / sv[0]) + ")");

    const long long count = binomial(ncols, g);
    if (count > kMaxMinors)
        throw Error("pluecker: " + std::to_string(count) + " minors exceed the supported size");

    CVector minors(count);
    std::vector<long long> idx(g);
    for (int i = 0; i < g; ++i) idx[i] = i;
    CMatrix sub(g, g);
    long long at = 0;
    for (;;) {
        for (int k = 0; k < g; ++k) sub.col(k) = frame.matrix.col(idx[k]);
        minors[at++] = sub.determinant();
        int i = g - 1;
        while (i >= 0 && idx[i] == ncols - g + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < g; ++k) idx[k] = idx[k - 1] + 1;
    }
    return PlueckerVector{ProjectivePoint::from(std::move(minors))};
}

RankCheckResult rank_check(const PeriodMatrix& tau, int n, const RationalVector& eps,
                           const RationalVector& delta, const TruncationPolicy& policy) {
    if (n < 1) throw DomainError("rank_check: level must be positive");
    const int g = tau.genus();
    if (!eps.is_half_integral() || !delta.is_half_integral())
        throw DomainError("rank_check: eps and delta must be half-integral");

    const auto grid = char_grid(g, 2ll * n);
    const long long rows = static_cast<long long>(grid.size());
    const int cols = 1 + g * (g + 1) / 2;
    if (rows < cols)
        throw DomainError("rank_check: only " + std::to_string(rows) + " characteristics for " +
                          std::to_string(cols) +
                          " columns; the lemma needs (2n)^g >= g(g+1)/2 + 1");

    const PeriodMatrix t2 = tau.scale(2ll * n);
    const CVector z0 = CVector::Zero(g);
    const RatVec offset = delta.raw().scaled(Rat(1, 2ll * n));
    CMatrix m(rows, cols);
    for (long long r = 0; r < rows; ++r) {
        const ThetaJet jet = theta_jet_raw(t2, z0, grid[static_cast<size_t>(r)].raw() + offset,
                                           eps.raw(), policy);
        m(r, 0) = jet.value;
        int c = 1;
        for (int i = 0; i < g; ++i)
            for (int j = i; j < g; ++j) m(r, c++) = jet.hessian(i, j);
    }
    Eigen::JacobiSVD<CMatrix> svd(m);
    RankCheckResult res;
    res.singular_values = svd.singularValues();
    res.pass = res.singular_values[cols - 1] > kRankTolerance * res.singular_values[0];
    return res;
}

namespace {

/// Frame-derived C matrix for literal indices: both indices are reduced mod
/// 1 (upper-characteristic shifts are phase-free) and looked up as columns.
CMatrix frame_c_matrix(const GradientFrame& frame, const RatVec& c, const RatVec& d) {
    const long long denom = 4ll * frame.level_n;
    const long long ci = char_grid_index(RationalVector(c), denom);
    const long long di = char_grid_index(RationalVector(d), denom);
    const CVector gc = frame.matrix.col(ci);
    const CVector gd = frame.matrix.col(di);
    return 2.0 * (gc * gd.transpose() + gd * gc.transpose());
}

/// A^{xy}_gamma assembled from the frame through the A/C correspondence.
CMatrix frame_a_matrix(const GradientFrame& frame, const RatVec& x, const RatVec& y,
                       const RationalVector& gamma) {
    const int g = frame.genus;
    const RatVec sum_half = (x + y).half();
    const RatVec diff_half = (x - y).half();
    CMatrix acc = CMatrix::Zero(g, g);
    for (const RationalVector& eps : char_grid(g, 2)) {
        const Rat phase_arg = (x + y + eps.raw().scaled(Rat(2))).dot(gamma.raw());
        acc += cexp(phase_arg) *
               frame_c_matrix(frame, eps.raw() + sum_half, eps.raw() + diff_half);
    }
    return acc;
}

} // namespace

ProjectivePoint reconstruct_constants(const GradientFrame& frame, const RationalVector& gamma,
                                      const RationalVector& delta, int n,
                                      const TruncationPolicy& policy) {
    (void)policy; // the frame already carries all evaluations
    if (n < 2) throw DomainError("reconstruct_constants: requires level n > 1");
    if (frame.level_n != n) throw DomainError("reconstruct_constants: frame level mismatch");
    const int g = frame.genus;
    if (!gamma.is_half_integral() || !delta.is_half_integral())
        throw DomainError("reconstruct_constants: gamma and delta must be half-integral");

    const auto grid = char_grid(g, 2ll * n);
    const int m = static_cast<int>(grid.size());
    const RatVec offset = delta.raw().scaled(Rat(1, 2ll * n));
    std::vector<RatVec> upper;
    upper.reserve(grid.size());
    for (const auto& a : grid) upper.push_back(a.raw() + offset);

    // All pairwise A matrices on the coset, ranked by magnitude; the largest
    // ones anchor the cyclic-relation system.
    struct PairA {
        int x, y;
        CMatrix a;
        double norm;
    };
    std::vector<PairA> pairs;
    pairs.reserve(static_cast<size_t>(m) * (m - 1) / 2);
    for (int x = 0; x < m; ++x)
        for (int y = x + 1; y < m; ++y) {
            CMatrix a = frame_a_matrix(frame, upper[x], upper[y], gamma);
            const double norm = a.cwiseAbs().maxCoeff();
            pairs.push_back({x, y, std::move(a), norm});
        }
    std::sort(pairs.begin(), pairs.end(),
              [](const PairA& l, const PairA& r) { return l.norm > r.norm; });
    const int anchors = std::min<int>(8, static_cast<int>(pairs.size()));

    const int entries = g * (g + 1) / 2;
    const int rows = anchors * (m - 2) * entries;
    CMatrix system = CMatrix::Zero(rows, m);
    int row = 0;
    for (int p = 0; p < anchors; ++p) {
        const int x = pairs[p].x, y = pairs[p].y;
        for (int a = 0; a < m; ++a) {
            if (a == x || a == y) continue;
            // A^{ax} t_y + A^{xy} t_a + A^{ya} t_x = 0
            const CMatrix a_ax = frame_a_matrix(frame, upper[a], upper[x], gamma);
            const CMatrix a_ya = frame_a_matrix(frame, upper[y], upper[a], gamma);
            for (int i = 0; i < g; ++i)
                for (int j = i; j < g; ++j) {
                    system(row, y) = a_ax(i, j);
                    system(row, a) = pairs[p].a(i, j);
                    system(row, x) = a_ya(i, j);
                    ++row;
                }
        }
    }

    Eigen::JacobiSVD<CMatrix> svd(system, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smallest = sv[m - 1];
    const double second = sv[m - 2];
    if (second < kKernelSeparation * smallest)
        throw AmbiguousReconstructionError(
            "reconstruction kernel not one-dimensional (sigma_{m-1}/sigma_m = " +
            std::to_string(second / std::max(smallest, 1e-300)) + ")");
    return ProjectivePoint::from(svd.matrixV().col(m - 1));
}

ProjectivePoint product_reconstruction(const GradientFrame& frame, const RationalVector& a,
                                       const RationalVector& b, const RationalVector& sigma,
                                       const RationalVector& delta, int n,
                                       const TruncationPolicy& policy) {
    if (n < 2) throw DomainError("product_reconstruction: requires level n > 1");
    const int g = frame.genus;
    if (!sigma.is_half_integral() || !delta.is_half_integral())
        throw DomainError("product_reconstruction: sigma and delta must be half-integral");
    const RatVec admissible = a.raw() + b.raw() - delta.raw().scaled(Rat(1, n));
    for (int i = 0; i < g; ++i)
        if ((admissible[i] * Rat(n)).denominator() != 1)
            throw DomainError("product_reconstruction: a+b-delta/n not in ((1/n)Z/Z)^g");

    const ProjectivePoint constants = reconstruct_constants(frame, sigma, delta, n, policy);
    const RatVec offset = delta.raw().scaled(Rat(1, 2ll * n));
    const RatVec sum_half = (a.raw() + b.raw()).half();
    const RatVec diff_half = (a.raw() - b.raw()).half();
    auto lookup = [&](const RatVec& upper) {
        const RationalVector reduced(upper - offset);
        return constants.coords[char_grid_index(reduced, 2ll * n)];
    };

    const auto gammas = char_grid(g, 2);
    CVector prods(gammas.size());
    for (size_t gi = 0; gi < gammas.size(); ++gi) {
        const RationalVector& gam = gammas[gi];
        Complex acc(0.0, 0.0);
        for (const RationalVector& eps : gammas) {
            const Rat phase_arg =
                (a.raw() + b.raw() + eps.raw().scaled(Rat(2))).dot(gam.raw());
            acc += cexp(phase_arg) * lookup(eps.raw() + sum_half) * lookup(eps.raw() + diff_half);
        }
        prods[static_cast<Eigen::Index>(gi)] = acc;
    }
    if (prods.cwiseAbs().maxCoeff() < 1e-12)
        throw EvaluationError("product_reconstruction: all products below 1e-12");
    return ProjectivePoint::from(std::move(prods));
}

std::pair<RationalVector, RationalVector> nonvanishing_search(const PeriodMatrix& tau,
                                                              const RationalVector& gamma,
                                                              const RationalVector& sigma,
                                                              const RationalVector& delta, int n,
                                                              const TruncationPolicy& policy) {
    if (n < 2) throw DomainError("nonvanishing_search: requires level n > 1");
    const int g = tau.genus();
    const PeriodMatrix tn = tau.scale(n);
    const CVector z0 = CVector::Zero(g);
    const RatVec lower1 = gamma.raw() + sigma.raw();
    const RatVec dn = delta.raw().scaled(Rat(1, n));
    const auto grid2n = char_grid(g, 2ll * n);
    const auto gridn = char_grid(g, n);
    constexpr double kNonzero = 1e-8;

    for (const auto& a : grid2n) {
        const Complex v1 = theta_jet_raw(tn, z0, a.raw(), lower1, policy).value;
        if (std::abs(v1) < kNonzero) continue;
        for (const auto& s : gridn) {
            const RationalVector b(dn - a.raw() + s.raw());
            const Complex v2 = theta_jet(tn, z0, b, gamma, policy).value;
            if (std::abs(v1 * v2) > kNonzero) return {a, b};
        }
    }
    throw EvaluationError("nonvanishing_search: no admissible pair found (unexpected for n > 1)");
}

SeparationResult separation_probe(const PeriodMatrix& tau1, const PeriodMatrix& tau2, int n,
                                  const TruncationPolicy& policy) {
    if (tau1.genus() != tau2.genus()) throw DomainError("separation_probe: genus mismatch");
    const GradientFrame f1 = phi_map(tau1, n, policy);
    const GradientFrame f2 = phi_map(tau2, n, policy);
    SeparationResult res;
    res.pluecker_distance = chordal_distance(pluecker(f1).point, pluecker(f2).point);
    const RationalVector zero = RationalVector::zero(tau1.genus());
    res.reconstruction_distance =
        chordal_distance(reconstruct_constants(f1, zero, zero, n, policy),
                         reconstruct_constants(f2, zero, zero, n, policy));
    return res;
}

} // namespace thetaforge
