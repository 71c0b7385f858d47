#include "thetaforge/identities.hpp"

#include <chrono>
#include <map>
#include <numbers>

#include "thetaforge/error.hpp"
#include "thetaforge/rng.hpp"

namespace thetaforge {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

nlohmann::json cplx_json(const Complex& c) { return nlohmann::json::array({c.real(), c.imag()}); }

nlohmann::json cvec_json(const CVector& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cplx_json(v[i]));
    return a;
}

const std::vector<RationalVector>& half_grid(int g) {
    static thread_local std::map<int, std::vector<RationalVector>> cache;
    auto it = cache.find(g);
    if (it == cache.end()) it = cache.emplace(g, char_grid(g, 2)).first;
    return it->second;
}

CVector rat_shift(const CVector& z, const RatVec& r) {
    CVector out = z;
    for (int i = 0; i < r.size(); ++i) out[i] += rat_to_double(r[i]);
    return out;
}

// e(w) for a complex exponent of the quadratic/linear kind appearing in the
// shift formula.
Complex cexp_complex(const Complex& w) {
    return std::exp(Complex(0.0, 2.0 * std::numbers::pi) * w);
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

nlohmann::json to_json(const IdentityReport& r) {
    return nlohmann::json{{"identity", r.identity}, {"genus", r.genus},
                          {"level", r.level},       {"seed", r.seed},
                          {"inputs", r.inputs},     {"residual", r.residual},
                          {"scale", r.scale},       {"tolerance", r.tolerance},
                          {"pass", r.pass},         {"degraded", r.degraded}};
}

bool on_grid(const RationalVector& v, long long denom) {
    for (int i = 0; i < v.size(); ++i)
        if ((v[i] * Rat(denom)).denominator() != 1) return false;
    return true;
}

IdentityReport verify_shift(const PeriodMatrix& tau, const CVector& z, const RationalVector& a,
                            const RationalVector& b, const RationalVector& c,
                            const RationalVector& d, const TruncationPolicy& policy, double tol) {
    const auto t0 = Clock::now();
    const int g = tau.genus();
    IdentityReport rep;
    rep.identity = "shift";
    rep.genus = g;

    CVector shifted = z;
    const std::vector<double> cd = c.to_doubles();
    const std::vector<double> dd = d.to_doubles();
    for (int j = 0; j < g; ++j) {
        Complex acc(0.0, 0.0);
        for (int k = 0; k < g; ++k) acc += tau(j, k) * cd[k];
        shifted[j] += acc + dd[j];
    }

    const ThetaJet lhs_jet = theta_jet(tau, shifted, a, b, policy);

    // e(-c^t tau c / 2 - c^t z) times the exact rational part e(-c^t (b+d)).
    Complex quad(0.0, 0.0);
    for (int j = 0; j < g; ++j) {
        Complex row(0.0, 0.0);
        for (int k = 0; k < g; ++k) row += tau(j, k) * cd[k];
        quad += cd[j] * (0.5 * row + z[j]);
    }
    const Complex phase = cexp_complex(-quad) * cexp(-c.raw().dot(b.raw() + d.raw()));
    const ThetaJet rhs_jet = theta_jet_raw(tau, z, a.raw() + c.raw(), b.raw() + d.raw(), policy);

    const Complex lhs = lhs_jet.value;
    const Complex rhs = phase * rhs_jet.value;
    rep.scale = residual_scale({lhs, rhs});
    rep.residual = std::abs(lhs - rhs) / rep.scale;
    rep.degraded = lhs_jet.degraded || rhs_jet.degraded;
    rep.inputs = {{"tau", tau.digest()}, {"z", cvec_json(z)}, {"a", a.str()},
                  {"b", b.str()},        {"c", c.str()},      {"d", d.str()}};
    rep.finish(tol);
    rep.wall_ms = ms_since(t0);
    return rep;
}

IdentityReport verify_doubling(const PeriodMatrix& tau, const CVector& z, const RationalVector& a,
                               const RationalVector& beta, const TruncationPolicy& policy,
                               double tol) {
    const auto t0 = Clock::now();
    const int g = tau.genus();
    if (!beta.is_half_integral())
        throw DomainError("doubling: beta must be half-integral");
    IdentityReport rep;
    rep.identity = "doubling";
    rep.genus = g;

    bool degraded = false;
    const ThetaJet lhs_jet = theta_jet(tau, 2.0 * z, a, beta, policy);
    degraded |= lhs_jet.degraded;

    const PeriodMatrix tau4 = tau.scale(4);
    const RatVec zero = RatVec::zero(g);
    Complex rhs(0.0, 0.0);
    double term_scale = 0.0;
    for (const RationalVector& eps : half_grid(g)) {
        const Rat phase_arg = beta.raw().dot(eps.raw().scaled(Rat(2)) + a.raw());
        const ThetaJet j = theta_jet_raw(tau4, 4.0 * z, eps.raw() + a.raw().half(), zero, policy);
        degraded |= j.degraded;
        const Complex term = cexp(phase_arg) * j.value;
        rhs += term;
        term_scale = std::max(term_scale, std::abs(term));
    }

    rep.scale = std::max(residual_scale({lhs_jet.value, rhs}), term_scale);
    rep.residual = std::abs(lhs_jet.value - rhs) / rep.scale;
    rep.degraded = degraded;
    rep.inputs = {{"tau", tau.digest()}, {"z", cvec_json(z)}, {"a", a.str()}, {"beta", beta.str()}};
    rep.finish(tol);
    rep.wall_ms = ms_since(t0);
    return rep;
}

IdentityReport verify_addition_forward(const PeriodMatrix& tau, const CVector& z, const CVector& w,
                                       const RationalVector& a, const RationalVector& b,
                                       const RationalVector& eps, int n,
                                       const TruncationPolicy& policy, double tol) {
    const auto t0 = Clock::now();
    const int g = tau.genus();
    if (n < 1) throw DomainError("addition: level must be positive");
    if (!eps.is_half_integral()) throw DomainError("addition: eps must be half-integral");
    IdentityReport rep;
    rep.identity = "addition-forward";
    rep.genus = g;
    rep.level = n;

    bool degraded = false;
    const PeriodMatrix t4 = tau.scale(4ll * n);
    const PeriodMatrix t2 = tau.scale(2ll * n);
    const double s4 = 4.0 * n, s2 = 2.0 * n;

    const ThetaJet f1 = theta_jet(t4, s4 * z, a, eps, policy);
    const ThetaJet f2 = theta_jet(t4, s4 * w, b, eps, policy);
    degraded |= f1.degraded || f2.degraded;
    const Complex lhs = f1.value * f2.value;

    Complex rhs(0.0, 0.0);
    double term_scale = 0.0;
    for (const RationalVector& sig : half_grid(g)) {
        const Complex phase = cexp(-Rat(2) * a.raw().dot(sig.raw()));
        const ThetaJet p = theta_jet_raw(t2, s2 * (z + w), a.raw() + b.raw(),
                                         sig.raw() + eps.raw(), policy);
        const ThetaJet q =
            theta_jet_raw(t2, s2 * (z - w), a.raw() - b.raw(), sig.raw(), policy);
        degraded |= p.degraded || q.degraded;
        const Complex term = phase * p.value * q.value;
        rhs += term;
        term_scale = std::max(term_scale, std::abs(term));
    }
    rhs /= std::pow(2.0, g);

    rep.scale = std::max(residual_scale({lhs, rhs}), term_scale / std::pow(2.0, g));
    rep.residual = std::abs(lhs - rhs) / rep.scale;
    rep.degraded = degraded;
    rep.inputs = {{"tau", tau.digest()}, {"z", cvec_json(z)}, {"w", cvec_json(w)},
                  {"a", a.str()},        {"b", b.str()},      {"eps", eps.str()}};
    rep.finish(tol);
    rep.wall_ms = ms_since(t0);
    return rep;
}

IdentityReport verify_addition_converse(const PeriodMatrix& tau, const CVector& z, const CVector& w,
                                        const RationalVector& a, const RationalVector& b,
                                        const RationalVector& gamma, const RationalVector& sigma,
                                        int n, const TruncationPolicy& policy, double tol) {
    const auto t0 = Clock::now();
    const int g = tau.genus();
    if (n < 1) throw DomainError("addition: level must be positive");
    if (!gamma.is_half_integral() || !sigma.is_half_integral())
        throw DomainError("addition: gamma and sigma must be half-integral");
    IdentityReport rep;
    rep.identity = "addition-converse";
    rep.genus = g;
    rep.level = n;

    bool degraded = false;
    const PeriodMatrix t4 = tau.scale(4ll * n);
    const PeriodMatrix t2 = tau.scale(2ll * n);
    const double s2 = 2.0 * n;

    const ThetaJet f1 = theta_jet_raw(t2, s2 * z, a.raw(), gamma.raw() + sigma.raw(), policy);
    const ThetaJet f2 = theta_jet(t2, s2 * w, b, gamma, policy);
    degraded |= f1.degraded || f2.degraded;
    const Complex lhs = f1.value * f2.value;

    const RatVec half_sum = (a.raw() + b.raw()).half();
    const RatVec half_diff = (a.raw() - b.raw()).half();
    Complex rhs(0.0, 0.0);
    double term_scale = 0.0;
    for (const RationalVector& eps : half_grid(g)) {
        const Rat phase_arg =
            (a.raw() + b.raw() + eps.raw().scaled(Rat(2))).dot(gamma.raw());
        const ThetaJet p =
            theta_jet_raw(t4, s2 * (z + w), eps.raw() + half_sum, sigma.raw(), policy);
        const ThetaJet q =
            theta_jet_raw(t4, s2 * (z - w), eps.raw() + half_diff, sigma.raw(), policy);
        degraded |= p.degraded || q.degraded;
        const Complex term = cexp(phase_arg) * p.value * q.value;
        rhs += term;
        term_scale = std::max(term_scale, std::abs(term));
    }

    rep.scale = std::max(residual_scale({lhs, rhs}), term_scale);
    rep.residual = std::abs(lhs - rhs) / rep.scale;
    rep.degraded = degraded;
    rep.inputs = {{"tau", tau.digest()}, {"z", cvec_json(z)},     {"w", cvec_json(w)},
                  {"a", a.str()},        {"b", b.str()},          {"gamma", gamma.str()},
                  {"sigma", sigma.str()}};
    rep.finish(tol);
    rep.wall_ms = ms_since(t0);
    return rep;
}

IdentityReport verify_addition_chain(const PeriodMatrix& tau, const CVector& z, const CVector& w,
                                     const RationalVector& a, const RationalVector& b,
                                     const RationalVector& gamma, const RationalVector& sigma,
                                     int n, const TruncationPolicy& policy, double tol) {
    const auto t0 = Clock::now();
    const int g = tau.genus();
    if (n < 1) throw DomainError("addition: level must be positive");
    if (!gamma.is_half_integral() || !sigma.is_half_integral())
        throw DomainError("addition: gamma and sigma must be half-integral");
    IdentityReport rep;
    rep.identity = "addition-chain";
    rep.genus = g;
    rep.level = n;

    bool degraded = false;
    const PeriodMatrix t2 = tau.scale(2ll * n);
    const PeriodMatrix tn = n == 1 ? tau : tau.scale(n);
    const double s2 = 2.0 * n, sn = static_cast<double>(n);

    const ThetaJet f1 = theta_jet_raw(t2, s2 * z, a.raw(), gamma.raw() + sigma.raw(), policy);
    const ThetaJet f2 = theta_jet(t2, s2 * w, b, gamma, policy);
    degraded |= f1.degraded || f2.degraded;
    const Complex direct = f1.value * f2.value;

    // Intermediate expression: shift the lower characteristics into the
    // argument, then apply the forward form at half level.
    const CVector zp = rat_shift(sn * (z + w), gamma.raw() + sigma.raw().half());
    const CVector zm = rat_shift(sn * (z - w), sigma.raw().half());
    Complex middle(0.0, 0.0);
    for (const RationalVector& mu : half_grid(g)) {
        const Complex phase = cexp(-Rat(2) * a.raw().dot(mu.raw()));
        const ThetaJet p = theta_jet_raw(tn, zp, a.raw() + b.raw(), mu.raw(), policy);
        const ThetaJet q = theta_jet_raw(tn, zm, a.raw() - b.raw(), mu.raw(), policy);
        degraded |= p.degraded || q.degraded;
        middle += phase * p.value * q.value;
    }
    middle /= std::pow(2.0, g);

    const IdentityReport conv =
        verify_addition_converse(tau, z, w, a, b, gamma, sigma, n, policy, tol);
    degraded |= conv.degraded;

    rep.scale = residual_scale({direct, middle});
    rep.residual =
        std::max(std::abs(direct - middle) / rep.scale, conv.residual);
    rep.degraded = degraded;
    rep.inputs = {{"tau", tau.digest()}, {"z", cvec_json(z)},     {"w", cvec_json(w)},
                  {"a", a.str()},        {"b", b.str()},          {"gamma", gamma.str()},
                  {"sigma", sigma.str()}};
    rep.finish(tol);
    rep.wall_ms = ms_since(t0);
    return rep;
}

IdentityReport verify_AC_tuple_a(const PeriodMatrix& tau, const RationalVector& a,
                                 const RationalVector& b, int n, const TruncationPolicy& policy,
                                 double tol) {
    const auto t0 = Clock::now();
    const int g = tau.genus();
    IdentityReport rep;
    rep.identity = "ac-theorem-a";
    rep.genus = g;
    rep.level = n;

    const CMatrix lhs = c_matrix_raw(tau, a.raw(), b.raw(), n, policy);
    CMatrix rhs = CMatrix::Zero(g, g);
    for (const RationalVector& sig : half_grid(g)) {
        const Complex phase = cexp(-Rat(2) * a.raw().dot(sig.raw()));
        rhs += phase * a_matrix_raw(tau, a.raw() + b.raw(), a.raw() - b.raw(), sig.raw(), n, policy);
    }
    rhs /= std::pow(2.0, g);

    rep.scale = residual_scale(lhs, rhs);
    rep.residual = max_abs(lhs - rhs) / rep.scale;
    rep.inputs = {{"tau", tau.digest()}, {"a", a.str()}, {"b", b.str()}};
    rep.finish(tol);
    rep.wall_ms = ms_since(t0);
    return rep;
}

IdentityReport verify_AC_tuple_b(const PeriodMatrix& tau, const RationalVector& a,
                                 const RationalVector& b, const RationalVector& delta, int n,
                                 const TruncationPolicy& policy, double tol) {
    const auto t0 = Clock::now();
    const int g = tau.genus();
    if (!delta.is_half_integral()) throw DomainError("ac-theorem: delta must be half-integral");
    if (!on_grid(a + b, 2ll * n))
        throw DomainError("ac-theorem direction b requires a+b in ((1/2n)Z/Z)^g");
    IdentityReport rep;
    rep.identity = "ac-theorem-b";
    rep.genus = g;
    rep.level = n;

    const CMatrix lhs = a_matrix_raw(tau, a.raw(), b.raw(), delta.raw(), n, policy);
    const RatVec half_sum = (a.raw() + b.raw()).half();
    const RatVec half_diff = (a.raw() - b.raw()).half();
    CMatrix rhs = CMatrix::Zero(g, g);
    for (const RationalVector& eps : half_grid(g)) {
        const Rat phase_arg = (a.raw() + b.raw() + eps.raw().scaled(Rat(2))).dot(delta.raw());
        rhs += cexp(phase_arg) *
               c_matrix_raw(tau, eps.raw() + half_sum, eps.raw() + half_diff, n, policy);
    }

    rep.scale = residual_scale(lhs, rhs);
    rep.residual = max_abs(lhs - rhs) / rep.scale;
    rep.inputs = {{"tau", tau.digest()}, {"a", a.str()}, {"b", b.str()}, {"delta", delta.str()}};
    rep.finish(tol);
    rep.wall_ms = ms_since(t0);
    return rep;
}

IdentityReport verify_AC_roundtrip(const PeriodMatrix& tau, const RationalVector& a,
                                   const RationalVector& b, const RationalVector& delta, int n,
                                   const TruncationPolicy& policy, double tol) {
    const auto t0 = Clock::now();
    const int g = tau.genus();
    if (!delta.is_half_integral()) throw DomainError("ac-theorem: delta must be half-integral");
    if (!on_grid(a + b, 2ll * n))
        throw DomainError("ac-theorem round-trip requires a+b in ((1/2n)Z/Z)^g");
    IdentityReport rep;
    rep.identity = "ac-roundtrip";
    rep.genus = g;
    rep.level = n;

    const CMatrix direct = a_matrix_raw(tau, a.raw(), b.raw(), delta.raw(), n, policy);

    // Substitute the direction-a expansion of each C into the direction-b
    // sum; the 2^g factors must cancel exactly.
    const RatVec half_sum = (a.raw() + b.raw()).half();
    const RatVec half_diff = (a.raw() - b.raw()).half();
    CMatrix nested = CMatrix::Zero(g, g);
    for (const RationalVector& eps : half_grid(g)) {
        const RatVec c_idx = eps.raw() + half_sum;
        const RatVec d_idx = eps.raw() + half_diff;
        const Rat outer_arg = (a.raw() + b.raw() + eps.raw().scaled(Rat(2))).dot(delta.raw());
        CMatrix inner = CMatrix::Zero(g, g);
        for (const RationalVector& sig : half_grid(g)) {
            const Complex phase = cexp(-Rat(2) * c_idx.dot(sig.raw()));
            inner += phase *
                     a_matrix_raw(tau, c_idx + d_idx, c_idx - d_idx, sig.raw(), n, policy);
        }
        nested += cexp(outer_arg) * inner / std::pow(2.0, g);
    }

    rep.scale = residual_scale(direct, nested);
    rep.residual = max_abs(direct - nested) / rep.scale;
    rep.inputs = {{"tau", tau.digest()}, {"a", a.str()}, {"b", b.str()}, {"delta", delta.str()}};
    rep.finish(tol);
    rep.wall_ms = ms_since(t0);
    return rep;
}

std::vector<IdentityReport> verify_AC(const PeriodMatrix& tau, int n,
                                      const TruncationPolicy& policy, ACDirection direction,
                                      std::uint64_t seed, int max_tuples, double tol) {
    const int g = tau.genus();
    const auto grid4 = char_grid(g, 4ll * n);
    const auto grid2 = char_grid(g, 2ll * n);
    std::vector<IdentityReport> reports;

    if (direction == ACDirection::a) {
        const long long total = static_cast<long long>(grid4.size()) * grid4.size();
        if (g == 1 || total <= max_tuples) {
            for (const auto& a : grid4)
                for (const auto& b : grid4)
                    reports.push_back(verify_AC_tuple_a(tau, a, b, n, policy, tol));
        } else {
            SplitMix rng(mix_keys({seed, tag_hash("ac-a"), static_cast<std::uint64_t>(g),
                                   static_cast<std::uint64_t>(n)}));
            for (int i = 0; i < max_tuples; ++i) {
                const auto& a = grid4[rng.uniform_index(grid4.size())];
                const auto& b = grid4[rng.uniform_index(grid4.size())];
                reports.push_back(verify_AC_tuple_a(tau, a, b, n, policy, tol));
            }
        }
    } else {
        const auto& deltas = half_grid(g);
        const long long total = static_cast<long long>(grid2.size()) * grid4.size() *
                                static_cast<long long>(deltas.size());
        if (g == 1 || total <= max_tuples) {
            for (const auto& s : grid2)
                for (const auto& a : grid4) {
                    const RationalVector b = s + (-a);
                    for (const auto& d : deltas)
                        reports.push_back(verify_AC_tuple_b(tau, a, b, d, n, policy, tol));
                }
        } else {
            SplitMix rng(mix_keys({seed, tag_hash("ac-b"), static_cast<std::uint64_t>(g),
                                   static_cast<std::uint64_t>(n)}));
            for (int i = 0; i < max_tuples; ++i) {
                const auto& s = grid2[rng.uniform_index(grid2.size())];
                const auto& a = grid4[rng.uniform_index(grid4.size())];
                const RationalVector b = s + (-a);
                const auto& d = deltas[rng.uniform_index(deltas.size())];
                reports.push_back(verify_AC_tuple_b(tau, a, b, d, n, policy, tol));
            }
        }
    }
    return reports;
}

IdentityReport verify_cyclic(const PeriodMatrix& tau, const RationalVector& a,
                             const RationalVector& b, const RationalVector& c,
                             const RationalVector& eps, int n, const TruncationPolicy& policy,
                             double tol) {
    const auto t0 = Clock::now();
    const int g = tau.genus();
    if (!eps.is_half_integral()) throw DomainError("cyclic: eps must be half-integral");
    if (!on_grid(a + b, 2ll * n) || !on_grid(a + c, 2ll * n))
        throw DomainError("cyclic identity requires a+b and a+c in ((1/2n)Z/Z)^g");
    IdentityReport rep;
    rep.identity = "cyclic";
    rep.genus = g;
    rep.level = n;

    const PeriodMatrix t2 = tau.scale(2ll * n);
    const CVector z0 = CVector::Zero(g);
    const Complex va = theta_jet(t2, z0, a, eps, policy).value;
    const Complex vb = theta_jet(t2, z0, b, eps, policy).value;
    const Complex vc = theta_jet(t2, z0, c, eps, policy).value;
    const CMatrix t_ab = a_matrix_raw(tau, a.raw(), b.raw(), eps.raw(), n, policy) * vc;
    const CMatrix t_bc = a_matrix_raw(tau, b.raw(), c.raw(), eps.raw(), n, policy) * va;
    const CMatrix t_ca = a_matrix_raw(tau, c.raw(), a.raw(), eps.raw(), n, policy) * vb;
    const CMatrix sum = t_ab + t_bc + t_ca;

    rep.scale = std::max({1.0, max_abs(t_ab), max_abs(t_bc), max_abs(t_ca)});
    rep.residual = max_abs(sum) / rep.scale;
    rep.inputs = {{"tau", tau.digest()}, {"a", a.str()},     {"b", b.str()},
                  {"c", c.str()},        {"eps", eps.str()}};
    rep.finish(tol);
    rep.wall_ms = ms_since(t0);
    return rep;
}

IdentityReport verify_heat_consistency(const PeriodMatrix& tau, const CVector& z,
                                       const RationalVector& eps, const RationalVector& delta,
                                       const TruncationPolicy& policy, double tol) {
    const auto t0 = Clock::now();
    const int g = tau.genus();
    IdentityReport rep;
    rep.identity = "heat-consistency";
    rep.genus = g;

    const ThetaJet jet = theta_jet(tau, z, eps, delta, policy);
    const Complex four_pi_i(0.0, 4.0 * std::numbers::pi);
    const CMatrix via_hessian = jet.hessian / four_pi_i;
    const double scale1 = residual_scale(jet.tau_deriv, via_hessian);
    const double res_routes = max_abs(jet.tau_deriv - via_hessian) / scale1;

    // Richardson-extrapolated central differences in tau, perturbing the
    // symmetric pair (j,k),(k,j) as one variable.  The value tail must be
    // far below h, else truncation noise dominates the quotient.
    TruncationPolicy fd_policy = policy;
    fd_policy.deriv_order = 0;
    fd_policy.tail_bound = std::min(policy.tail_bound, 1e-16);
    const double h = 1e-5;
    auto value_at = [&](const Eigen::MatrixXcd& m) {
        return theta_jet(PeriodMatrix(m), z, eps, delta, fd_policy).value;
    };
    CMatrix fd = CMatrix::Zero(g, g);
    for (int j = 0; j < g; ++j)
        for (int k = j; k < g; ++k) {
            Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(g, g);
            e(j, k) = 1.0;
            e(k, j) = 1.0; // one variable per symmetric pair
            auto central = [&](double step) {
                return (value_at(tau.entries() + step * e) - value_at(tau.entries() - step * e)) /
                       (2.0 * step);
            };
            const Complex d = (4.0 * central(h / 2) - central(h)) / 3.0;
            fd(j, k) = fd(k, j) = (j == k ? d : 0.5 * d);
        }
    const double scale2 = residual_scale(jet.tau_deriv, fd);
    const double res_fd = max_abs(jet.tau_deriv - fd) / scale2;

    rep.scale = std::max(scale1, scale2);
    rep.residual = std::max(res_routes, res_fd);
    rep.degraded = jet.degraded;
    rep.inputs = {{"tau", tau.digest()},
                  {"z", cvec_json(z)},
                  {"eps", eps.str()},
                  {"delta", delta.str()},
                  {"route_residual", res_routes},
                  {"fd_residual", res_fd}};
    rep.finish(tol);
    rep.wall_ms = ms_since(t0);
    return rep;
}

} // namespace thetaforge
