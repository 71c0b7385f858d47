#include "thetaforge.h"

#include <cstring>
#include <string>

#include "thetaforge/error.hpp"
#include "thetaforge/harness.hpp"
#include "thetaforge/jacobi.hpp"
#include "thetaforge/theta.hpp"

using namespace thetaforge;

struct tf_tau {
    PeriodMatrix m;
};

namespace {

thread_local std::string g_last_error;

tf_status fail(tf_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename F>
tf_status guarded(F&& f) {
    try {
        return f();
    } catch (const DomainError& e) {
        return fail(TF_ERR_DOMAIN, e.what());
    } catch (const InsufficientDataError& e) {
        return fail(TF_ERR_EVALUATION, e.what());
    } catch (const EvaluationError& e) {
        return fail(TF_ERR_EVALUATION, e.what());
    } catch (const CrossCheckError& e) {
        return fail(TF_ERR_EVALUATION, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(TF_ERR_JSON, e.what());
    } catch (const Error& e) {
        return fail(TF_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(TF_ERR_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

RatVec ratvec_from_arrays(int g, const int64_t* num, const int64_t* den, const char* what) {
    std::vector<Rat> e(static_cast<size_t>(g));
    for (int i = 0; i < g; ++i) {
        if (den[i] <= 0) throw DomainError(std::string(what) + ": denominators must be positive");
        e[static_cast<size_t>(i)] = Rat(num[i], den[i]);
    }
    return RatVec(std::move(e));
}

PeriodMatrix tau_from_json(const nlohmann::json& req) {
    const int g = req.at("genus").get<int>();
    if (req.contains("tau_re")) {
        Eigen::MatrixXcd m(g, g);
        const auto& re = req.at("tau_re");
        const auto& im = req.at("tau_im");
        for (int j = 0; j < g; ++j)
            for (int k = 0; k < g; ++k)
                m(j, k) = Complex(re.at(j).at(k).get<double>(), im.at(j).at(k).get<double>());
        return PeriodMatrix(std::move(m));
    }
    return sample_tau(g, req.value("seed", std::uint64_t{7}), req.value("tau_index", std::uint64_t{0}));
}

nlohmann::json cplx_json(const Complex& c) { return nlohmann::json::array({c.real(), c.imag()}); }

} // namespace

extern "C" {

const char* tf_version(void) { return kVersion; }

const char* tf_last_error(void) { return g_last_error.c_str(); }

void tf_string_free(char* s) { delete[] s; }

tf_status tf_tau_create(int genus, const double* re, const double* im, tf_tau** out) {
    if (!re || !im || !out || genus < 1)
        return fail(TF_ERR_INVALID_ARGUMENT, "tf_tau_create: bad arguments");
    return guarded([&] {
        Eigen::MatrixXcd m(genus, genus);
        for (int j = 0; j < genus; ++j)
            for (int k = 0; k < genus; ++k)
                m(j, k) = Complex(re[j * genus + k], im[j * genus + k]);
        *out = new tf_tau{PeriodMatrix(std::move(m))};
        return TF_OK;
    });
}

tf_status tf_tau_sample(int genus, uint64_t seed, uint64_t index, tf_tau** out) {
    if (!out || genus < 1) return fail(TF_ERR_INVALID_ARGUMENT, "tf_tau_sample: bad arguments");
    return guarded([&] {
        *out = new tf_tau{sample_tau(genus, seed, index)};
        return TF_OK;
    });
}

int tf_tau_genus(const tf_tau* tau) { return tau ? tau->m.genus() : 0; }

tf_status tf_tau_entries(const tf_tau* tau, double* re, double* im) {
    if (!tau || !re || !im) return fail(TF_ERR_INVALID_ARGUMENT, "tf_tau_entries: bad arguments");
    const int g = tau->m.genus();
    for (int j = 0; j < g; ++j)
        for (int k = 0; k < g; ++k) {
            re[j * g + k] = tau->m(j, k).real();
            im[j * g + k] = tau->m(j, k).imag();
        }
    return TF_OK;
}

void tf_tau_free(tf_tau* tau) { delete tau; }

tf_status tf_theta_jet(const tf_tau* tau, const tf_complex* z, const int64_t* eps_num,
                       const int64_t* eps_den, const int64_t* delta_num, const int64_t* delta_den,
                       double tail_bound, int max_radius, tf_complex* value, tf_complex* gradient,
                       tf_complex* hessian, tf_complex* tau_deriv, int* degraded) {
    if (!tau || !z || !eps_num || !eps_den || !delta_num || !delta_den)
        return fail(TF_ERR_INVALID_ARGUMENT, "tf_theta_jet: bad arguments");
    return guarded([&] {
        const int g = tau->m.genus();
        CVector zv(g);
        for (int i = 0; i < g; ++i) zv[i] = Complex(z[i].re, z[i].im);
        TruncationPolicy policy;
        if (tail_bound > 0) policy.tail_bound = tail_bound;
        if (max_radius > 0) policy.max_radius = max_radius;
        const ThetaJet jet =
            theta_jet_raw(tau->m, zv, ratvec_from_arrays(g, eps_num, eps_den, "eps"),
                          ratvec_from_arrays(g, delta_num, delta_den, "delta"), policy);
        if (value) *value = {jet.value.real(), jet.value.imag()};
        for (int j = 0; j < g; ++j) {
            if (gradient) gradient[j] = {jet.gradient[j].real(), jet.gradient[j].imag()};
            for (int k = 0; k < g; ++k) {
                if (hessian)
                    hessian[j * g + k] = {jet.hessian(j, k).real(), jet.hessian(j, k).imag()};
                if (tau_deriv)
                    tau_deriv[j * g + k] = {jet.tau_deriv(j, k).real(), jet.tau_deriv(j, k).imag()};
            }
        }
        if (degraded) *degraded = jet.degraded ? 1 : 0;
        return TF_OK;
    });
}

tf_status tf_tail_bound(const tf_tau* tau, const tf_complex* z, int radius, int deriv_order,
                        double* bound) {
    if (!tau || !z || !bound) return fail(TF_ERR_INVALID_ARGUMENT, "tf_tail_bound: bad arguments");
    return guarded([&] {
        const int g = tau->m.genus();
        CVector zv(g);
        for (int i = 0; i < g; ++i) zv[i] = Complex(z[i].re, z[i].im);
        *bound = theta_tail_bound(tau->m, zv, radius, deriv_order);
        return TF_OK;
    });
}

tf_status tf_eval_json(const char* request_json, char** response_json) {
    if (!request_json || !response_json)
        return fail(TF_ERR_INVALID_ARGUMENT, "tf_eval_json: bad arguments");
    return guarded([&] {
        const nlohmann::json req = nlohmann::json::parse(request_json);
        const PeriodMatrix tau = tau_from_json(req);
        const int g = tau.genus();
        CVector z = CVector::Zero(g);
        if (req.contains("z")) {
            const auto& zj = req.at("z");
            for (int i = 0; i < g; ++i)
                z[i] = Complex(zj.at(i).at(0).get<double>(), zj.at(i).at(1).get<double>());
        }
        const RationalVector eps =
            req.contains("eps") ? RationalVector::parse(req.at("eps").get<std::string>(), g)
                                : RationalVector::zero(g);
        const RationalVector delta =
            req.contains("delta") ? RationalVector::parse(req.at("delta").get<std::string>(), g)
                                  : RationalVector::zero(g);
        TruncationPolicy policy;
        policy.tail_bound = req.value("tail_bound", policy.tail_bound);
        policy.max_radius = req.value("max_radius", policy.max_radius);
        const ThetaJet jet = theta_jet(tau, z, eps, delta, policy);

        nlohmann::json grad = nlohmann::json::array();
        nlohmann::json hess = nlohmann::json::array();
        nlohmann::json dtau = nlohmann::json::array();
        for (int j = 0; j < g; ++j) {
            grad.push_back(cplx_json(jet.gradient[j]));
            nlohmann::json hrow = nlohmann::json::array(), trow = nlohmann::json::array();
            for (int k = 0; k < g; ++k) {
                hrow.push_back(cplx_json(jet.hessian(j, k)));
                trow.push_back(cplx_json(jet.tau_deriv(j, k)));
            }
            hess.push_back(hrow);
            dtau.push_back(trow);
        }
        const nlohmann::json resp{{"genus", g},          {"tau_digest", tau.digest()},
                                  {"eps", eps.str()},    {"delta", delta.str()},
                                  {"value", cplx_json(jet.value)},
                                  {"gradient", grad},    {"hessian", hess},
                                  {"tau_deriv", dtau},   {"radius", jet.radius},
                                  {"degraded", jet.degraded}};
        *response_json = dup_string(resp.dump(2) + "\n");
        return TF_OK;
    });
}

tf_status tf_verify_json(const char* config_json, char** report_json, int* all_pass) {
    if (!config_json || !report_json)
        return fail(TF_ERR_INVALID_ARGUMENT, "tf_verify_json: bad arguments");
    return guarded([&] {
        const RunConfig cfg = config_from_json(nlohmann::json::parse(config_json));
        const SuiteReport report = run_suite(cfg);
        if (cfg.format == "csv")
            *report_json = dup_string(to_csv(report));
        else
            *report_json = dup_string(to_json(report, !cfg.strip_timing).dump(2) + "\n");
        if (all_pass) *all_pass = report.pass ? 1 : 0;
        return TF_OK;
    });
}

tf_status tf_constants_json(const char* config_json, char** table_json) {
    if (!config_json || !table_json)
        return fail(TF_ERR_INVALID_ARGUMENT, "tf_constants_json: bad arguments");
    return guarded([&] {
        const nlohmann::json j = nlohmann::json::parse(config_json);
        const std::vector<int> genus = j.value("genus", std::vector<int>{1});
        const std::vector<int> levels = j.value("level", std::vector<int>{1, 2});
        const std::uint64_t seed = j.value("seed", std::uint64_t{7});
        const int samples = j.value("samples", 20);
        TruncationPolicy policy;
        policy.tail_bound = j.value("tail_bound", policy.tail_bound);

        nlohmann::json rows = nlohmann::json::array();
        for (int g : genus)
            for (int n : levels) {
                std::vector<PeriodMatrix> taus;
                for (int i = 0; i < samples; ++i)
                    taus.push_back(sample_tau(g, seed, mix_keys({tag_hash("constants"),
                                                                 std::uint64_t(n),
                                                                 std::uint64_t(i)})));
                for (const auto& a : char_grid(g, 2ll * n))
                    for (const auto& delta : char_grid(g, 2)) {
                        nlohmann::json row{{"genus", g},      {"level", n},
                                           {"a", a.str()},    {"delta", delta.str()}};
                        try {
                            const ConstantEstimate est =
                                estimate_constant(taus, a, delta, n, policy);
                            row["constant"] = cplx_json(est.value);
                            row["rel_std"] = est.rel_std;
                            row["samples"] = est.sample_count;
                        } catch (const InsufficientDataError& e) {
                            row["degenerate"] = true;
                            row["note"] = e.what();
                        }
                        rows.push_back(std::move(row));
                    }
            }
        const nlohmann::json table{{"version", kVersion}, {"constants", rows}};
        *table_json = dup_string(table.dump(2) + "\n");
        return TF_OK;
    });
}

} // extern "C"
