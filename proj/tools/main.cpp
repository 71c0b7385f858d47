// thetaforge command line: theta-jet evaluation, identity verification
// suites, and the derivative-formula constant table.  Talks to the library
// exclusively through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "thetaforge.h"

namespace {

using nlohmann::json;

const std::vector<std::string> kAllSuites = {
    "shift",          "doubling",         "addition-forward", "addition-converse",
    "ac-theorem",     "cyclic",           "rank",             "reconstruction",
    "product-reconstruction", "separation", "jacobi-classical", "jacobi-generalized",
    "heat-consistency"};

uint64_t default_seed() {
    if (const char* env = std::getenv("THETAFORGE_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "warning: ignoring invalid THETAFORGE_SEED '" << env << "'\n";
        }
    }
    return 7;
}

// Parses "1.5", "2i", "1+2i", "-0.3-1e-2i", "i".
std::pair<double, double> parse_complex(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) throw CLI::ValidationError("empty complex number");
    // Split at the sign that separates real and imaginary parts (not a
    // leading sign and not an exponent sign).
    size_t split = std::string::npos;
    for (size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
    }
    auto value = [](std::string part) -> double {
        if (part == "" || part == "+") return 1.0;
        if (part == "-") return -1.0;
        return std::stod(part);
    };
    try {
        if (s.back() == 'i' || s.back() == 'I') {
            if (split == std::string::npos) return {0.0, value(s.substr(0, s.size() - 1))};
            return {std::stod(s.substr(0, split)), value(s.substr(split, s.size() - split - 1))};
        }
        if (split != std::string::npos && (s.substr(split).back() != 'i'))
            throw CLI::ValidationError("cannot parse complex number: " + s);
        return {std::stod(s), 0.0};
    } catch (const std::exception&) {
        throw CLI::ValidationError("cannot parse complex number: " + s);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ss(s);
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

int fail(tf_status st) {
    std::cerr << "error: " << tf_last_error() << " (status " << static_cast<int>(st) << ")\n";
    return 2;
}

int emit(const char* text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out_path);
    if (!f) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 2;
    }
    f << text;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"theta functions with rational characteristics: evaluation and "
                 "identity verification"};
    app.set_version_flag("--version", std::string(tf_version()));
    app.require_subcommand(1);

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "evaluate one theta jet, print JSON");
    int e_genus = 1;
    std::string e_tau, e_z, e_eps, e_delta;
    uint64_t e_seed = default_seed(), e_tau_index = 0;
    double e_tail = 1e-13;
    int e_max_radius = 60;
    eval->add_option("--genus", e_genus, "genus g >= 1");
    eval->add_option("--tau", e_tau,
                     "g*g complex entries, row-major, ';'-separated (e.g. \"1i\" or "
                     "\"0.2+1i;0.1;0.1;1.5i\"); omit to use a seeded sample");
    eval->add_option("--tau-index", e_tau_index, "index of the seeded tau sample");
    eval->add_option("--seed", e_seed, "seed for sampled tau");
    eval->add_option("--z", e_z, "g complex entries, ';'-separated (default 0)");
    eval->add_option("--eps", e_eps, "upper characteristic, e.g. \"1/4,0\"");
    eval->add_option("--delta", e_delta, "lower characteristic");
    eval->add_option("--tail-bound", e_tail, "truncation tail bound");
    eval->add_option("--max-radius", e_max_radius, "lattice radius cap");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run identity-verification suites");
    std::vector<int> v_genus, v_level;
    std::vector<std::string> v_suites;
    bool v_all = false, v_allow_degraded = false, v_strip_timing = false;
    int v_samples = 64, v_radius_multiplier = 1;
    uint64_t v_seed = default_seed();
    double v_tol = 0.0, v_tail = 1e-13;
    std::string v_out, v_format = "json", v_config;
    verify->add_option("--genus", v_genus, "genus list (default 1 2)");
    verify->add_option("--level", v_level, "level list (default 1 2)");
    verify->add_option("--suites", v_suites, "suite names (default: all)");
    verify->add_flag("--all", v_all, "run every suite");
    verify->add_option("--samples", v_samples, "sample tuples per suite");
    verify->add_option("--seed", v_seed, "64-bit seed (THETAFORGE_SEED overrides the default)");
    verify->add_option("--tol", v_tol, "tolerance override (0 = per-suite defaults)");
    verify->add_option("--tail-bound", v_tail, "truncation tail bound");
    verify->add_option("--radius-multiplier", v_radius_multiplier,
                       "scale every truncation radius (2 = stability rerun)");
    verify->add_flag("--allow-degraded", v_allow_degraded,
                     "do not fail reports whose evaluations hit the radius cap");
    verify->add_option("--out", v_out, "report path (default: stdout)");
    verify->add_option("--format", v_format, "json or csv");
    verify->add_flag("--strip-timing", v_strip_timing, "omit wall times from the report");
    verify->add_option("--config", v_config, "JSON config file; explicit flags take precedence");

    // ---- constants ----
    auto* constants = app.add_subcommand("constants", "generalized derivative-formula constants");
    std::vector<int> c_genus{1}, c_level{1, 2};
    int c_samples = 20;
    uint64_t c_seed = default_seed();
    double c_tail = 1e-13;
    std::string c_out;
    constants->add_option("--genus", c_genus, "genus list");
    constants->add_option("--level", c_level, "level list");
    constants->add_option("--samples", c_samples, "tau samples per estimate");
    constants->add_option("--seed", c_seed, "64-bit seed");
    constants->add_option("--tail-bound", c_tail, "truncation tail bound");
    constants->add_option("--out", c_out, "table path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    if (eval->parsed()) {
        json req{{"genus", e_genus}, {"tail_bound", e_tail}, {"max_radius", e_max_radius}};
        if (!e_tau.empty()) {
            const auto entries = split(e_tau, ';');
            if (static_cast<int>(entries.size()) != e_genus * e_genus) {
                std::cerr << "error: --tau needs " << e_genus * e_genus << " entries\n";
                return 2;
            }
            json re = json::array(), im = json::array();
            for (int j = 0; j < e_genus; ++j) {
                json rrow = json::array(), irow = json::array();
                for (int k = 0; k < e_genus; ++k) {
                    const auto c = parse_complex(entries[j * e_genus + k]);
                    rrow.push_back(c.first);
                    irow.push_back(c.second);
                }
                re.push_back(rrow);
                im.push_back(irow);
            }
            req["tau_re"] = re;
            req["tau_im"] = im;
        } else {
            req["seed"] = e_seed;
            req["tau_index"] = e_tau_index;
        }
        if (!e_z.empty()) {
            json z = json::array();
            for (const auto& part : split(e_z, ';')) {
                const auto c = parse_complex(part);
                z.push_back(json::array({c.first, c.second}));
            }
            req["z"] = z;
        }
        if (!e_eps.empty()) req["eps"] = e_eps;
        if (!e_delta.empty()) req["delta"] = e_delta;

        char* resp = nullptr;
        const tf_status st = tf_eval_json(req.dump().c_str(), &resp);
        if (st != TF_OK) return fail(st);
        std::cout << resp;
        tf_string_free(resp);
        return 0;
    }

    if (verify->parsed()) {
        json cfg = json::object();
        if (!v_config.empty()) {
            std::ifstream f(v_config);
            if (!f) {
                std::cerr << "error: cannot read config file " << v_config << "\n";
                return 2;
            }
            try {
                f >> cfg;
            } catch (const std::exception& e) {
                std::cerr << "error: bad config file: " << e.what() << "\n";
                return 2;
            }
        }
        if (verify->count("--genus")) cfg["genus"] = v_genus;
        if (verify->count("--level")) cfg["level"] = v_level;
        if (verify->count("--suites")) cfg["suites"] = v_suites;
        if (v_all || !cfg.contains("suites")) cfg["suites"] = kAllSuites;
        if (verify->count("--samples")) cfg["samples"] = v_samples;
        if (verify->count("--seed") || !cfg.contains("seed")) cfg["seed"] = v_seed;
        if (verify->count("--tol")) cfg["tol"] = v_tol;
        if (verify->count("--tail-bound")) cfg["tail_bound"] = v_tail;
        if (verify->count("--radius-multiplier")) cfg["radius_multiplier"] = v_radius_multiplier;
        if (verify->count("--allow-degraded")) cfg["allow_degraded"] = v_allow_degraded;
        if (verify->count("--out")) cfg["out"] = v_out;
        if (verify->count("--format")) cfg["format"] = v_format;
        if (verify->count("--strip-timing")) cfg["strip_timing"] = v_strip_timing;

        char* report = nullptr;
        int all_pass = 0;
        const tf_status st = tf_verify_json(cfg.dump().c_str(), &report, &all_pass);
        if (st != TF_OK) return fail(st);
        if (cfg.value("out", std::string{}).empty()) std::cout << report;
        tf_string_free(report);
        return all_pass ? 0 : 1;
    }

    // constants
    json cfg{{"genus", c_genus}, {"level", c_level},      {"samples", c_samples},
             {"seed", c_seed},   {"tail_bound", c_tail}};
    char* table = nullptr;
    const tf_status st = tf_constants_json(cfg.dump().c_str(), &table);
    if (st != TF_OK) return fail(st);
    const int rc = emit(table, c_out);
    tf_string_free(table);
    return rc;
}
