#ifndef THETAFORGE_HARNESS_HPP
#define THETAFORGE_HARNESS_HPP

#include <string>
#include <vector>

#include "thetaforge/report.hpp"
#include "thetaforge/rng.hpp"
#include "thetaforge/theta.hpp"

namespace thetaforge {

inline constexpr const char* kVersion = "thetaforge 0.1.0";

/// Everything a verification run depends on.  The seed fully determines
/// every sampled tau, z and characteristic tuple.
struct RunConfig {
    std::vector<int> genus_list{1, 2};
    std::vector<int> level_list{1, 2};
    std::vector<std::string> suites; // must be nonempty for run_suite
    int samples = 64;
    std::uint64_t seed = 7;
    double tolerance = 0.0; // 0 = per-suite defaults
    double tail_bound = 1e-13;
    int radius_multiplier = 1;
    bool allow_degraded = false;
    std::string out_path;
    std::string format = "json"; // or "csv"
    bool strip_timing = false;

    TruncationPolicy policy() const;
};

struct SuiteResult {
    std::string name;
    std::vector<IdentityReport> reports;
    std::vector<std::string> notes; // skipped combinations and similar remarks
    double max_residual = 0.0;
    bool pass = true;
    double wall_ms = 0.0;
};

struct SuiteReport {
    RunConfig config;
    std::vector<SuiteResult> suites;
    bool pass = true;
    double wall_ms = 0.0;
};

/// All suite names understood by run_suite.
const std::vector<std::string>& suite_names();

/// Deterministic period matrix: symmetric real part with entries uniform in
/// [-0.5, 0.5], imaginary part y0*I + W W^t with y0 in [0.5, 1.5] and W
/// entries in [-0.3, 0.3], so lambda_min(Im tau) >= 0.5.
PeriodMatrix sample_tau(int genus, std::uint64_t seed, std::uint64_t index);

/// Deterministic z from the box Re, Im in [-0.5, 0.5].
CVector sample_z(int genus, std::uint64_t seed, std::uint64_t index);

/// Uniform characteristic on ((1/denom)Z/Z)^genus from an explicit stream.
RationalVector random_char(SplitMix& rng, int genus, long long denom);

/// Runs the configured suites and, when an output path is set, writes the
/// report in the configured format.  Exit-code semantics: report.pass.
SuiteReport run_suite(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SuiteReport& report, bool include_timing = true);

/// The deterministic report body: identical configs yield byte-identical
/// strings (wall times excluded).
std::string canonical_body(const SuiteReport& report);

/// One row per identity report.
std::string to_csv(const SuiteReport& report);

} // namespace thetaforge

#endif
