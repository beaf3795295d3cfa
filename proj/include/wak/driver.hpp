#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wak/twisted.hpp"

namespace wak {

inline constexpr const char* kEngineVersion = "0.1.0";

/// Bounds for the verification campaigns; unset bounds take the per-target defaults.
struct CampaignConfig {
    std::optional<int> max_mode;
    std::optional<int> max_doubled_mode;
    std::optional<int> max_weight;
    std::optional<int> orbit_depth;
    int bar_window = 1;
    int series_order = 6;
    /// Levels checked in addition to symbolic k.
    std::vector<BigRational> k_values;
    ExecPolicy policy = ExecPolicy::Parallel;
    bool fail_fast = true;
};

/// heisenberg, affine, virasoro, sugawara, casimir-commute, hierarchy,
/// twisted-heisenberg, twisted-affine, twisted-hierarchy.
const std::vector<std::string>& verify_targets();

/// Throws ConfigError for unknown targets, non-positive bounds, or k = −2 with a
/// campaign that needs 1/(k+2).
void validate_config(const std::string& target, const CampaignConfig& cfg);

struct CampaignResult {
    std::string target;
    std::string level;
    VerificationReport report;
    double seconds = 0;
};

/// Runs the target ("all" expands to every target) at symbolic k and at each k value.
std::vector<CampaignResult> run_verify(const std::string& target, const CampaignConfig& cfg);

/// The sub-campaign reports of one target at one level.
std::vector<VerificationReport> run_target_reports(const std::string& target, const CampaignConfig& cfg,
                                                   const Level& level);

/// Runs a single target at one level, sub-campaigns merged.
VerificationReport run_target(const std::string& target, const CampaignConfig& cfg, const Level& level);

nlohmann::json config_json(const CampaignConfig& cfg);
/// The report document; timing fields are "seconds" and "generated_at".
nlohmann::json report_document(const std::vector<CampaignResult>& results, const CampaignConfig& cfg);

nlohmann::json operator_terms_json(const SparsePoly& p);
nlohmann::json equation_json(const HirotaEquation& eq, bool with_latex = true);
nlohmann::json pde_json(const PdeForm& pde, PdeVariant variant, bool with_latex = true);

/// Merged pass/fail summary of report documents. Throws IoError on unreadable
/// or malformed files.
nlohmann::json aggregate_reports(const std::vector<std::string>& paths);

}  // namespace wak
