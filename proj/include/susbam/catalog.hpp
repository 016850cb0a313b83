#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace susbam::catalog {

/// One ATT&CK technique paired with a D3FEND countermeasure. IDs are kept
/// exactly as transcribed, including ones that predate current MITRE numbering.
struct CatalogEntry {
    std::string attack_tactic;
    std::string attack_technique_id;  // T####
    std::string attack_technique_name;
    std::string defend_tactic;
    std::string defend_technique_id;  // D3-T####
    std::string defend_technique_name;
    bool ultrasonic_applicable = true;

    friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

inline constexpr std::string_view kCatalogHeader =
    "attack_tactic,attack_technique_id,attack_technique_name,defend_tactic,"
    "defend_technique_id,defend_technique_name,ultrasonic_applicable";

std::vector<CatalogEntry> parse_catalog(std::string_view csv_text);
std::vector<CatalogEntry> load_catalog(const std::filesystem::path& path);
std::string catalog_to_csv(std::span<const CatalogEntry> entries);
void save_catalog(std::span<const CatalogEntry> entries, const std::filesystem::path& path);

/// Every entry for the ATT&CK id; empty when the id is unknown.
std::vector<CatalogEntry> pair_defense(std::span<const CatalogEntry> catalog,
                                       std::string_view attack_technique_id);

enum class Outcome { fail, trigger, success };

std::string_view to_string(Outcome outcome) noexcept;

/// One row of the 50-command survey. A recognized-but-wrong response is a
/// trigger with `wrong_command` set.
struct CommandRecord {
    int id = 0;
    std::string command;
    Outcome original_outcome = Outcome::success;
    Outcome nuit_outcome = Outcome::success;
    bool wrong_command = false;

    friend bool operator==(const CommandRecord&, const CommandRecord&) = default;
};

inline constexpr std::string_view kSurveyHeader =
    "id,command,original_outcome,nuit_outcome,wrong_command";

std::vector<CommandRecord> parse_survey(std::string_view csv_text);
std::vector<CommandRecord> load_survey(const std::filesystem::path& path);
std::string survey_to_csv(std::span<const CommandRecord> records);

struct ArmTotals {
    std::size_t fail_n = 0;
    std::size_t trigger_n = 0;
    std::size_t success_n = 0;
    double fail_fraction = 0.0;
    double trigger_fraction = 0.0;
    double success_fraction = 0.0;

    // Whole-percent display values, rounded half away from zero.
    int fail_pct() const noexcept;
    int trigger_pct() const noexcept;
    int success_pct() const noexcept;
};

struct SurveyTotals {
    std::size_t records = 0;
    ArmTotals original;
    ArmTotals nuit;
};

SurveyTotals aggregate_survey(std::span<const CommandRecord> records);

}  // namespace susbam::catalog
