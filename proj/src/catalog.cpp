#include "susbam/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "susbam/csv.hpp"
#include "susbam/error.hpp"

namespace susbam::catalog {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool digits(std::string_view s, std::size_t count) {
    return s.size() == count &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool valid_attack_id(std::string_view id) {
    return id.size() == 5 && id[0] == 'T' && digits(id.substr(1), 4);
}

bool valid_defend_id(std::string_view id) {
    return id.size() == 8 && id.starts_with("D3-T") && digits(id.substr(4), 4);
}

std::vector<std::string> split_header(std::string_view header) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = header.find(',', start);
        out.emplace_back(header.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

void check_header(const csv::Row& row, std::string_view expected) {
    const auto want = split_header(expected);
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (i >= row.fields.size() || row.fields[i] != want[i]) {
            throw ParseError(row.line, i + 1, "expected header column '" + want[i] + "'");
        }
    }
    if (row.fields.size() != want.size()) {
        throw ParseError(row.line, want.size() + 1, "unexpected extra header column");
    }
}

std::vector<csv::Row> rows_with_header(std::string_view text, std::string_view header) {
    auto rows = csv::parse(text);
    if (rows.empty()) throw ParseError(1, 1, "missing header row");
    check_header(rows.front(), header);
    rows.erase(rows.begin());
    return rows;
}

void check_width(const csv::Row& row, std::size_t width) {
    if (row.fields.size() != width) {
        throw ParseError(row.line, std::min(row.fields.size(), width) + 1,
                         "expected " + std::to_string(width) + " fields, found " +
                             std::to_string(row.fields.size()));
    }
}

bool parse_flag(const csv::Row& row, std::size_t column) {
    const auto v = lower(row.fields[column]);
    if (v == "yes" || v == "true" || v == "1") return true;
    if (v == "no" || v == "false" || v == "0") return false;
    throw ParseError(row.line, column + 1, "expected yes/no, found '" + row.fields[column] + "'");
}

Outcome parse_outcome(const csv::Row& row, std::size_t column) {
    const auto v = lower(row.fields[column]);
    if (v == "fail") return Outcome::fail;
    if (v == "trigger") return Outcome::trigger;
    if (v == "success") return Outcome::success;
    throw ParseError(row.line, column + 1,
                     "expected fail/trigger/success, found '" + row.fields[column] + "'");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "write failed on " + path.string());
}

int whole_percent(double fraction) { return static_cast<int>(std::lround(fraction * 100.0)); }

}  // namespace

std::vector<CatalogEntry> parse_catalog(std::string_view csv_text) {
    std::vector<CatalogEntry> entries;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : rows_with_header(csv_text, kCatalogHeader)) {
        check_width(row, 7);
        const auto& f = row.fields;
        if (!valid_attack_id(f[1])) {
            throw ParseError(row.line, 2, "ATT&CK id '" + f[1] + "' does not match T####");
        }
        if (!valid_defend_id(f[4])) {
            throw ParseError(row.line, 5, "D3FEND id '" + f[4] + "' does not match D3-T####");
        }
        if (!seen.emplace(f[1], f[4]).second) {
            throw ParseError(row.line, 2, "duplicate pairing " + f[1] + " / " + f[4]);
        }
        entries.push_back({f[0], f[1], f[2], f[3], f[4], f[5], parse_flag(row, 6)});
    }
    return entries;
}

std::vector<CatalogEntry> load_catalog(const std::filesystem::path& path) {
    return parse_catalog(read_text(path));
}

std::string catalog_to_csv(std::span<const CatalogEntry> entries) {
    std::string out(kCatalogHeader);
    out.push_back('\n');
    for (const auto& e : entries) {
        out += csv::join({e.attack_tactic, e.attack_technique_id, e.attack_technique_name,
                          e.defend_tactic, e.defend_technique_id, e.defend_technique_name,
                          e.ultrasonic_applicable ? "Yes" : "No"});
        out.push_back('\n');
    }
    return out;
}

void save_catalog(std::span<const CatalogEntry> entries, const std::filesystem::path& path) {
    write_text(catalog_to_csv(entries), path);
}

std::vector<CatalogEntry> pair_defense(std::span<const CatalogEntry> catalog,
                                       std::string_view attack_technique_id) {
    std::vector<CatalogEntry> out;
    std::copy_if(catalog.begin(), catalog.end(), std::back_inserter(out),
                 [&](const CatalogEntry& e) { return e.attack_technique_id == attack_technique_id; });
    return out;
}

std::string_view to_string(Outcome outcome) noexcept {
    switch (outcome) {
        case Outcome::fail: return "fail";
        case Outcome::trigger: return "trigger";
        case Outcome::success: return "success";
    }
    return "unknown";
}

std::vector<CommandRecord> parse_survey(std::string_view csv_text) {
    std::vector<CommandRecord> records;
    std::set<int> ids;
    for (const auto& row : rows_with_header(csv_text, kSurveyHeader)) {
        check_width(row, 5);
        const auto& id_text = row.fields[0];
        int id = -1;
        const auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
        if (ec != std::errc{} || ptr != id_text.data() + id_text.size() || id < 0 || id > 49) {
            throw ParseError(row.line, 1, "id '" + id_text + "' is not an integer in 0..49");
        }
        if (!ids.insert(id).second) {
            throw ParseError(row.line, 1, "duplicate id " + id_text);
        }
        CommandRecord record{id, row.fields[1], parse_outcome(row, 2), parse_outcome(row, 3),
                             parse_flag(row, 4)};
        if (record.wrong_command && record.nuit_outcome != Outcome::trigger) {
            throw ParseError(row.line, 5, "wrong_command is only valid for a trigger outcome");
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<CommandRecord> load_survey(const std::filesystem::path& path) {
    return parse_survey(read_text(path));
}

std::string survey_to_csv(std::span<const CommandRecord> records) {
    std::string out(kSurveyHeader);
    out.push_back('\n');
    for (const auto& r : records) {
        out += csv::join({std::to_string(r.id), r.command, std::string(to_string(r.original_outcome)),
                          std::string(to_string(r.nuit_outcome)), r.wrong_command ? "yes" : "no"});
        out.push_back('\n');
    }
    return out;
}

int ArmTotals::fail_pct() const noexcept { return whole_percent(fail_fraction); }
int ArmTotals::trigger_pct() const noexcept { return whole_percent(trigger_fraction); }
int ArmTotals::success_pct() const noexcept { return whole_percent(success_fraction); }

SurveyTotals aggregate_survey(std::span<const CommandRecord> records) {
    if (records.empty()) throw Error(ErrorCode::EmptyInput, "no survey records");

    auto tally = [&](auto outcome_of) {
        ArmTotals t;
        for (const auto& r : records) {
            switch (outcome_of(r)) {
                case Outcome::fail: ++t.fail_n; break;
                case Outcome::trigger: ++t.trigger_n; break;
                case Outcome::success: ++t.success_n; break;
            }
        }
        const double n = static_cast<double>(records.size());
        t.fail_fraction = static_cast<double>(t.fail_n) / n;
        t.trigger_fraction = static_cast<double>(t.trigger_n) / n;
        t.success_fraction = static_cast<double>(t.success_n) / n;
        return t;
    };

    SurveyTotals totals;
    totals.records = records.size();
    totals.original = tally([](const CommandRecord& r) { return r.original_outcome; });
    totals.nuit = tally([](const CommandRecord& r) { return r.nuit_outcome; });
    return totals;
}

}  // namespace susbam::catalog
