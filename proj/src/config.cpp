#include "susbam/config.hpp"

#include <charconv>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <sstream>

#include "susbam/error.hpp"

namespace susbam {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view value) {
    const std::string text(value);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::ConfigInvalid,
                    "value '" + text + "' for " + std::string(key) + " is not a number");
    }
    return v;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::ConfigInvalid, "value '" + std::string(value) + "' for " +
                                                  std::string(key) + " is not a whole number");
    }
    return v;
}

}  // namespace

void ModulationConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); };
    if (!(working_rate_hz > 0.0)) fail("working rate must be positive");
    if (!(carrier_hz > 0.0)) fail("carrier must be positive");
    if (!(cutoff_hz > 0.0)) fail("cutoff must be positive");
    if (carrier_hz + cutoff_hz > working_rate_hz / 2.0) {
        std::ostringstream msg;
        msg << "carrier " << carrier_hz << " Hz + cutoff " << cutoff_hz << " Hz exceeds Nyquist "
            << working_rate_hz / 2.0 << " Hz (carrier too high for this rate)";
        fail(msg.str());
    }
    if (!(tukey_alpha >= 0.0 && tukey_alpha <= 1.0)) fail("tukey alpha must lie in [0, 1]");
    if (filter_taps < 3 || filter_taps % 2 == 0) fail("filter taps must be odd and >= 3");
    if (!(normalize_target > 0.0 && normalize_target <= 1.0)) {
        fail("normalize target must lie in (0, 1]");
    }
}

void ModulationConfig::set(std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "carrier_hz") {
        carrier_hz = parse_real(key, value);
    } else if (key == "cutoff_hz") {
        cutoff_hz = parse_real(key, value);
    } else if (key == "tukey_alpha") {
        tukey_alpha = parse_real(key, value);
    } else if (key == "filter_taps") {
        filter_taps = parse_count(key, value);
    } else if (key == "normalize_target") {
        normalize_target = parse_real(key, value);
    } else if (key == "working_rate_hz") {
        working_rate_hz = parse_real(key, value);
    } else {
        throw Error(ErrorCode::ConfigInvalid, "unknown setting '" + std::string(key) + "'");
    }
}

ModulationConfig load_config_file(const std::filesystem::path& path, ModulationConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + path.string());

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ConfigInvalid,
                        path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        base.set(trim(text.substr(0, eq)), text.substr(eq + 1));
    }
    return base;
}

std::string to_config_text(const ModulationConfig& config) {
    std::ostringstream out;
    out.precision(17);
    out << "carrier_hz = " << config.carrier_hz << '\n'
        << "cutoff_hz = " << config.cutoff_hz << '\n'
        << "tukey_alpha = " << config.tukey_alpha << '\n'
        << "filter_taps = " << config.filter_taps << '\n'
        << "normalize_target = " << config.normalize_target << '\n'
        << "working_rate_hz = " << config.working_rate_hz << '\n';
    return out.str();
}

}  // namespace susbam
