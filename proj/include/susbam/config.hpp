#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

namespace susbam {

/// Every knob of the near-ultrasound modulator.
struct ModulationConfig {
    double carrier_hz = 16000.0;
    double cutoff_hz = 6000.0;
    double tukey_alpha = 0.05;
    std::size_t filter_taps = 255;
    double normalize_target = 1.0;
    double working_rate_hz = 48000.0;

    /// Throws ConfigInvalid when the upper sideband does not fit under
    /// Nyquist or any field is out of range.
    void validate() const;

    /// Sets one field from its key=value spelling (keys are the field names).
    void set(std::string_view key, std::string_view value);

    friend bool operator==(const ModulationConfig&, const ModulationConfig&) = default;
};

/// Reads a plain-text `key = value` file on top of `base`. Blank lines and
/// lines starting with '#' are ignored; unknown keys are a ConfigInvalid error.
ModulationConfig load_config_file(const std::filesystem::path& path, ModulationConfig base = {});

/// Inverse of load_config_file.
std::string to_config_text(const ModulationConfig& config);

}  // namespace susbam
