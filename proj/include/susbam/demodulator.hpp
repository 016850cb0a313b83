#pragma once

#include <cstddef>
#include <filesystem>

#include "susbam/sample_buffer.hpp"

namespace susbam {

struct DemodulationConfig {
    double carrier_hz = 16000.0;
    double recovery_cutoff_hz = 6000.0;
    std::size_t filter_taps = 255;
    /// Try 16 carrier phases and keep the one giving the most output energy.
    /// Only useful for recordings whose carrier phase is unknown.
    bool phase_search = false;

    void validate(double sample_rate_hz) const;
};

/// Coherent product detector: 2 y[n] cos(wc n + phase), low-pass at the
/// recovery cutoff, then peak-normalize to 1. Normalization is skipped when
/// the recovered energy is below -40 dB of the input energy, so a signal
/// with nothing in the attack band stays near silent instead of having its
/// residue amplified.
SampleBuffer demodulate(const SampleBuffer& input, const DemodulationConfig& config = {});

/// Smallest frequency below which 95% of the spectral energy lies.
double recovered_bandwidth(const SampleBuffer& recovered);

struct DemodulationReport {
    double recovered_bandwidth_hz = 0.0;
    double sample_rate_hz = 0.0;
};

DemodulationReport demodulate_file(const std::filesystem::path& in_path,
                                   const std::filesystem::path& out_path,
                                   const DemodulationConfig& config = {}, std::size_t channel = 0);

}  // namespace susbam
