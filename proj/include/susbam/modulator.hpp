#pragma once

#include <cstddef>
#include <filesystem>

#include "susbam/config.hpp"
#include "susbam/sample_buffer.hpp"
#include "susbam/spectral.hpp"

namespace susbam {

/// Single-upper-sideband modulation into [carrier, carrier + cutoff].
///
/// Steps, in order: resample to the working rate, low-pass at the cutoff,
/// peak-normalize to 1, form y = x cos(wc n) - H{x} sin(wc n), apply one
/// file-length Tukey envelope, peak-normalize to `normalize_target`.
SampleBuffer modulate(const SampleBuffer& input, const ModulationConfig& config = {});

/// WAV-to-WAV modulation of one channel. The written file is read back and
/// measured, and those metrics are returned.
spectral::BandMetrics modulate_file(const std::filesystem::path& in_path,
                                    const std::filesystem::path& out_path,
                                    const ModulationConfig& config = {}, std::size_t channel = 0);

}  // namespace susbam
