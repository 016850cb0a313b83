#pragma once

#include <cstddef>
#include <vector>

#include "susbam/sample_buffer.hpp"

namespace susbam::stego {

struct SilenceRegion {
    std::size_t start_sample = 0;
    std::size_t end_sample = 0;  // exclusive

    std::size_t length() const noexcept { return end_sample - start_sample; }
    friend bool operator==(const SilenceRegion&, const SilenceRegion&) = default;
};

/// Quiet stretches of a host recording, sorted and disjoint.
struct SilenceMap {
    std::vector<SilenceRegion> regions;
    double rms_threshold = 0.01;
    double min_region_ms = 500.0;
    double sample_rate_hz = 0.0;

    /// Longest region (first one on ties), or nullptr when there are none.
    const SilenceRegion* longest() const noexcept;
};

struct SilenceOptions {
    double rms_threshold = 0.01;
    double frame_ms = 20.0;
    double min_region_ms = 500.0;
};

/// Frames of `frame_ms` whose RMS is below the threshold are merged into
/// maximal runs; runs shorter than `min_region_ms` are dropped. The trailing
/// partial frame counts as a frame.
SilenceMap find_silence(const SampleBuffer& host, const SilenceOptions& options = {});

struct Embedding {
    SampleBuffer output;
    std::size_t insert_start = 0;
    std::size_t insert_end = 0;  // exclusive
};

/// Adds gain * payload into the host, start-aligned on the longest silent
/// region, clamped to [-1, 1]. The payload is resampled to the host rate
/// first. Throws RateTooLow when the host Nyquist is below the payload's 95%
/// occupancy edge and NoRoom when no region can hold the payload.
Embedding embed(const SampleBuffer& host, const SampleBuffer& payload, const SilenceMap& map,
                double gain);

}  // namespace susbam::stego
