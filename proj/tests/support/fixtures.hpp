#pragma once

// Deterministic synthetic audio for the test suites. Speech-like fixtures
// are harmonic "vowels" with formant shaping plus noisy "fricatives", cut into
// syllables; everything is band-limited to 100 Hz .. 7.5 kHz unless noted.

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "susbam/sample_buffer.hpp"

namespace fixtures {

using susbam::SampleBuffer;

SampleBuffer tone(double freq_hz, double seconds, double rate_hz, double amplitude = 1.0,
                  double phase = 0.0);
SampleBuffer silence(double seconds, double rate_hz);
SampleBuffer constant(double value, double seconds, double rate_hz);
SampleBuffer white_noise(double seconds, double rate_hz, double rms, unsigned seed);

/// Gaussian noise with a flat spectrum on [lo_hz, hi_hz] and nothing elsewhere.
SampleBuffer band_noise(double seconds, double rate_hz, double lo_hz, double hi_hz, double rms,
                        unsigned seed);

/// Voiced-dominant speech surrogate, peak 0.5.
SampleBuffer speech_like(double seconds, double rate_hz, unsigned seed);

/// Speech surrogate whose energy is spread evenly up to 8 kHz, peak 0.5.
SampleBuffer full_band_speech(double seconds, double rate_hz, unsigned seed);

SampleBuffer concat(std::initializer_list<SampleBuffer> parts);
SampleBuffer scaled(const SampleBuffer& x, double gain);
SampleBuffer mixed(const SampleBuffer& a, const SampleBuffer& b);

struct Named {
    std::string name;
    SampleBuffer signal;
};

/// Speech-band corpus used by the band-confinement and round-trip checks.
std::vector<Named> speech_corpus(double rate_hz = 48000.0);

/// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void write_wav(const SampleBuffer& x, const std::filesystem::path& path);

}  // namespace fixtures
