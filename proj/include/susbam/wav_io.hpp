#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "susbam/sample_buffer.hpp"

namespace susbam {

/// Uncompressed PCM16 audio. Multi-channel samples are interleaved.
class PcmClip {
public:
    PcmClip() = default;
    PcmClip(std::vector<std::int16_t> samples, std::uint32_t sample_rate_hz,
            std::uint16_t channels = 1);

    std::span<const std::int16_t> samples() const noexcept { return samples_; }
    std::uint32_t sample_rate_hz() const noexcept { return sample_rate_hz_; }
    std::uint16_t channels() const noexcept { return channels_; }
    std::size_t frames() const noexcept { return samples_.size() / channels_; }

    friend bool operator==(const PcmClip&, const PcmClip&) = default;

private:
    std::vector<std::int16_t> samples_;
    std::uint32_t sample_rate_hz_ = 1;
    std::uint16_t channels_ = 1;
};

inline constexpr std::size_t kWavHeaderBytes = 44;

// In-memory codec. decode_wav skips unknown chunks (LIST, fact, ...) and
// rejects anything that is not format code 1 with 16 bits per sample.
std::vector<std::uint8_t> encode_wav(const PcmClip& clip);
PcmClip decode_wav(std::span<const std::uint8_t> bytes);

PcmClip read_wav(const std::filesystem::path& path);
void write_wav(const PcmClip& clip, const std::filesystem::path& path);

/// Divides by 32768, so the result lies in [-1, 1).
SampleBuffer to_float(const PcmClip& clip, std::size_t channel = 0);

/// Scales by 32767, rounds half away from zero and clamps to the int16 range.
/// The output is mono at the buffer's rate rounded to the nearest hertz.
PcmClip to_pcm(const SampleBuffer& buffer);

}  // namespace susbam
