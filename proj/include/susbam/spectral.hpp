#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "susbam/config.hpp"
#include "susbam/dsp.hpp"
#include "susbam/sample_buffer.hpp"

namespace susbam::spectral {

inline constexpr double kFloorDb = -120.0;

/// Magnitude spectrogram in dB relative to a full-scale sinusoid.
struct Spectrogram {
    std::vector<double> frame_times;    // seconds, frame centres
    std::vector<double> bin_freqs;      // Hz, 0 .. rate/2
    std::vector<double> magnitudes_db;  // row-major, frames x bins, >= kFloorDb

    std::size_t frames() const noexcept { return frame_times.size(); }
    std::size_t bins() const noexcept { return bin_freqs.size(); }
    double at(std::size_t frame, std::size_t bin) const { return magnitudes_db[frame * bins() + bin]; }
};

/// Frame count is floor((len - frame_len) / hop) + 1. `window.length` may be
/// left at 0, otherwise it must equal `frame_len`.
Spectrogram stft(const SampleBuffer& signal, std::size_t frame_len, std::size_t hop,
                 dsp::WindowSpec window);

/// One-sided power spectrum scaled so that summing every bin reproduces the
/// time-domain energy sum(x^2) (Parseval).
struct PowerSpectrum {
    std::vector<double> power;  // per bin
    double bin_hz = 0.0;
    double nyquist_hz = 0.0;

    static PowerSpectrum of(std::span<const double> samples, double sample_rate_hz);

    double frequency(std::size_t bin) const noexcept { return static_cast<double>(bin) * bin_hz; }
    double total() const;
    /// Bins with lo <= f < hi; a band ending at Nyquist also includes the Nyquist bin.
    double band(double lo_hz, double hi_hz) const;
    /// Smallest bin frequency at which the cumulative power reaches `fraction` of the total.
    double quantile(double fraction) const;
};

/// Energy of `signal` in [lo_hz, hi_hz) from its whole-signal DFT.
double band_energy(const SampleBuffer& signal, double lo_hz, double hi_hz);

/// Verification metrics for a (possibly) modulated signal. All spectra are
/// taken over the Tukey-flat centre implied by config.tukey_alpha, under a
/// Hann analysis window.
struct BandMetrics {
    double inband_energy_db = kFloorDb;                    // mean-square power in [carrier, carrier+cutoff]
    std::optional<double> leakage_below_carrier_db;       // energy below carrier / total energy
    std::optional<double> sideband_suppression_db;        // image / tone, tone inputs only
    double occupancy_lo_hz = 0.0;                          // 5% energy quantile
    double occupancy_hi_hz = 0.0;                          // 95% energy quantile
};

BandMetrics measure(const SampleBuffer& signal, const ModulationConfig& config);

/// Index range [begin, end) where a Tukey window of this length and alpha is exactly 1.
std::pair<std::size_t, std::size_t> tukey_flat_region(std::size_t length, double alpha);

struct DetectorConfig {
    double carrier_hz = 16000.0;
    double band_hz = 6000.0;
    double ratio_threshold = 4.0;  // +6 dB
    double sustain_ms = 200.0;
    double frame_ms = 50.0;
    double hop_ms = 25.0;
    double reference_lo_hz = 300.0;
    double reference_hi_hz = 8000.0;
    /// Frames whose attack-band mean-square power is below this are never flagged.
    double min_attack_power = 1e-10;
};

struct DetectionVerdict {
    std::vector<bool> frame_flags;
    std::vector<double> frame_ratios;  // attack band / reference band, +inf when reference is empty
    double score = 0.0;                // flagged-frame fraction
    bool flagged = false;
    double sustained_ms = 0.0;         // longest flagged run, first to last frame start
};

DetectionVerdict detect(const SampleBuffer& signal, const DetectorConfig& config = {});

/// Binary PGM (P5): time runs left to right, frequency bottom to top, and
/// [-120, 0] dB maps linearly onto 0..255.
std::vector<std::uint8_t> encode_pgm(const Spectrogram& spec);
void render_spectrogram(const Spectrogram& spec, const std::filesystem::path& out_path);

}  // namespace susbam::spectral
