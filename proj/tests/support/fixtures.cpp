#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>

#include "susbam/dsp.hpp"
#include "susbam/wav_io.hpp"

namespace fixtures {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t samples_for(double seconds, double rate_hz) {
    return static_cast<std::size_t>(std::llround(seconds * rate_hz));
}

std::vector<double> peak_scaled(std::vector<double> x, double peak) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    if (m > 0.0) {
        for (double& v : x) v *= peak / m;
    }
    return x;
}

std::vector<double> shaped_noise(std::size_t n, double rate_hz, double lo_hz, double hi_hz,
                                 std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = gauss(rng);
    auto spectrum = susbam::dsp::rdft(x);
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double f = static_cast<double>(k) * rate_hz / static_cast<double>(n);
        if (f < lo_hz || f > hi_hz) spectrum[k] = 0.0;
    }
    return susbam::dsp::irdft(spectrum, n);
}

double formant_gain(double f, const double (&formants)[3]) {
    double g = 0.02;
    const double widths[3] = {90.0, 140.0, 200.0};
    const double heights[3] = {1.0, 0.6, 0.35};
    for (int i = 0; i < 3; ++i) {
        const double d = (f - formants[i]) / widths[i];
        g += heights[i] / (1.0 + d * d);
    }
    return g;
}

/// Raised-cosine attack and release over `ramp` samples.
double syllable_envelope(std::size_t i, std::size_t len, std::size_t ramp) {
    if (i < ramp) return 0.5 * (1.0 - std::cos(kPi * static_cast<double>(i) / static_cast<double>(ramp)));
    if (i + ramp >= len) {
        const double t = static_cast<double>(len - 1 - i) / static_cast<double>(ramp);
        return 0.5 * (1.0 - std::cos(kPi * std::clamp(t, 0.0, 1.0)));
    }
    return 1.0;
}

std::vector<double> synth_speech(double seconds, double rate_hz, unsigned seed, double noise_share,
                                 double tilt_db_per_octave, double noise_lo_hz, double noise_hi_hz) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const std::size_t n = samples_for(seconds, rate_hz);
    std::vector<double> out(n, 0.0);

    const auto noise = shaped_noise(n, rate_hz, noise_lo_hz, noise_hi_hz, rng);
    std::size_t pos = 0;
    while (pos < n) {
        const auto syl = std::min(n - pos, samples_for(0.14 + 0.16 * uni(rng), rate_hz));
        const auto gap = samples_for(0.02 + 0.04 * uni(rng), rate_hz);
        const double f0_start = 100.0 + 120.0 * uni(rng);
        const double f0_end = f0_start * (0.85 + 0.3 * uni(rng));
        const double formants[3] = {300.0 + 500.0 * uni(rng), 900.0 + 1400.0 * uni(rng),
                                    2400.0 + 800.0 * uni(rng)};
        const bool fricative = uni(rng) < 0.45;
        const double level = 0.6 + 0.4 * uni(rng);
        const std::size_t ramp = std::max<std::size_t>(1, syl / 6);

        const int harmonics = static_cast<int>(7000.0 / std::max(f0_start, f0_end));
        std::vector<double> amp(harmonics + 1);
        std::vector<double> phase0(harmonics + 1);
        for (int h = 1; h <= harmonics; ++h) {
            const double f = h * f0_start;
            amp[h] = formant_gain(f, formants) * std::pow(2.0, tilt_db_per_octave / 6.02 * std::log2(f / 100.0));
            phase0[h] = 2.0 * kPi * uni(rng);
        }

        double phase = 0.0;
        for (std::size_t i = 0; i < syl; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(syl);
            const double f0 = f0_start + (f0_end - f0_start) * t;
            phase += 2.0 * kPi * f0 / rate_hz;
            double voiced = 0.0;
            for (int h = 1; h <= harmonics; ++h) voiced += amp[h] * std::sin(h * phase + phase0[h]);
            const double env = syllable_envelope(i, syl, ramp) * level;
            const double noisy = fricative ? noise[pos + i] * 3.0 : noise[pos + i] * 0.3;
            out[pos + i] = env * ((1.0 - noise_share) * voiced * 0.15 + noise_share * noisy);
        }
        pos += syl + gap;
    }
    return peak_scaled(std::move(out), 0.5);
}

}  // namespace

SampleBuffer tone(double freq_hz, double seconds, double rate_hz, double amplitude, double phase) {
    std::vector<double> x(samples_for(seconds, rate_hz));
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = amplitude * std::sin(2.0 * kPi * freq_hz * static_cast<double>(i) / rate_hz + phase);
    }
    return SampleBuffer(std::move(x), rate_hz);
}

SampleBuffer silence(double seconds, double rate_hz) {
    return SampleBuffer(std::vector<double>(samples_for(seconds, rate_hz), 0.0), rate_hz);
}

SampleBuffer constant(double value, double seconds, double rate_hz) {
    return SampleBuffer(std::vector<double>(samples_for(seconds, rate_hz), value), rate_hz);
}

SampleBuffer white_noise(double seconds, double rate_hz, double rms, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, rms);
    std::vector<double> x(samples_for(seconds, rate_hz));
    for (double& v : x) v = std::clamp(gauss(rng), -1.0, 1.0);
    return SampleBuffer(std::move(x), rate_hz);
}

SampleBuffer band_noise(double seconds, double rate_hz, double lo_hz, double hi_hz, double rms,
                        unsigned seed) {
    std::mt19937 rng(seed);
    auto x = shaped_noise(samples_for(seconds, rate_hz), rate_hz, lo_hz, hi_hz, rng);
    double e = 0.0;
    for (double v : x) e += v * v;
    const double current = std::sqrt(e / static_cast<double>(x.size()));
    for (double& v : x) v *= rms / current;
    return SampleBuffer(std::move(x), rate_hz);
}

SampleBuffer speech_like(double seconds, double rate_hz, unsigned seed) {
    return SampleBuffer(synth_speech(seconds, rate_hz, seed, 0.25, -3.0, 2500.0, 7500.0), rate_hz);
}

SampleBuffer full_band_speech(double seconds, double rate_hz, unsigned seed) {
    return SampleBuffer(synth_speech(seconds, rate_hz, seed, 0.8, 0.0, 150.0, 8000.0), rate_hz);
}

SampleBuffer concat(std::initializer_list<SampleBuffer> parts) {
    std::vector<double> out;
    double rate = 1.0;
    for (const auto& p : parts) {
        out.insert(out.end(), p.samples().begin(), p.samples().end());
        rate = p.sample_rate_hz();
    }
    return SampleBuffer(std::move(out), rate);
}

SampleBuffer scaled(const SampleBuffer& x, double gain) {
    std::vector<double> out(x.samples().begin(), x.samples().end());
    for (double& v : out) v *= gain;
    return SampleBuffer(std::move(out), x.sample_rate_hz());
}

SampleBuffer mixed(const SampleBuffer& a, const SampleBuffer& b) {
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    for (double& v : out) v = std::clamp(v, -1.0, 1.0);
    return SampleBuffer(std::move(out), a.sample_rate_hz());
}

std::vector<Named> speech_corpus(double rate_hz) {
    return {
        {"speech_a", speech_like(3.0, rate_hz, 11)},
        {"speech_b", speech_like(2.5, rate_hz, 23)},
        {"speech_c", speech_like(4.0, rate_hz, 37)},
        {"full_band_a", full_band_speech(3.0, rate_hz, 41)},
        {"full_band_b", full_band_speech(2.0, rate_hz, 59)},
        {"two_tones", mixed(tone(440.0, 2.0, rate_hz, 0.3), tone(2750.0, 2.0, rate_hz, 0.2))},
    };
}

TempDir::TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("susbam-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_wav(const SampleBuffer& x, const std::filesystem::path& path) {
    susbam::write_wav(susbam::to_pcm(x), path);
}

}  // namespace fixtures
