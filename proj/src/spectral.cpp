#include "susbam/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "susbam/error.hpp"

namespace susbam::spectral {

namespace {

double to_db(double power_ratio) {
    if (!(power_ratio > 0.0)) return kFloorDb;
    return std::max(kFloorDb, 10.0 * std::log10(power_ratio));
}

std::vector<double> hann(std::size_t n) {
    return dsp::tukey_window({dsp::WindowKind::tukey, 1.0, n});
}

}  // namespace

Spectrogram stft(const SampleBuffer& signal, std::size_t frame_len, std::size_t hop,
                 dsp::WindowSpec window) {
    if (frame_len < 16) throw Error(ErrorCode::InvalidArgument, "frame length must be >= 16");
    if (hop == 0 || hop > frame_len) {
        throw Error(ErrorCode::InvalidArgument, "hop must lie in (0, frame length]");
    }
    if (window.length == 0) window.length = frame_len;
    if (window.length != frame_len) {
        throw Error(ErrorCode::InvalidArgument, "window length differs from frame length");
    }
    if (signal.size() < frame_len) {
        throw Error(ErrorCode::SignalTooShort, std::to_string(signal.size()) +
                                                   " samples, need at least " +
                                                   std::to_string(frame_len));
    }

    const auto w = dsp::tukey_window(window);
    double w_sum = 0.0;
    for (double v : w) w_sum += v;

    const double rate = signal.sample_rate_hz();
    const std::size_t frames = (signal.size() - frame_len) / hop + 1;
    const std::size_t bins = frame_len / 2 + 1;

    Spectrogram spec;
    spec.frame_times.resize(frames);
    spec.bin_freqs.resize(bins);
    spec.magnitudes_db.resize(frames * bins);
    for (std::size_t k = 0; k < bins; ++k) {
        spec.bin_freqs[k] = static_cast<double>(k) * rate / static_cast<double>(frame_len);
    }

    const auto x = signal.samples();
    std::vector<double> frame(frame_len);
    for (std::size_t f = 0; f < frames; ++f) {
        const std::size_t start = f * hop;
        spec.frame_times[f] = (static_cast<double>(start) + static_cast<double>(frame_len) / 2.0) / rate;
        for (std::size_t i = 0; i < frame_len; ++i) frame[i] = x[start + i] * w[i];
        const auto X = dsp::rdft(frame);
        for (std::size_t k = 0; k < bins; ++k) {
            const bool edge = k == 0 || (frame_len % 2 == 0 && k == bins - 1);
            const double amplitude = std::abs(X[k]) * (edge ? 1.0 : 2.0) / w_sum;
            spec.magnitudes_db[f * bins + k] =
                amplitude > 0.0 ? std::max(kFloorDb, 20.0 * std::log10(amplitude)) : kFloorDb;
        }
    }
    return spec;
}

PowerSpectrum PowerSpectrum::of(std::span<const double> samples, double sample_rate_hz) {
    const std::size_t n = samples.size();
    PowerSpectrum ps;
    ps.nyquist_hz = sample_rate_hz / 2.0;
    if (n == 0) return ps;
    ps.bin_hz = sample_rate_hz / static_cast<double>(n);
    const auto X = dsp::rdft(samples);
    ps.power.resize(X.size());
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < X.size(); ++k) {
        const bool edge = k == 0 || (n % 2 == 0 && k == X.size() - 1);
        ps.power[k] = std::norm(X[k]) * inv_n * (edge ? 1.0 : 2.0);
    }
    return ps;
}

double PowerSpectrum::total() const {
    double sum = 0.0;
    for (double p : power) sum += p;
    return sum;
}

double PowerSpectrum::band(double lo_hz, double hi_hz) const {
    double sum = 0.0;
    const bool to_nyquist = hi_hz >= nyquist_hz;
    for (std::size_t k = 0; k < power.size(); ++k) {
        const double f = frequency(k);
        if (f >= lo_hz && (f < hi_hz || (to_nyquist && f <= hi_hz))) sum += power[k];
    }
    return sum;
}

double PowerSpectrum::quantile(double fraction) const {
    const double target = fraction * total();
    if (!(target > 0.0)) return 0.0;
    double cumulative = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k) {
        cumulative += power[k];
        if (cumulative >= target) return frequency(k);
    }
    return frequency(power.size() - 1);
}

double band_energy(const SampleBuffer& signal, double lo_hz, double hi_hz) {
    const double nyquist = signal.sample_rate_hz() / 2.0;
    if (!(lo_hz >= 0.0 && lo_hz < hi_hz && hi_hz <= nyquist)) {
        throw Error(ErrorCode::BadBand, "band [" + std::to_string(lo_hz) + ", " +
                                            std::to_string(hi_hz) + "] outside [0, " +
                                            std::to_string(nyquist) + "]");
    }
    return PowerSpectrum::of(signal.samples(), signal.sample_rate_hz()).band(lo_hz, hi_hz);
}

std::pair<std::size_t, std::size_t> tukey_flat_region(std::size_t length, double alpha) {
    if (length < 2 || alpha <= 0.0) return {0, length};
    const double ramp = alpha * static_cast<double>(length - 1) / 2.0;
    const auto begin = static_cast<std::size_t>(std::ceil(ramp));
    const std::size_t end = length - begin;
    if (begin >= end) return {length / 2, length / 2 + 1};
    return {begin, end};
}

BandMetrics measure(const SampleBuffer& signal, const ModulationConfig& config) {
    BandMetrics metrics;
    if (signal.empty()) return metrics;

    auto [begin, end] = tukey_flat_region(signal.size(), config.tukey_alpha);
    if (end - begin < 64) {
        begin = 0;
        end = signal.size();
    }
    const std::size_t n = end - begin;
    const auto w = n >= 2 ? hann(n) : std::vector<double>(n, 1.0);
    std::vector<double> region(n);
    double w_power = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        region[i] = signal[begin + i] * w[i];
        w_power += w[i] * w[i];
    }

    const auto ps = PowerSpectrum::of(region, signal.sample_rate_hz());
    const double total = ps.total();
    if (!(total > 0.0)) return metrics;

    const double inband = ps.band(config.carrier_hz, config.carrier_hz + config.cutoff_hz);
    metrics.inband_energy_db = to_db(inband / w_power);
    metrics.leakage_below_carrier_db = to_db(ps.band(0.0, config.carrier_hz) / total);
    metrics.occupancy_lo_hz = ps.quantile(0.05);
    metrics.occupancy_hi_hz = ps.quantile(0.95);

    // Tone pair: a dominant line above the carrier and its mirror below it.
    constexpr std::ptrdiff_t kLobe = 3;  // Hann main lobe plus margin, in bins
    const auto peak = static_cast<std::ptrdiff_t>(
        std::max_element(ps.power.begin(), ps.power.end()) - ps.power.begin());
    auto lobe_power = [&](std::ptrdiff_t centre) {
        double sum = 0.0;
        for (std::ptrdiff_t k = centre - kLobe; k <= centre + kLobe; ++k) {
            if (k >= 0 && k < static_cast<std::ptrdiff_t>(ps.power.size())) sum += ps.power[k];
        }
        return sum;
    };
    const double tone_power = lobe_power(peak);
    const double offset_hz = ps.frequency(static_cast<std::size_t>(peak)) - config.carrier_hz;
    if (tone_power >= 0.5 * total && offset_hz > 0.0 && offset_hz < config.carrier_hz) {
        const auto image = static_cast<std::ptrdiff_t>(
            std::llround((config.carrier_hz - offset_hz) / ps.bin_hz));
        metrics.sideband_suppression_db = to_db(lobe_power(image) / tone_power);
    }
    return metrics;
}

DetectionVerdict detect(const SampleBuffer& signal, const DetectorConfig& config) {
    const double rate = signal.sample_rate_hz();
    const double nyquist = rate / 2.0;
    if (!(config.carrier_hz > 0.0 && config.band_hz > 0.0) ||
        config.carrier_hz + config.band_hz > nyquist || config.reference_hi_hz > nyquist ||
        !(config.reference_lo_hz >= 0.0 && config.reference_lo_hz < config.reference_hi_hz)) {
        throw Error(ErrorCode::BadBand, "detector bands do not fit under Nyquist " +
                                            std::to_string(nyquist) + " Hz");
    }
    if (!(config.ratio_threshold > 0.0 && config.sustain_ms > 0.0 && config.frame_ms > 0.0 &&
          config.hop_ms > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "detector thresholds must be positive");
    }

    DetectionVerdict verdict;
    if (signal.empty()) return verdict;

    const auto frame_len = std::max<std::size_t>(
        16, static_cast<std::size_t>(std::llround(config.frame_ms * rate / 1000.0)));
    const auto hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(config.hop_ms * rate / 1000.0)));
    const std::size_t len = signal.size();
    const std::size_t frames = len >= frame_len ? (len - frame_len) / hop + 1 : 1;
    const std::size_t span = std::min(frame_len, len);

    const auto x = signal.samples();
    verdict.frame_flags.resize(frames);
    verdict.frame_ratios.resize(frames);
    std::size_t flagged_frames = 0;
    std::size_t run = 0;
    std::size_t longest_run = 0;
    for (std::size_t f = 0; f < frames; ++f) {
        const auto ps = PowerSpectrum::of(x.subspan(f * hop, span), rate);
        const double attack = ps.band(config.carrier_hz, config.carrier_hz + config.band_hz);
        const double reference = ps.band(config.reference_lo_hz, config.reference_hi_hz);
        const double ratio = reference > 0.0 ? attack / reference
                             : attack > 0.0  ? std::numeric_limits<double>::infinity()
                                             : 0.0;
        const bool flag = ratio > config.ratio_threshold &&
                          attack / static_cast<double>(span) >= config.min_attack_power;
        verdict.frame_ratios[f] = ratio;
        verdict.frame_flags[f] = flag;
        if (flag) {
            ++flagged_frames;
            longest_run = std::max(longest_run, ++run);
        } else {
            run = 0;
        }
    }

    verdict.score = static_cast<double>(flagged_frames) / static_cast<double>(frames);
    // first to last flagged frame start; for a burst of length d in silence
    // this lands in [d, d + hop]
    if (longest_run > 0) {
        verdict.sustained_ms = static_cast<double>((longest_run - 1) * hop) * 1000.0 / rate;
    }
    verdict.flagged = longest_run > 0 && verdict.sustained_ms >= config.sustain_ms;
    return verdict;
}

std::vector<std::uint8_t> encode_pgm(const Spectrogram& spec) {
    const std::size_t width = spec.frames();
    const std::size_t height = spec.bins();
    const std::string header =
        "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + width * height);
    for (std::size_t row = 0; row < height; ++row) {
        const std::size_t bin = height - 1 - row;
        for (std::size_t col = 0; col < width; ++col) {
            const double level = std::clamp((spec.at(col, bin) - kFloorDb) / -kFloorDb, 0.0, 1.0);
            out.push_back(static_cast<std::uint8_t>(std::lround(level * 255.0)));
        }
    }
    return out;
}

void render_spectrogram(const Spectrogram& spec, const std::filesystem::path& out_path) {
    const auto bytes = encode_pgm(spec);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + out_path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "write failed on " + out_path.string());
}

}  // namespace susbam::spectral
