#include "susbam/demodulator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "susbam/dsp.hpp"
#include "susbam/error.hpp"
#include "susbam/spectral.hpp"
#include "susbam/wav_io.hpp"

namespace susbam {

namespace {

constexpr int kPhaseCandidates = 16;
constexpr double kNothingRecovered = 1e-4;  // -40 dB

double energy(std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += v * v;
    return sum;
}

}  // namespace

void DemodulationConfig::validate(double sample_rate_hz) const {
    if (!(carrier_hz > 0.0) || !(recovery_cutoff_hz > 0.0)) {
        throw Error(ErrorCode::ConfigInvalid, "carrier and recovery cutoff must be positive");
    }
    if (carrier_hz + recovery_cutoff_hz > sample_rate_hz / 2.0) {
        std::ostringstream msg;
        msg << "carrier " << carrier_hz << " Hz + cutoff " << recovery_cutoff_hz
            << " Hz exceeds Nyquist " << sample_rate_hz / 2.0 << " Hz";
        throw Error(ErrorCode::ConfigInvalid, msg.str());
    }
    if (filter_taps < 3 || filter_taps % 2 == 0) {
        throw Error(ErrorCode::ConfigInvalid, "filter taps must be odd and >= 3");
    }
}

SampleBuffer demodulate(const SampleBuffer& input, const DemodulationConfig& config) {
    if (input.empty()) throw Error(ErrorCode::EmptySignal, "nothing to demodulate");
    const double rate = input.sample_rate_hz();
    config.validate(rate);

    const auto lowpass = dsp::design_lowpass(config.recovery_cutoff_hz, rate, config.filter_taps);
    const double w = 2.0 * std::numbers::pi * config.carrier_hz / rate;
    const auto y = input.samples();

    auto detect_at = [&](double phase) {
        std::vector<double> mixed(y.size());
        for (std::size_t n = 0; n < y.size(); ++n) {
            mixed[n] = 2.0 * y[n] * std::cos(w * static_cast<double>(n) + phase);
        }
        return dsp::apply_filter(lowpass, SampleBuffer(std::move(mixed), rate));
    };

    auto best = detect_at(0.0);
    if (config.phase_search) {
        double best_energy = energy(best.samples());
        for (int k = 1; k < kPhaseCandidates; ++k) {
            auto candidate = detect_at(2.0 * std::numbers::pi * k / kPhaseCandidates);
            const double e = energy(candidate.samples());
            if (e > best_energy) {
                best_energy = e;
                best = std::move(candidate);
            }
        }
    }

    if (energy(best.samples()) <= kNothingRecovered * energy(y)) return best;
    return dsp::peak_normalize(best, 1.0);
}

double recovered_bandwidth(const SampleBuffer& recovered) {
    if (recovered.empty()) throw Error(ErrorCode::EmptySignal, "bandwidth of an empty signal");
    return spectral::PowerSpectrum::of(recovered.samples(), recovered.sample_rate_hz()).quantile(0.95);
}

DemodulationReport demodulate_file(const std::filesystem::path& in_path,
                                   const std::filesystem::path& out_path,
                                   const DemodulationConfig& config, std::size_t channel) {
    const auto input = to_float(read_wav(in_path), channel);
    const auto recovered = demodulate(input, config);
    write_wav(to_pcm(recovered), out_path);
    return {recovered_bandwidth(recovered), recovered.sample_rate_hz()};
}

}  // namespace susbam
