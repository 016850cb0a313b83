#include "susbam/modulator.hpp"

#include <cmath>
#include <numbers>

#include "susbam/dsp.hpp"
#include "susbam/error.hpp"
#include "susbam/wav_io.hpp"

namespace susbam {

SampleBuffer modulate(const SampleBuffer& input, const ModulationConfig& config) {
    config.validate();
    if (input.empty()) throw Error(ErrorCode::EmptySignal, "nothing to modulate");

    const double rate = config.working_rate_hz;
    const auto working = dsp::resample(input, rate);
    const auto lowpass = dsp::design_lowpass(config.cutoff_hz, rate, config.filter_taps);
    const auto baseband = dsp::peak_normalize(dsp::apply_filter(lowpass, working), 1.0);
    const auto quadrature = dsp::hilbert(baseband);
    const auto window =
        dsp::tukey_window({dsp::WindowKind::tukey, config.tukey_alpha, std::max<std::size_t>(baseband.size(), 2)});

    const double w = 2.0 * std::numbers::pi * config.carrier_hz / rate;
    std::vector<double> y(baseband.size());
    for (std::size_t n = 0; n < y.size(); ++n) {
        const double phase = w * static_cast<double>(n);
        y[n] = (baseband[n] * std::cos(phase) - quadrature[n] * std::sin(phase)) * window[n];
    }
    return dsp::peak_normalize(SampleBuffer(std::move(y), rate), config.normalize_target);
}

spectral::BandMetrics modulate_file(const std::filesystem::path& in_path,
                                    const std::filesystem::path& out_path,
                                    const ModulationConfig& config, std::size_t channel) {
    const auto input = to_float(read_wav(in_path), channel);
    write_wav(to_pcm(modulate(input, config)), out_path);
    return spectral::measure(to_float(read_wav(out_path)), config);
}

}  // namespace susbam
