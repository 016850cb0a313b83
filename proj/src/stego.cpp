#include "susbam/stego.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "susbam/dsp.hpp"
#include "susbam/error.hpp"
#include "susbam/spectral.hpp"

namespace susbam::stego {

const SilenceRegion* SilenceMap::longest() const noexcept {
    const SilenceRegion* best = nullptr;
    for (const auto& r : regions) {
        if (best == nullptr || r.length() > best->length()) best = &r;
    }
    return best;
}

SilenceMap find_silence(const SampleBuffer& host, const SilenceOptions& options) {
    if (!(options.rms_threshold > 0.0 && options.frame_ms > 0.0 && options.min_region_ms > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "silence thresholds must be positive");
    }
    const double rate = host.sample_rate_hz();
    SilenceMap map{{}, options.rms_threshold, options.min_region_ms, rate};

    const auto frame = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(options.frame_ms * rate / 1000.0)));
    const auto min_len = static_cast<std::size_t>(std::ceil(options.min_region_ms * rate / 1000.0));
    const auto x = host.samples();
    const double threshold_sq = options.rms_threshold * options.rms_threshold;

    std::size_t run_start = 0;
    bool in_run = false;
    auto close_run = [&](std::size_t end) {
        if (in_run && end - run_start >= min_len) map.regions.push_back({run_start, end});
        in_run = false;
    };
    for (std::size_t start = 0; start < x.size(); start += frame) {
        const std::size_t end = std::min(x.size(), start + frame);
        double sum = 0.0;
        for (std::size_t i = start; i < end; ++i) sum += x[i] * x[i];
        const bool quiet = sum / static_cast<double>(end - start) < threshold_sq;
        if (quiet && !in_run) {
            run_start = start;
            in_run = true;
        } else if (!quiet) {
            close_run(start);
        }
    }
    close_run(x.size());
    return map;
}

Embedding embed(const SampleBuffer& host, const SampleBuffer& payload, const SilenceMap& map,
                double gain) {
    if (!(gain > 0.0 && gain <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "gain must lie in (0, 1]");
    }
    if (payload.empty()) throw Error(ErrorCode::EmptySignal, "empty payload");

    const double host_rate = host.sample_rate_hz();
    const double payload_top =
        spectral::PowerSpectrum::of(payload.samples(), payload.sample_rate_hz()).quantile(0.95);
    if (host_rate < 2.0 * payload_top) {
        throw Error(ErrorCode::RateTooLow,
                    "host rate " + std::to_string(host_rate) + " Hz cannot carry payload content up to " +
                        std::to_string(payload_top) + " Hz");
    }

    const auto placed = dsp::resample(payload, host_rate);
    const SilenceRegion* region = map.longest();
    if (region == nullptr || region->length() < placed.size() || region->end_sample > host.size()) {
        throw Error(ErrorCode::NoRoom,
                    "payload needs " + std::to_string(placed.size()) + " quiet samples, longest region has " +
                        std::to_string(region ? region->length() : 0));
    }

    std::vector<double> out(host.samples().begin(), host.samples().end());
    const std::size_t start = region->start_sample;
    for (std::size_t i = 0; i < placed.size(); ++i) {
        out[start + i] = std::clamp(out[start + i] + gain * placed[i], -1.0, 1.0);
    }
    return {SampleBuffer(std::move(out), host_rate), start, start + placed.size()};
}

}  // namespace susbam::stego
