#include "susbam/sample_buffer.hpp"

#include <algorithm>
#include <cmath>

#include "susbam/error.hpp"

namespace susbam {

SampleBuffer::SampleBuffer(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
    if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
        throw Error(ErrorCode::BadRate, "sample rate must be positive and finite");
    }
    if (!std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorCode::InvalidArgument, "sample buffer contains NaN or Inf");
    }
}

}  // namespace susbam
