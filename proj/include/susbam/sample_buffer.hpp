#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace susbam {

/// Real-valued audio at a known sample rate. Nominal amplitude range is
/// [-1, 1]; construction rejects non-finite samples and non-positive rates.
class SampleBuffer {
public:
    SampleBuffer() = default;
    SampleBuffer(std::vector<double> samples, double sample_rate_hz);

    std::span<const double> samples() const noexcept { return samples_; }
    double sample_rate_hz() const noexcept { return sample_rate_hz_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }

    /// Moves the sample vector out, leaving the buffer empty.
    std::vector<double> release() && noexcept { return std::move(samples_); }

    friend bool operator==(const SampleBuffer&, const SampleBuffer&) = default;

private:
    std::vector<double> samples_;
    double sample_rate_hz_ = 1.0;
};

}  // namespace susbam
