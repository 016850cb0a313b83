#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "susbam/sample_buffer.hpp"

namespace susbam::dsp {

using Complex = std::complex<double>;

// Discrete Fourier transform, any length, unnormalized forward and 1/N
// inverse. Backed by FFTW; plan creation is serialized internally so these
// may be called from several threads.
std::vector<Complex> dft(std::span<const Complex> x);
std::vector<Complex> idft(std::span<const Complex> x);

/// Non-negative half spectrum of a real signal: n/2 + 1 bins.
std::vector<Complex> rdft(std::span<const double> x);

/// Inverse of rdft for a signal of length n (half spectrum of n/2 + 1 bins).
std::vector<double> irdft(std::span<const Complex> half, std::size_t n);

/// Linear-phase FIR low-pass. Tap count is odd so the group delay is an
/// integer number of samples.
struct FirFilter {
    std::vector<double> taps;
    double cutoff_hz = 0.0;
    double design_rate_hz = 0.0;

    std::size_t group_delay() const noexcept { return taps.size() / 2; }
};

inline constexpr std::size_t kDefaultFilterTaps = 255;

/// Hamming-windowed sinc, normalized to unit DC gain.
FirFilter design_lowpass(double cutoff_hz, double sample_rate_hz,
                         std::size_t taps = kDefaultFilterTaps);

/// Zero-padded linear convolution, shifted by the group delay so the output
/// is aligned with (and as long as) the input.
SampleBuffer apply_filter(const FirFilter& filter, const SampleBuffer& signal);

/// Magnitude response of `filter` at `freq_hz`.
double magnitude_response(const FirFilter& filter, double freq_hz);

/// Imaginary part of the analytic signal, computed over the whole buffer with
/// one forward and one inverse DFT.
SampleBuffer hilbert(const SampleBuffer& signal);

enum class WindowKind { tukey };

struct WindowSpec {
    WindowKind kind = WindowKind::tukey;
    double alpha = 0.05;
    std::size_t length = 0;
};

/// Tapered cosine. alpha = 0 is rectangular, alpha = 1 is the (symmetric) Hann window.
std::vector<double> tukey_window(const WindowSpec& spec);

/// Scales so that max |x| == target. An all-zero signal is returned unchanged.
SampleBuffer peak_normalize(const SampleBuffer& signal, double target = 1.0);

/// Band-limited resampling by windowed-sinc interpolation. Integer rate pairs
/// use a precomputed polyphase bank; other ratios evaluate the kernel directly.
SampleBuffer resample(const SampleBuffer& signal, double new_rate_hz);

}  // namespace susbam::dsp
