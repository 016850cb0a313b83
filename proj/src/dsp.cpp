#include "susbam/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <numeric>
#include <string>

#include "susbam/error.hpp"

namespace susbam::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

FirFilter design_lowpass(double cutoff_hz, double sample_rate_hz, std::size_t taps) {
    if (!(sample_rate_hz > 0.0)) {
        throw Error(ErrorCode::BadRate, "design rate must be positive");
    }
    if (!(cutoff_hz > 0.0) || cutoff_hz >= sample_rate_hz / 2.0) {
        throw Error(ErrorCode::BadCutoff, "cutoff " + std::to_string(cutoff_hz) +
                                              " Hz must lie in (0, " +
                                              std::to_string(sample_rate_hz / 2.0) + ")");
    }
    if (taps < 3 || taps % 2 == 0) {
        throw Error(ErrorCode::BadTaps, "tap count must be odd and >= 3, got " + std::to_string(taps));
    }
    if (taps < 63) {
        std::clog << "warning: " << taps << "-tap low-pass has a very wide transition band\n";
    }

    const std::size_t centre = taps / 2;
    const double fc = cutoff_hz / sample_rate_hz;
    std::vector<double> h(taps);
    for (std::size_t i = 0; i <= centre; ++i) {
        const double offset = static_cast<double>(centre - i);
        const double hamming =
            0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(taps - 1));
        h[i] = 2.0 * fc * sinc(2.0 * fc * offset) * hamming;
        h[taps - 1 - i] = h[i];
    }
    const double sum = std::accumulate(h.begin(), h.end(), 0.0);
    for (double& c : h) c /= sum;

    return FirFilter{std::move(h), cutoff_hz, sample_rate_hz};
}

SampleBuffer apply_filter(const FirFilter& filter, const SampleBuffer& signal) {
    if (signal.sample_rate_hz() != filter.design_rate_hz) {
        throw Error(ErrorCode::RateMismatch,
                    "signal at " + std::to_string(signal.sample_rate_hz()) + " Hz, filter designed for " +
                        std::to_string(filter.design_rate_hz) + " Hz");
    }
    const auto x = signal.samples();
    const auto& h = filter.taps;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t taps = static_cast<std::ptrdiff_t>(h.size());
    const std::ptrdiff_t delay = static_cast<std::ptrdiff_t>(filter.group_delay());

    // y[i] = sum_k h[k] * x[i + delay - k]
    std::vector<double> y(x.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, i + delay - (n - 1));
        const std::ptrdiff_t k_hi = std::min<std::ptrdiff_t>(taps - 1, i + delay);
        double acc = 0.0;
        const double* xp = x.data() + (i + delay);
        for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) acc += h[k] * xp[-k];
        y[i] = acc;
    }
    return SampleBuffer(std::move(y), signal.sample_rate_hz());
}

double magnitude_response(const FirFilter& filter, double freq_hz) {
    const double w = 2.0 * kPi * freq_hz / filter.design_rate_hz;
    Complex acc{};
    for (std::size_t k = 0; k < filter.taps.size(); ++k) {
        acc += filter.taps[k] * std::polar(1.0, -w * static_cast<double>(k));
    }
    return std::abs(acc);
}

SampleBuffer hilbert(const SampleBuffer& signal) {
    if (signal.empty()) {
        throw Error(ErrorCode::EmptySignal, "hilbert of an empty signal");
    }
    const std::size_t n = signal.size();
    std::vector<Complex> x(signal.samples().begin(), signal.samples().end());
    auto spectrum = dft(x);

    // Analytic-signal weights: DC (and Nyquist when n is even) x1, positive x2, negative x0.
    const std::size_t positive_end = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
    for (std::size_t k = 1; k < positive_end; ++k) spectrum[k] *= 2.0;
    for (std::size_t k = (n % 2 == 0) ? n / 2 + 1 : positive_end; k < n; ++k) spectrum[k] = 0.0;

    const auto analytic = idft(spectrum);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = analytic[i].imag();
    return SampleBuffer(std::move(out), signal.sample_rate_hz());
}

std::vector<double> tukey_window(const WindowSpec& spec) {
    if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
        throw Error(ErrorCode::BadAlpha, "alpha " + std::to_string(spec.alpha) + " outside [0, 1]");
    }
    if (spec.length < 2) {
        throw Error(ErrorCode::InvalidArgument, "window length must be >= 2");
    }
    const std::size_t n = spec.length;
    std::vector<double> w(n, 1.0);
    if (spec.alpha == 0.0) return w;

    const double span = static_cast<double>(n - 1);
    const double ramp = spec.alpha * span / 2.0;
    // Evaluated on the left half and mirrored, so the taper is exactly symmetric.
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        const double m = static_cast<double>(i);
        double v = 1.0;
        if (m < ramp) v = 0.5 * (1.0 + std::cos(kPi * (-1.0 + 2.0 * m / (spec.alpha * span))));
        w[i] = v;
        w[n - 1 - i] = v;
    }
    w.front() = 0.0;
    w.back() = 0.0;
    return w;
}

SampleBuffer peak_normalize(const SampleBuffer& signal, double target) {
    if (signal.empty()) {
        throw Error(ErrorCode::EmptySignal, "cannot normalize an empty signal");
    }
    if (!(target > 0.0 && target <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "normalization target must lie in (0, 1]");
    }
    const auto x = signal.samples();
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return signal;

    const double gain = target / peak;
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [gain](double v) { return v * gain; });
    return SampleBuffer(std::move(out), signal.sample_rate_hz());
}

namespace {

// Kaiser-windowed sinc interpolation kernel, in units of input samples.
struct InterpolationKernel {
    static constexpr double kRolloff = 0.95;
    static constexpr double kZeroCrossings = 64.0;
    static constexpr double kBeta = 6.0;

    double scale;       // min(1, new/old): shrinks the passband when decimating
    double half_width;  // input samples

    explicit InterpolationKernel(double ratio)
        : scale(std::min(1.0, ratio)), half_width(kZeroCrossings / std::min(1.0, ratio)) {}

    double operator()(double d) const {
        const double u = d / half_width;
        if (std::abs(u) >= 1.0) return 0.0;
        const double fc = 0.5 * scale * kRolloff;
        const double kaiser = std::cyl_bessel_i(0.0, kBeta * std::sqrt(1.0 - u * u)) /
                              std::cyl_bessel_i(0.0, kBeta);
        return 2.0 * fc * sinc(2.0 * fc * d) * kaiser;
    }
};

bool is_integral(double v) { return std::floor(v) == v && v < 1e12; }

SampleBuffer resample_polyphase(const SampleBuffer& signal, std::uint64_t up, std::uint64_t down,
                                double new_rate_hz) {
    const InterpolationKernel kernel(static_cast<double>(up) / static_cast<double>(down));
    const auto reach = static_cast<std::ptrdiff_t>(std::ceil(kernel.half_width));
    const std::size_t width = static_cast<std::size_t>(2 * reach);

    // bank[phase][j] weights input index (base - reach + 1 + j) for output time base + phase/up.
    std::vector<double> bank(up * width);
    for (std::uint64_t phase = 0; phase < up; ++phase) {
        double* row = bank.data() + phase * width;
        const double frac = static_cast<double>(phase) / static_cast<double>(up);
        double sum = 0.0;
        for (std::size_t j = 0; j < width; ++j) {
            row[j] = kernel(frac + static_cast<double>(reach - 1) - static_cast<double>(j));
            sum += row[j];
        }
        for (std::size_t j = 0; j < width; ++j) row[j] /= sum;
    }

    const auto x = signal.samples();
    const auto n_in = static_cast<std::ptrdiff_t>(x.size());
    const std::size_t n_out = static_cast<std::size_t>((x.size() * up + down - 1) / down);
    std::vector<double> y(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        const std::uint64_t pos = i * down;
        const auto base = static_cast<std::ptrdiff_t>(pos / up);
        const double* row = bank.data() + (pos % up) * width;
        const std::ptrdiff_t first = base - reach + 1;
        const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, -first);
        const std::ptrdiff_t j_hi =
            std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(width), n_in - first);
        double acc = 0.0;
        for (std::ptrdiff_t j = j_lo; j < j_hi; ++j) acc += row[j] * x[first + j];
        y[i] = acc;
    }
    return SampleBuffer(std::move(y), new_rate_hz);
}

SampleBuffer resample_direct(const SampleBuffer& signal, double new_rate_hz) {
    const double step = signal.sample_rate_hz() / new_rate_hz;  // input samples per output sample
    const InterpolationKernel kernel(1.0 / step);

    // Dense kernel table, linearly interpolated.
    constexpr int kOversample = 512;
    const auto table_len = static_cast<std::size_t>(std::ceil(kernel.half_width * kOversample)) + 2;
    std::vector<double> table(table_len);
    for (std::size_t i = 0; i < table_len; ++i) {
        table[i] = kernel(static_cast<double>(i) / kOversample);
    }
    auto lookup = [&](double d) {
        const double t = std::abs(d) * kOversample;
        const auto i = static_cast<std::size_t>(t);
        if (i + 1 >= table_len) return 0.0;
        const double f = t - static_cast<double>(i);
        return table[i] * (1.0 - f) + table[i + 1] * f;
    };

    const auto x = signal.samples();
    const auto n_in = static_cast<std::ptrdiff_t>(x.size());
    const auto n_out = static_cast<std::size_t>(std::ceil(static_cast<double>(x.size()) / step));
    const auto reach = static_cast<std::ptrdiff_t>(std::ceil(kernel.half_width));
    std::vector<double> y(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double t = static_cast<double>(i) * step;
        const auto centre = static_cast<std::ptrdiff_t>(std::floor(t));
        double acc = 0.0;
        double norm = 0.0;
        for (std::ptrdiff_t k = centre - reach + 1; k <= centre + reach; ++k) {
            const double w = lookup(t - static_cast<double>(k));
            norm += w;
            if (k >= 0 && k < n_in) acc += w * x[k];
        }
        y[i] = norm != 0.0 ? acc / norm : 0.0;
    }
    return SampleBuffer(std::move(y), new_rate_hz);
}

}  // namespace

SampleBuffer resample(const SampleBuffer& signal, double new_rate_hz) {
    if (!(new_rate_hz > 0.0) || !std::isfinite(new_rate_hz)) {
        throw Error(ErrorCode::BadRate, "target rate must be positive");
    }
    const double old_rate = signal.sample_rate_hz();
    if (new_rate_hz == old_rate || signal.empty()) {
        return SampleBuffer(std::vector<double>(signal.samples().begin(), signal.samples().end()),
                            new_rate_hz);
    }
    if (is_integral(old_rate) && is_integral(new_rate_hz)) {
        const auto a = static_cast<std::uint64_t>(old_rate);
        const auto b = static_cast<std::uint64_t>(new_rate_hz);
        const std::uint64_t g = std::gcd(a, b);
        const std::uint64_t up = b / g;
        const std::uint64_t down = a / g;
        if (up <= 4096) return resample_polyphase(signal, up, down, new_rate_hz);
    }
    return resample_direct(signal, new_rate_hz);
}

}  // namespace susbam::dsp
