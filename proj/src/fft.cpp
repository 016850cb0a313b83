#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "susbam/dsp.hpp"

namespace susbam::dsp {

namespace {

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
    return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n))));
}

enum class PlanKind { forward, inverse, real_forward, real_inverse };

// FFTW's planner is not re-entrant. Plans are created once per (kind, size)
// under this lock and executed lock-free through the new-array interface.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(PlanKind kind, std::size_t n) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(kind, n);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        const int len = static_cast<int>(n);
        auto cin = fftw_buffer<fftw_complex>(n);
        auto cout = fftw_buffer<fftw_complex>(n);
        auto rbuf = fftw_buffer<double>(n);
        fftw_plan plan = nullptr;
        switch (kind) {
            case PlanKind::forward:
                plan = fftw_plan_dft_1d(len, cin.get(), cout.get(), FFTW_FORWARD, FFTW_ESTIMATE);
                break;
            case PlanKind::inverse:
                plan = fftw_plan_dft_1d(len, cin.get(), cout.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
                break;
            case PlanKind::real_forward:
                plan = fftw_plan_dft_r2c_1d(len, rbuf.get(), cout.get(), FFTW_ESTIMATE);
                break;
            case PlanKind::real_inverse:
                plan = fftw_plan_dft_c2r_1d(len, cin.get(), rbuf.get(), FFTW_ESTIMATE);
                break;
        }
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::pair<PlanKind, std::size_t>, fftw_plan> plans_;
};

std::vector<Complex> complex_transform(std::span<const Complex> x, PlanKind kind) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    auto in = fftw_buffer<fftw_complex>(n);
    auto out = fftw_buffer<fftw_complex>(n);
    for (std::size_t i = 0; i < n; ++i) {
        in[i][0] = x[i].real();
        in[i][1] = x[i].imag();
    }
    fftw_execute_dft(PlanCache::instance().get(kind, n), in.get(), out.get());

    const double scale = kind == PlanKind::inverse ? 1.0 / static_cast<double>(n) : 1.0;
    std::vector<Complex> result(n);
    for (std::size_t i = 0; i < n; ++i) {
        result[i] = Complex(out[i][0] * scale, out[i][1] * scale);
    }
    return result;
}

}  // namespace

std::vector<Complex> dft(std::span<const Complex> x) {
    return complex_transform(x, PlanKind::forward);
}

std::vector<Complex> idft(std::span<const Complex> x) {
    return complex_transform(x, PlanKind::inverse);
}

std::vector<Complex> rdft(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const std::size_t bins = n / 2 + 1;
    auto in = fftw_buffer<double>(n);
    auto out = fftw_buffer<fftw_complex>(bins);
    std::copy(x.begin(), x.end(), in.get());
    fftw_execute_dft_r2c(PlanCache::instance().get(PlanKind::real_forward, n), in.get(),
                         out.get());
    std::vector<Complex> result(bins);
    for (std::size_t i = 0; i < bins; ++i) result[i] = Complex(out[i][0], out[i][1]);
    return result;
}

std::vector<double> irdft(std::span<const Complex> half, std::size_t n) {
    if (n == 0) return {};
    const std::size_t bins = n / 2 + 1;
    auto in = fftw_buffer<fftw_complex>(bins);
    auto out = fftw_buffer<double>(n);
    for (std::size_t i = 0; i < bins; ++i) {
        const Complex v = i < half.size() ? half[i] : Complex{};
        in[i][0] = v.real();
        in[i][1] = v.imag();
    }
    // c2r destroys its input, which is our private copy.
    fftw_execute_dft_c2r(PlanCache::instance().get(PlanKind::real_inverse, n), in.get(),
                         out.get());
    std::vector<double> result(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) result[i] = out[i] * scale;
    return result;
}

}  // namespace susbam::dsp
