#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace hwm::fft {
namespace {

// The FFTW planner is not thread-safe; execution on distinct buffers is.
std::mutex planner_mutex;

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

class Plan {
public:
    explicit Plan(std::size_t n) : n_(n) {
        real_.reset(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
        spec_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
        std::lock_guard lock(planner_mutex);
        const int size = static_cast<int>(n);
        r2c_ = fftw_plan_dft_r2c_1d(size, real_.get(), spec_.get(), FFTW_ESTIMATE);
        c2r_ = fftw_plan_dft_c2r_1d(size, spec_.get(), real_.get(), FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex);
        fftw_destroy_plan(r2c_);
        fftw_destroy_plan(c2r_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void forward(std::span<const double> in, std::span<cplx> out) {
        std::copy(in.begin(), in.end(), real_.get());
        fftw_execute(r2c_);
        std::memcpy(static_cast<void*>(out.data()), spec_.get(), sizeof(fftw_complex) * (n_ / 2 + 1));
    }

    void inverse(std::span<const cplx> in, std::span<double> out) {
        // c2r destroys its input, hence the copy into the plan buffer.
        std::memcpy(spec_.get(), in.data(), sizeof(fftw_complex) * (n_ / 2 + 1));
        fftw_execute(c2r_);
        const double scale = 1.0 / static_cast<double>(n_);
        std::transform(real_.get(), real_.get() + n_, out.begin(), [scale](double v) { return v * scale; });
    }

private:
    std::size_t n_;
    std::unique_ptr<double, FftwFree> real_;
    std::unique_ptr<fftw_complex, FftwFree> spec_;
    fftw_plan r2c_{};
    fftw_plan c2r_{};
};

Plan& plan_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<Plan>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Plan>(n);
    return *slot;
}

} // namespace

void forward(std::span<const double> in, std::span<cplx> out) { plan_for(in.size()).forward(in, out); }

void inverse(std::span<const cplx> in, std::span<double> out) { plan_for(out.size()).inverse(in, out); }

} // namespace hwm::fft
