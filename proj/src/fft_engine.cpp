#include "fft_engine.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace fbmre {
namespace fft {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

void real_symmetric_dft(const std::vector<double>& in, std::vector<double>& out_real) {
    const std::int64_t m = static_cast<std::int64_t>(in.size());
    out_real.assign(static_cast<std::size_t>(m / 2 + 1), 0.0);
    double* buf_in = fftw_alloc_real(static_cast<std::size_t>(m));
    fftw_complex* buf_out = fftw_alloc_complex(static_cast<std::size_t>(m / 2 + 1));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), buf_in, buf_out, FFTW_ESTIMATE);
    }
    if (plan == nullptr) {
        fftw_free(buf_in);
        fftw_free(buf_out);
        throw std::runtime_error("fftw r2c plan creation failed");
    }
    for (std::int64_t i = 0; i < m; ++i) buf_in[i] = in[static_cast<std::size_t>(i)];
    fftw_execute(plan);
    for (std::int64_t k = 0; k <= m / 2; ++k) out_real[static_cast<std::size_t>(k)] = buf_out[k][0];
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf_in);
    fftw_free(buf_out);
}

InverseTransform::InverseTransform(std::int64_t size_m) : m_(size_m) {
    spec_ = reinterpret_cast<double*>(fftw_alloc_complex(static_cast<std::size_t>(m_ / 2 + 1)));
    out_ = fftw_alloc_real(static_cast<std::size_t>(m_));
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(m_), reinterpret_cast<fftw_complex*>(spec_),
                                 out_, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("fftw c2r plan creation failed");
}

InverseTransform::~InverseTransform() {
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
    fftw_free(spec_);
    fftw_free(out_);
}

void InverseTransform::execute() {
    fftw_execute(static_cast<fftw_plan>(plan_));
}

} // namespace fft
} // namespace fbmre
