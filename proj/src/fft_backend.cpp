#include "burgers3d/fft_backend.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace burgers3d {
namespace fft {

namespace {

std::mutex plan_mutex;
std::map<std::array<int, 4>, fftw_plan> plan_cache;

fftw_plan plan_for(const std::array<int, 3>& dims, int sign) {
    const std::array<int, 4> key = {dims[0], dims[1], dims[2], sign};
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    // Plans are out-of-place; every execute call below passes distinct
    // buffers, which FFTW requires to match the plan's placement.
    const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    std::vector<std::complex<double>> dummy_in(total), dummy_out(total);
    fftw_plan p = fftw_plan_dft_3d(dims[0], dims[1], dims[2],
                                   reinterpret_cast<fftw_complex*>(dummy_in.data()),
                                   reinterpret_cast<fftw_complex*>(dummy_out.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_cache.emplace(key, p);
    return p;
}

} // namespace

void forward(const std::array<int, 3>& dims, std::complex<double>* in, std::complex<double>* out) {
    fftw_execute_dft(plan_for(dims, FFTW_FORWARD), reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
}

void backward(const std::array<int, 3>& dims, std::complex<double>* in, std::complex<double>* out) {
    fftw_execute_dft(plan_for(dims, FFTW_BACKWARD), reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
}

} // namespace fft
} // namespace burgers3d
