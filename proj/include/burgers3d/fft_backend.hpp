#pragma once

#include <array>
#include <complex>
#include <vector>

namespace burgers3d {

/// Thin FFTW wrapper: unnormalized complex 3D transforms on row-major
/// (m1,m2,m3) buffers, with a process-wide plan cache. Plans are created
/// with FFTW_ESTIMATE|FFTW_UNALIGNED, so results are deterministic and the
/// same plan serves any buffer. Backward uses the e^{+ik.x} convention, so
/// it matches synthesis of f(x) = sum_k fhat_k e^{i k.x}; forward needs a
/// 1/(m1*m2*m3) normalization for analysis.
namespace fft {

void forward(const std::array<int, 3>& dims, std::complex<double>* in, std::complex<double>* out);
void backward(const std::array<int, 3>& dims, std::complex<double>* in, std::complex<double>* out);

} // namespace fft

} // namespace burgers3d
