#include "infmod/convolution.hpp"

#include <complex>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "infmod/error.hpp"

namespace infmod {

namespace {

// The FFTW planner is not reentrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t n) {
  return RealBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuffer alloc_complex(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

}  // namespace

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

struct KernelConvolver::Impl {
  std::size_t input_len = 0;
  std::size_t half = 0;
  std::size_t fft = 0;
  Mode mode = Mode::plain;
  std::vector<std::complex<double>> kernel_hat;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

KernelConvolver::KernelConvolver(std::span<const double> centred_kernel, std::size_t input_len,
                                 Mode mode)
    : impl_(std::make_unique<Impl>()) {
  if (centred_kernel.size() % 2 != 1) {
    throw Error(ErrorKind::precondition, "centred kernel must have odd length");
  }
  auto& s = *impl_;
  s.input_len = input_len;
  s.mode = mode;
  s.half = centred_kernel.size() / 2;
  const std::size_t signal_len = mode == Mode::plain ? input_len : 2 * input_len - 1;
  s.fft = next_power_of_two(signal_len + 2 * s.half);
  const std::size_t nc = s.fft / 2 + 1;

  RealBuffer real = alloc_real(s.fft);
  ComplexBuffer spec = alloc_complex(nc);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    const int n = static_cast<int>(s.fft);
    s.forward = fftw_plan_dft_r2c_1d(n, real.get(), spec.get(), FFTW_ESTIMATE);
    s.backward = fftw_plan_dft_c2r_1d(n, spec.get(), real.get(), FFTW_ESTIMATE);
  }
  std::memset(real.get(), 0, sizeof(double) * s.fft);
  std::memcpy(real.get(), centred_kernel.data(), sizeof(double) * centred_kernel.size());
  fftw_execute_dft_r2c(s.forward, real.get(), spec.get());
  s.kernel_hat.resize(nc);
  for (std::size_t k = 0; k < nc; ++k) s.kernel_hat[k] = {spec[k][0], spec[k][1]};
}

KernelConvolver::~KernelConvolver() = default;
KernelConvolver::KernelConvolver(KernelConvolver&&) noexcept = default;
KernelConvolver& KernelConvolver::operator=(KernelConvolver&&) noexcept = default;

std::size_t KernelConvolver::fft_size() const noexcept { return impl_->fft; }
std::size_t KernelConvolver::half_width() const noexcept { return impl_->half; }

std::vector<double> KernelConvolver::apply(std::span<const double> input) const {
  const auto& s = *impl_;
  if (input.size() != s.input_len) {
    throw Error(ErrorKind::grid_mismatch, "convolver input length mismatch");
  }
  const std::size_t nc = s.fft / 2 + 1;
  RealBuffer real = alloc_real(s.fft);
  ComplexBuffer spec = alloc_complex(nc);
  std::memset(real.get(), 0, sizeof(double) * s.fft);
  std::memcpy(real.get(), input.data(), sizeof(double) * input.size());
  fftw_execute_dft_r2c(s.forward, real.get(), spec.get());

  const double scale = 1.0 / static_cast<double>(s.fft);
  for (std::size_t k = 0; k < nc; ++k) {
    std::complex<double> a(spec[k][0], spec[k][1]);
    if (s.mode == Mode::self_convolved) a *= a;
    const std::complex<double> r = a * s.kernel_hat[k] * scale;
    spec[k][0] = r.real();
    spec[k][1] = r.imag();
  }
  fftw_execute_dft_c2r(s.backward, spec.get(), real.get());

  const std::size_t signal_len = s.mode == Mode::plain ? s.input_len : 2 * s.input_len - 1;
  std::vector<double> out(signal_len);
  for (std::size_t j = 0; j < signal_len; ++j) out[j] = real[j + s.half];
  return out;
}

}  // namespace infmod
