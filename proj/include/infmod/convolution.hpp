#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace infmod {

/// Zero-padded linear convolution against a fixed centred kernel, via FFTW.
///
/// The kernel holds samples at offsets -K..K (length 2K+1). `apply` returns
/// (kernel * s)[j] for j = 0..len(s)-1 where s is either the input itself or
/// its discrete self-convolution (input * input, length 2 len - 1). Plans are
/// built once; `apply` allocates its own work buffers, so concurrent calls on
/// one instance are safe.
class KernelConvolver {
 public:
  enum class Mode { plain, self_convolved };

  KernelConvolver(std::span<const double> centred_kernel, std::size_t input_len, Mode mode);
  ~KernelConvolver();
  KernelConvolver(KernelConvolver&&) noexcept;
  KernelConvolver& operator=(KernelConvolver&&) noexcept;
  KernelConvolver(const KernelConvolver&) = delete;
  KernelConvolver& operator=(const KernelConvolver&) = delete;

  std::vector<double> apply(std::span<const double> input) const;

  std::size_t fft_size() const noexcept;
  std::size_t half_width() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::size_t next_power_of_two(std::size_t n);

}  // namespace infmod
