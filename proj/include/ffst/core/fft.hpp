#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace ffst {

/// Owns a pair of FFTW plans for unaligned in-place complex transforms of a
/// fixed length. Executing is thread-safe; planning is serialized internally.
class FourierTransform {
 public:
  explicit FourierTransform(std::size_t n);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  std::size_t size() const noexcept { return n_; }

  /// Unnormalized forward transform, in place.
  void forward(std::span<std::complex<double>> data) const;
  /// Inverse transform including the 1/n factor, in place.
  void inverse(std::span<std::complex<double>> data) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Thread-local transform cache keyed by length.
const FourierTransform& fourier_transform(std::size_t n);

}  // namespace ffst
