#include "ffst/core/fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "ffst/core/errors.hpp"

namespace ffst {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

FourierTransform::FourierTransform(std::size_t n) : n_(n) {
  std::vector<std::complex<double>> scratch(n);
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                   FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  inverse_plan_ = fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                   FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!forward_plan_ || !inverse_plan_) throw Error("FFTW planning failed");
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FourierTransform::forward(std::span<std::complex<double>> data) const {
  if (data.size() != n_) throw InvalidArgument("FFT length mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()),
                   as_fftw(data.data()));
}

void FourierTransform::inverse(std::span<std::complex<double>> data) const {
  if (data.size() != n_) throw InvalidArgument("FFT length mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(data.data()),
                   as_fftw(data.data()));
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v *= scale;
}

const FourierTransform& fourier_transform(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<FourierTransform>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FourierTransform>(n);
  return *slot;
}

}  // namespace ffst
