#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace gpe::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

Fft3::Fft3(int M) : M_(M), n_(static_cast<std::size_t>(M) * M * M) {
  auto* scratch = fftw_alloc_complex(n_);
  fwd_ = fftw_plan_dft_3d(M, M, M, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_3d(M, M, M, scratch, scratch, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(scratch);
}

Fft3::~Fft3() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft3::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
}

void Fft3::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

const Fft3& fft_plan(int M) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  static std::map<int, std::unique_ptr<Fft3>> cache;
  auto& slot = cache[M];
  if (!slot) slot = std::make_unique<Fft3>(M);
  return *slot;
}

CBuffer::CBuffer(std::size_t n)
    : p_(reinterpret_cast<cplx*>(fftw_alloc_complex(n))), n_(n) {
  zero();
}

CBuffer::~CBuffer() { fftw_free(p_); }

void CBuffer::zero() { std::fill(p_, p_ + n_, cplx{}); }

}  // namespace gpe::detail
