#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <utility>

#include "gpe/field.hpp"

namespace gpe::detail {

/// In-place 3D complex DFT of side M with cached FFTW_ESTIMATE plans.
class Fft3 {
 public:
  explicit Fft3(int M);
  ~Fft3();
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  int side() const { return M_; }
  std::size_t volume() const { return n_; }
  /// out_j = sum_m in_m e^{+2 pi i m.j / M}
  void backward(cplx* data) const;
  /// out_m = sum_j in_j e^{-2 pi i m.j / M}, unnormalized
  void forward(cplx* data) const;

 private:
  int M_;
  std::size_t n_;
  void* fwd_;
  void* bwd_;
};

const Fft3& fft_plan(int M);

/// fftw_malloc-backed complex buffer.
class CBuffer {
 public:
  explicit CBuffer(std::size_t n);
  ~CBuffer();
  CBuffer(const CBuffer&) = delete;
  CBuffer& operator=(const CBuffer&) = delete;
  cplx* data() { return p_; }
  const cplx* data() const { return p_; }
  cplx& operator[](std::size_t i) { return p_[i]; }
  const cplx& operator[](std::size_t i) const { return p_[i]; }
  std::size_t size() const { return n_; }
  void zero();

 private:
  cplx* p_;
  std::size_t n_;
};

inline std::size_t cube_index(int m1, int m2, int m3, int M) {
  const auto w = [M](int m) { return static_cast<std::size_t>(m < 0 ? m + M : m); };
  const auto side = static_cast<std::size_t>(M);
  return (w(m1) * side + w(m2)) * side + w(m3);
}

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Writes full exponential coefficients into a zeroed cube.
/// coef(i, s) gives the coefficient at (m1, m2, s*m3); s = +1 only when m3 = 0.
template <class F>
void scatter(const ModeSet& ms, int M, cplx* buf, F&& coef) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    buf[cube_index(m.m1, m.m2, m.m3, M)] = coef(i, 1);
    if (m.m3 != 0) buf[cube_index(m.m1, m.m2, -m.m3, M)] = coef(i, -1);
  }
}

/// Splits Z = U + iV (U, V real fields) at mode (m1, m2, m3).
inline std::pair<cplx, cplx> split_pair(const cplx* buf, int M, int m1, int m2, int m3) {
  const cplx z = buf[cube_index(m1, m2, m3, M)];
  const cplx zc = std::conj(buf[cube_index(-m1, -m2, -m3, M)]);
  return {(z + zc) * 0.5, (z - zc) * cplx(0.0, -0.5)};
}

/// Cosine-basis coefficients of the even part of Z = U + iV, scaled by `scale`.
inline void gather_pair(const cplx* buf, int M, double scale, SpectralField& out) {
  const auto& ms = out.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    auto [u, v] = split_pair(buf, M, m.m1, m.m2, m.m3);
    if (m.m3 != 0) {
      auto [u2, v2] = split_pair(buf, M, m.m1, m.m2, -m.m3);
      u = (u + u2) * kInvSqrt2;
      v = (v + v2) * kInvSqrt2;
    }
    out[i] = {u * scale, v * scale};
  }
}

}  // namespace gpe::detail
