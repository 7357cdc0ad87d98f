#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "gpe/modes.hpp"

namespace gpe {

using cplx = std::complex<double>;
using Coeff = std::array<cplx, 2>;

/// Horizontal velocity (u, v) in the basis phi_k = sqrt(2) e^{ik'.x'} cos(k3 z)
/// (no sqrt(2) when k3 = 0), stored for m3 >= 0 in ModeSet order.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int N);
  explicit SpectralField(std::shared_ptr<const ModeSet> modes);

  bool empty() const { return !modes_; }
  int order() const { return modes_ ? modes_->order() : -1; }
  const ModeSet& modes() const { return *modes_; }
  const std::shared_ptr<const ModeSet>& mode_set() const { return modes_; }
  std::size_t size() const { return c_.size(); }

  Coeff& operator[](std::size_t i) { return c_[i]; }
  const Coeff& operator[](std::size_t i) const { return c_[i]; }
  std::vector<Coeff>& data() { return c_; }
  const std::vector<Coeff>& data() const { return c_; }

  /// Coefficient at m, or zero when m is not retained (any sign of m3 allowed).
  Coeff at(int m1, int m2, int m3) const;

  /// Sets the coefficient at m and its conjugate partner.
  void set_mode(const ModeIndex& m, cplx u, cplx v);

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o);

  bool is_finite() const;

 private:
  std::shared_ptr<const ModeSet> modes_;
  std::vector<Coeff> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Zero-pads into a larger order or drops the modes above a smaller one.
SpectralField embed(const SpectralField& f, int N);

/// Symmetrizes so that a_{-m1,-m2,m3} = conj(a_{m1,m2,m3}) holds bitwise.
void enforce_reality(SpectralField& f);
double reality_defect(const SpectralField& f);

/// max over m3 = 0, m' != 0 of |k'.V| / |k'|.
double d0_defect(const SpectralField& f);

/// Real L2 inner product of the physical fields.
double inner(const SpectralField& a, const SpectralField& b);
double l2_norm(const SpectralField& f);

/// One scalar component in the basis sqrt(2) e^{ik'.x'} sin(k3 z), m3 >= 1.
struct SineField {
  std::shared_ptr<const ModeSet> modes;
  std::vector<cplx> c;
};

/// Overflow-safe Euclidean accumulator.
class SumSquares {
 public:
  void add(double x);
  void add_abs2(double scale, const Coeff& c);
  double norm() const { return scale_ * std::sqrt(ssq_); }

 private:
  double scale_ = 0.0;
  double ssq_ = 1.0;
};

}  // namespace gpe
