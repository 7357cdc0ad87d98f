#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

namespace gpe {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Integer Fourier mode; the physical wavevector is 2*pi*m.
struct ModeIndex {
  int m1 = 0;
  int m2 = 0;
  int m3 = 0;
  auto operator<=>(const ModeIndex&) const = default;
};

/// All m with |m| <= N and m3 >= 0, lexicographic in (m1, m2, m3).
std::vector<ModeIndex> build_mode_set(int N);

/// Immutable lookup tables for the ball truncation of order N.
class ModeSet {
 public:
  static std::shared_ptr<const ModeSet> of(int N);

  explicit ModeSet(int N);

  int order() const { return N_; }
  std::size_t size() const { return modes_.size(); }
  const ModeIndex& operator[](std::size_t i) const { return modes_[i]; }
  const std::vector<ModeIndex>& modes() const { return modes_; }

  /// Position of (m1, m2, m3) or -1 when the mode is not retained.
  std::ptrdiff_t find(int m1, int m2, int m3) const;
  std::ptrdiff_t find(const ModeIndex& m) const { return find(m.m1, m.m2, m.m3); }

  /// Position of (-m1, -m2, m3).
  std::size_t partner(std::size_t i) const { return partner_[i]; }

  double k(std::size_t i) const { return k_[i]; }
  double kh(std::size_t i) const { return kh_[i]; }
  double kz(std::size_t i) const { return kz_[i]; }
  double kmax() const { return kmax_; }

 private:
  int N_;
  std::vector<ModeIndex> modes_;
  std::vector<std::ptrdiff_t> table_;
  std::vector<std::size_t> partner_;
  std::vector<double> k_, kh_, kz_;
  double kmax_ = 0.0;
};

}  // namespace gpe
