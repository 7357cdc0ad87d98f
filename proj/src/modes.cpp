#include "gpe/modes.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "gpe/errors.hpp"

namespace gpe {

std::vector<ModeIndex> build_mode_set(int N) {
  if (N < 0) throw InvalidArgument("build_mode_set: N must be >= 0");
  std::vector<ModeIndex> out;
  const long n2 = static_cast<long>(N) * N;
  for (int m1 = -N; m1 <= N; ++m1)
    for (int m2 = -N; m2 <= N; ++m2)
      for (int m3 = 0; m3 <= N; ++m3)
        if (static_cast<long>(m1) * m1 + static_cast<long>(m2) * m2 +
                static_cast<long>(m3) * m3 <=
            n2)
          out.push_back({m1, m2, m3});
  return out;
}

ModeSet::ModeSet(int N) : N_(N), modes_(build_mode_set(N)) {
  const std::size_t side = 2 * static_cast<std::size_t>(N) + 1;
  table_.assign(side * side * (static_cast<std::size_t>(N) + 1), -1);
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& m = modes_[i];
    table_[((m.m1 + N) * side + (m.m2 + N)) * (N + 1) + m.m3] =
        static_cast<std::ptrdiff_t>(i);
  }
  partner_.resize(modes_.size());
  k_.resize(modes_.size());
  kh_.resize(modes_.size());
  kz_.resize(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& m = modes_[i];
    partner_[i] = static_cast<std::size_t>(find(-m.m1, -m.m2, m.m3));
    const double h2 = static_cast<double>(m.m1) * m.m1 + static_cast<double>(m.m2) * m.m2;
    const double z2 = static_cast<double>(m.m3) * m.m3;
    k_[i] = kTwoPi * std::sqrt(h2 + z2);
    kh_[i] = kTwoPi * std::sqrt(h2);
    kz_[i] = kTwoPi * m.m3;
    if (k_[i] > kmax_) kmax_ = k_[i];
  }
}

std::ptrdiff_t ModeSet::find(int m1, int m2, int m3) const {
  if (m3 < 0 || m3 > N_ || m1 < -N_ || m1 > N_ || m2 < -N_ || m2 > N_) return -1;
  const std::size_t side = 2 * static_cast<std::size_t>(N_) + 1;
  return table_[((m1 + N_) * side + (m2 + N_)) * (N_ + 1) + m3];
}

std::shared_ptr<const ModeSet> ModeSet::of(int N) {
  if (N < 0) throw InvalidArgument("ModeSet: N must be >= 0");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const ModeSet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[N];
  if (!slot) slot = std::make_shared<const ModeSet>(N);
  return slot;
}

}  // namespace gpe
