#include "gpe/field.hpp"

#include <algorithm>
#include <cmath>

#include "gpe/errors.hpp"

namespace gpe {

SpectralField::SpectralField(int N) : SpectralField(ModeSet::of(N)) {}

SpectralField::SpectralField(std::shared_ptr<const ModeSet> modes)
    : modes_(std::move(modes)), c_(modes_->size(), Coeff{cplx{}, cplx{}}) {}

Coeff SpectralField::at(int m1, int m2, int m3) const {
  const auto i = modes_->find(m1, m2, m3 < 0 ? -m3 : m3);
  if (i < 0) return {cplx{}, cplx{}};
  return c_[static_cast<std::size_t>(i)];
}

void SpectralField::set_mode(const ModeIndex& m, cplx u, cplx v) {
  const auto i = modes_->find(m);
  if (i < 0) throw InvalidArgument("set_mode: mode outside the truncation");
  const auto ii = static_cast<std::size_t>(i);
  const auto p = modes_->partner(ii);
  if (p == ii) {
    c_[ii] = {cplx(u.real(), 0.0), cplx(v.real(), 0.0)};
  } else {
    c_[ii] = {u, v};
    c_[p] = {std::conj(u), std::conj(v)};
  }
}

static void require_same(const SpectralField& a, const SpectralField& b) {
  if (a.order() != b.order()) throw InvalidArgument("field orders differ");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    c_[i][0] += o.c_[i][0];
    c_[i][1] += o.c_[i][1];
  }
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    c_[i][0] -= o.c_[i][0];
    c_[i][1] -= o.c_[i][1];
  }
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : c_) {
    c[0] *= s;
    c[1] *= s;
  }
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    c_[i][0] += s * o.c_[i][0];
    c_[i][1] += s * o.c_[i][1];
  }
  return *this;
}

bool SpectralField::is_finite() const {
  return std::all_of(c_.begin(), c_.end(), [](const Coeff& c) {
    return std::isfinite(c[0].real()) && std::isfinite(c[0].imag()) &&
           std::isfinite(c[1].real()) && std::isfinite(c[1].imag());
  });
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField embed(const SpectralField& f, int N) {
  SpectralField out(N);
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto j = out.modes().find(ms[i]);
    if (j >= 0) out[static_cast<std::size_t>(j)] = f[i];
  }
  return out;
}

void enforce_reality(SpectralField& f) {
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto p = ms.partner(i);
    if (p == i) {
      f[i] = {cplx(f[i][0].real(), 0.0), cplx(f[i][1].real(), 0.0)};
    } else if (p > i) {
      for (int c = 0; c < 2; ++c) {
        const cplx a = (f[i][c] + std::conj(f[p][c])) * 0.5;
        f[i][c] = a;
        f[p][c] = std::conj(a);
      }
    }
  }
}

double reality_defect(const SpectralField& f) {
  double worst = 0.0;
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto p = ms.partner(i);
    for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(f[i][c] - std::conj(f[p][c])));
  }
  return worst;
}

double d0_defect(const SpectralField& f) {
  double worst = 0.0;
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    if (m.m3 != 0 || (m.m1 == 0 && m.m2 == 0)) continue;
    const double h = std::hypot(static_cast<double>(m.m1), static_cast<double>(m.m2));
    worst = std::max(worst, std::abs(double(m.m1) * f[i][0] + double(m.m2) * f[i][1]) / h);
  }
  return worst;
}

double inner(const SpectralField& a, const SpectralField& b) {
  require_same(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i][0] * std::conj(b[i][0]) + a[i][1] * std::conj(b[i][1])).real();
  return s;
}

double l2_norm(const SpectralField& f) {
  SumSquares acc;
  for (const auto& c : f.data()) acc.add_abs2(1.0, c);
  return acc.norm();
}

void SumSquares::add(double x) {
  if (x == 0.0) return;
  const double ax = std::abs(x);
  if (scale_ < ax) {
    const double r = scale_ / ax;
    ssq_ = 1.0 + ssq_ * r * r;
    scale_ = ax;
  } else {
    const double r = ax / scale_;
    ssq_ += r * r;
  }
}

void SumSquares::add_abs2(double scale, const Coeff& c) {
  add(scale * c[0].real());
  add(scale * c[0].imag());
  add(scale * c[1].real());
  add(scale * c[1].imag());
}

}  // namespace gpe
