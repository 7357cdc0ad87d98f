#pragma once

#include <utility>
#include <vector>

#include "gpe/field.hpp"

namespace gpe {

/// Zeroes every coefficient with |m| > Np; order is kept.
SpectralField project_Pn(const SpectralField& f, int Np);

/// Removes the k'-parallel part of every m3 = 0, m' != 0 mode.
SpectralField project_D0(const SpectralField& f);

/// Collocation values on an M^3 grid, x_j = j / M, row-major (j1, j2, j3).
struct GridField {
  int M = 0;
  std::vector<double> u;
  std::vector<double> v;
};

/// padding 1 -> M = 2N + 2, padding 3/2 -> M = 3N + 3.
GridField to_grid(const SpectralField& f, double padding = 1.0);
SpectralField to_spectral(const GridField& g, int N);
int grid_size(int N, double padding);

/// w = -int_0^z div V; requires V in D0.
SineField vertical_velocity(const SpectralField& V);

struct PoincareResult {
  double lhs = 0.0;
  double rhs = 0.0;
};
PoincareResult poincare_check(const SpectralField& f, int Np);

/// Exact product of the first components, order 2N; second component zero.
SpectralField scalar_product(const SpectralField& f, const SpectralField& g);

}  // namespace gpe
