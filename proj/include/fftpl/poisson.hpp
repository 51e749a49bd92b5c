#pragma once

#include <vector>

#include "fftpl/density.hpp"
#include "fftpl/geometry.hpp"

struct fftw_plan_s;

namespace fftpl {

// Cosine coefficients of the density expansion
//   rho(x, y) = sum_{u,v} a[u][v] cos(w_u x) cos(w_v y),  w_u = pi u / n,
// with samples at half-integer bin centers and the 1/(2n) analysis
// normalization. x-major layout: a[u * n + v].
struct SpectralCoeffs {
  int n = 0;
  std::vector<double> a;
};

// Potential and field sampled at bin centers. ex/ey are in physical length
// units (grid-coordinate derivatives divided by the bin dimensions) with the
// sign convention E = -grad psi, so the field points from dense to sparse.
struct FieldMaps {
  int n = 0;
  double wb = 0.0, hb = 0.0;
  Point origin;
  std::vector<double> psi, ex, ey;

  double psi_at(int ix, int iy) const { return psi[static_cast<std::size_t>(ix) * n + iy]; }
  double ex_at(int ix, int iy) const { return ex[static_cast<std::size_t>(ix) * n + iy]; }
  double ey_at(int ix, int iy) const { return ey[static_cast<std::size_t>(ix) * n + iy]; }
};

struct FieldSample {
  double psi = 0.0, ex = 0.0, ey = 0.0;
};

// Spectral solver for the placement Poisson system on the mirrored/periodized
// domain: DCT-II analysis of the density, psi synthesis with a_{u,v} /
// (w_u^2 + w_v^2) and the zero mode dropped, field synthesis with the mixed
// sine/cosine expansions. O(n^2 log n) per solve; plans are cached per n.
class PoissonSolver {
 public:
  explicit PoissonSolver(int n);
  ~PoissonSolver();
  PoissonSolver(const PoissonSolver&) = delete;
  PoissonSolver& operator=(const PoissonSolver&) = delete;

  FieldMaps solve(const DensityGrid& rho);
  SpectralCoeffs analyze(const DensityGrid& rho);

  int dim() const { return n_; }

 private:
  void analyze_into(const DensityGrid& rho);

  int n_;
  double* in_ = nullptr;
  double* out_ = nullptr;
  std::vector<double> coeff_;  // a_{u,v}
  fftw_plan_s* dct2_ = nullptr;
  fftw_plan_s* dct3_ = nullptr;
  fftw_plan_s* ex_plan_ = nullptr;
  fftw_plan_s* ey_plan_ = nullptr;
};

// Overlap-area-weighted average of psi/ex/ey over the bins a node rectangle
// intersects. Throws if the rectangle misses the grid entirely.
FieldSample sample_field(const FieldMaps& field, const Rect& node_rect);

}  // namespace fftpl
