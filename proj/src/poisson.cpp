#include "fftpl/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace fftpl {

namespace {

std::mutex plan_mutex;  // FFTW planning is not thread-safe

bool power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace

PoissonSolver::PoissonSolver(int n) : n_(n) {
  if (!power_of_two(n_) || n_ > 1024)
    throw std::invalid_argument("PoissonSolver: n must be a power of 2 <= 1024");
  std::size_t bins = static_cast<std::size_t>(n_) * n_;
  coeff_.assign(bins, 0.0);
  if (n_ == 1) return;  // constant density has zero potential and field

  in_ = fftw_alloc_real(bins);
  out_ = fftw_alloc_real(bins);
  std::lock_guard<std::mutex> lock(plan_mutex);
  dct2_ = fftw_plan_r2r_2d(n_, n_, in_, out_, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
  dct3_ = fftw_plan_r2r_2d(n_, n_, in_, out_, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
  ex_plan_ = fftw_plan_r2r_2d(n_, n_, in_, out_, FFTW_RODFT01, FFTW_REDFT01, FFTW_ESTIMATE);
  ey_plan_ = fftw_plan_r2r_2d(n_, n_, in_, out_, FFTW_REDFT01, FFTW_RODFT01, FFTW_ESTIMATE);
  if (!dct2_ || !dct3_ || !ex_plan_ || !ey_plan_)
    throw std::runtime_error("PoissonSolver: FFTW planning failed");
}

PoissonSolver::~PoissonSolver() {
  std::lock_guard<std::mutex> lock(plan_mutex);
  if (dct2_) fftw_destroy_plan(dct2_);
  if (dct3_) fftw_destroy_plan(dct3_);
  if (ex_plan_) fftw_destroy_plan(ex_plan_);
  if (ey_plan_) fftw_destroy_plan(ey_plan_);
  if (in_) fftw_free(in_);
  if (out_) fftw_free(out_);
}

void PoissonSolver::analyze_into(const DensityGrid& rho) {
  if (rho.n != n_) throw std::invalid_argument("PoissonSolver: grid dimension mismatch");
  std::size_t bins = coeff_.size();
  for (std::size_t i = 0; i < bins; ++i) {
    if (!std::isfinite(rho.rho[i]))
      throw std::invalid_argument("PoissonSolver: non-finite density");
    in_[i] = rho.rho[i];
  }
  fftw_execute(dct2_);
  // FFTW's REDFT10 pair carries a factor 4; Eq. (10)'s normalization is 1/(2n)
  double scale = 1.0 / (8.0 * n_);
  for (std::size_t i = 0; i < bins; ++i) coeff_[i] = out_[i] * scale;
}

SpectralCoeffs PoissonSolver::analyze(const DensityGrid& rho) {
  SpectralCoeffs c;
  c.n = n_;
  if (n_ == 1) {
    c.a = {rho.rho.at(0)};
    return c;
  }
  analyze_into(rho);
  c.a = coeff_;
  return c;
}

FieldMaps PoissonSolver::solve(const DensityGrid& rho) {
  FieldMaps f;
  f.n = n_;
  f.wb = rho.wb;
  f.hb = rho.hb;
  f.origin = rho.origin;
  std::size_t bins = static_cast<std::size_t>(n_) * n_;
  if (n_ == 1) {
    f.psi.assign(1, 0.0);
    f.ex.assign(1, 0.0);
    f.ey.assign(1, 0.0);
    return f;
  }
  analyze_into(rho);
  f.psi.resize(bins);
  f.ex.resize(bins);
  f.ey.resize(bins);

  std::vector<double> wsq(n_);
  for (int u = 0; u < n_; ++u) {
    double w = M_PI * u / n_;
    wsq[u] = w * w;
  }
  auto freq = [&](int u) { return M_PI * u / n_; };

  // psi: coefficients a / (wu^2 + wv^2), zero mode dropped; DCT-III kernel
  // doubles every u >= 1 term, so pre-divide by c_u c_v.
  for (int u = 0; u < n_; ++u) {
    double cu = (u == 0) ? 1.0 : 2.0;
    for (int v = 0; v < n_; ++v) {
      double cv = (v == 0) ? 1.0 : 2.0;
      std::size_t i = static_cast<std::size_t>(u) * n_ + v;
      in_[i] = (u == 0 && v == 0) ? 0.0 : coeff_[i] / ((wsq[u] + wsq[v]) * cu * cv);
    }
  }
  fftw_execute(dct3_);
  for (std::size_t i = 0; i < bins; ++i) f.psi[i] = out_[i];

  // Ex: sum_{u>=1} a wu/(wu^2+wv^2) sin(wu x) cos(wv y); RODFT01 indexes the
  // sine modes from 1, so row u' holds mode u'+1. Convert to physical units.
  for (int up = 0; up < n_; ++up) {
    for (int v = 0; v < n_; ++v) {
      std::size_t i = static_cast<std::size_t>(up) * n_ + v;
      if (up == n_ - 1) {
        in_[i] = 0.0;
        continue;
      }
      int u = up + 1;
      double cv = (v == 0) ? 1.0 : 2.0;
      in_[i] = coeff_[static_cast<std::size_t>(u) * n_ + v] * freq(u) /
               ((wsq[u] + wsq[v]) * 2.0 * cv);
    }
  }
  fftw_execute(ex_plan_);
  double ex_scale = 1.0 / rho.wb;
  for (std::size_t i = 0; i < bins; ++i) f.ex[i] = out_[i] * ex_scale;

  // Ey, symmetric in v
  for (int u = 0; u < n_; ++u) {
    double cu = (u == 0) ? 1.0 : 2.0;
    for (int vp = 0; vp < n_; ++vp) {
      std::size_t i = static_cast<std::size_t>(u) * n_ + vp;
      if (vp == n_ - 1) {
        in_[i] = 0.0;
        continue;
      }
      int v = vp + 1;
      in_[i] = coeff_[static_cast<std::size_t>(u) * n_ + v] * freq(v) /
               ((wsq[u] + wsq[v]) * 2.0 * cu);
    }
  }
  fftw_execute(ey_plan_);
  double ey_scale = 1.0 / rho.hb;
  for (std::size_t i = 0; i < bins; ++i) f.ey[i] = out_[i] * ey_scale;

  return f;
}

FieldSample sample_field(const FieldMaps& field, const Rect& node_rect) {
  double acc_psi = 0.0, acc_ex = 0.0, acc_ey = 0.0, wsum = 0.0;

  double flo = (node_rect.lx - field.origin.x) / field.wb;
  double fhi = (node_rect.hx - field.origin.x) / field.wb;
  double glo = (node_rect.ly - field.origin.y) / field.hb;
  double ghi = (node_rect.hy - field.origin.y) / field.hb;
  int ix0 = std::max(0, static_cast<int>(std::floor(flo)));
  int ix1 = std::min(field.n - 1, static_cast<int>(std::floor(fhi)));
  int iy0 = std::max(0, static_cast<int>(std::floor(glo)));
  int iy1 = std::min(field.n - 1, static_cast<int>(std::floor(ghi)));

  for (int ix = ix0; ix <= ix1; ++ix) {
    double bx = field.origin.x + ix * field.wb;
    double dx = overlap_1d(node_rect.lx, node_rect.hx, bx, bx + field.wb);
    if (dx <= 0.0) continue;
    for (int iy = iy0; iy <= iy1; ++iy) {
      double by = field.origin.y + iy * field.hb;
      double dy = overlap_1d(node_rect.ly, node_rect.hy, by, by + field.hb);
      if (dy <= 0.0) continue;
      double a = dx * dy;
      std::size_t i = static_cast<std::size_t>(ix) * field.n + iy;
      acc_psi += a * field.psi[i];
      acc_ex += a * field.ex[i];
      acc_ey += a * field.ey[i];
      wsum += a;
    }
  }
  if (wsum <= 0.0) throw std::domain_error("sample_field: node outside the grid");
  return {acc_psi / wsum, acc_ex / wsum, acc_ey / wsum};
}

}  // namespace fftpl
