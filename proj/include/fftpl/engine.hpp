#pragma once

#include <functional>
#include <vector>

#include "fftpl/density.hpp"
#include "fftpl/netlist.hpp"
#include "fftpl/poisson.hpp"

namespace fftpl {

struct ScheduleState {
  double lambda = 1.0;     // penalty factor
  double alpha_max = 0.0;  // step bounds, length units
  double alpha_min = 0.0;
  double alpha_max0 = 0.0;
  double gamma = 1.0;      // WA smoothing parameter, length units
  double tau = 1.0;        // density overflow
  int k = 0;
  double dw_ref = 3.5e5;   // reference HPWL variation
  double mu_lo = 0.75, mu_hi = 1.1;
};

struct IterationRecord {
  int k = 0;
  double hpwl = 0.0;
  double wa = 0.0;
  double energy = 0.0;
  double tau = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double iter_ms = 0.0;
};

struct EngineConfig {
  double rho_t = 1.0;
  int max_iters = 1000;
  int grid_override = 0;  // 0: n from the movable cell count
  double stop_overflow = 0.10;
  double dw_ref = 3.5e5;
  double alpha0_factor = 0.044;  // alpha_max_0 = factor * bin width
  double armijo_c1 = 1e-4;
  int cg_restart_period = 50;
  int threads = 1;
};

// Penalty scaling mu_k = clamp(1.1^(-dw/dw_ref + 1), lo, hi).
double penalty_scale_mu(double dw, double dw_ref, double lo = 0.75, double hi = 1.1);

// gamma = 8 wb * 10^(20/9 (tau - 0.1) - 1): wide smoothing while the design
// is congested, tight once it spreads.
double smoothing_gamma(double tau, double wb);

struct ObjectiveEval {
  double f = 0.0;  // wa + lambda * energy
  double wa = 0.0;
  double energy = 0.0;
  std::vector<double> grad_x, grad_y;  // dWa/dv - lambda q E, per slot
};

// Objective and gradient against a frozen field (density built and Poisson
// solved by the caller for this placement). Fillers get only the energy
// term; fixed and dark nodes get none.
ObjectiveEval objective_and_gradient(const Netlist& nl, const PlacementState& pl,
                                     const FieldMaps& field, double gamma,
                                     double lambda, double rho_t, int threads = 1);

// Polak-Ribiere-plus direction state; restarts to steepest descent when the
// period elapses or conjugacy degrades.
struct CgState {
  std::vector<double> prev_grad;
  std::vector<double> prev_dir;
  int since_restart = 0;
};
std::vector<double> cg_direction(CgState& state, const std::vector<double>& grad,
                                 int restart_period);

// Backtracking Armijo search: halve from alpha_max until
// phi(a) <= phi0 + c1 a slope, floor at alpha_min.
double backtrack_search(const std::function<double(double)>& phi, double phi0,
                        double slope, double alpha_max, double alpha_min, double c1);

struct GlobalPlaceResult {
  PlacementState placement;  // movable + fillers
  std::vector<IterationRecord> trace;
  bool converged = false;
  int iterations = 0;
  GridConfig grid;
};

using SnapshotHook =
    std::function<void(int k, const DensityGrid& rho, const FieldMaps& field)>;

// Algorithm main loop: per iteration build density, solve the Poisson system,
// assemble the gradient, take a bounded CG step, update the schedules; stop
// at tau <= stop_overflow. Non-convergence returns the best-tau iterate with
// converged = false.
GlobalPlaceResult global_place(const Netlist& nl, const Region& region,
                               const PlacementState& initial, const EngineConfig& cfg = {},
                               const SnapshotHook& snapshot = {});

}  // namespace fftpl
