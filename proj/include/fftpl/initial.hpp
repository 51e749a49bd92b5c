#pragma once

#include <cstdint>
#include <vector>

#include "fftpl/netlist.hpp"

namespace fftpl {

struct InitialPlaceConfig {
  int rounds = 8;              // bound-to-bound re-linearization passes
  double cg_tolerance = 1e-5;  // relative residual of the linear solves
  double move_tol_frac = 1e-3; // early exit when max move < frac * region span
  double eps_frac = 1e-4;      // B2B distance guard as a fraction of the span
  std::uint64_t seed = 1;      // jitter for unanchored components
};

// Quadratic wirelength minimization with the bound-to-bound net model. The
// first solve uses distance-free edge weights 2/(p-1) so coincident starting
// points cannot lock the system; re-linearized passes use the full
// 2 / ((p-1) max(|d|, eps)) weights. Cells on components without any fixed
// pin go to the region center with +-0.5 site jitter.
PlacementState initial_place(const Netlist& nl, const Region& region,
                             const InitialPlaceConfig& cfg = {},
                             std::vector<double>* quad_objective_trace = nullptr);

}  // namespace fftpl
