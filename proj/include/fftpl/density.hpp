#pragma once

#include <cstdint>
#include <vector>

#include "fftpl/netlist.hpp"

namespace fftpl {

struct FieldMaps;  // poisson.hpp

// n-per-side bin grid covering the region bounding box
struct GridConfig {
  int n = 0;
  double wb = 0.0, hb = 0.0;
  Point origin;
};

GridConfig make_grid(const Region& region, int n);

// n = 2^ceil(log2 sqrt(m)), clamped to 1024
int choose_grid_dim(long long m);

struct DensityGrid {
  int n = 0;
  double wb = 0.0, hb = 0.0;
  Point origin;
  std::vector<double> rho;  // x-major: rho[ix * n + iy]

  double& at(int ix, int iy) { return rho[static_cast<std::size_t>(ix) * n + iy]; }
  double at(int ix, int iy) const { return rho[static_cast<std::size_t>(ix) * n + iy]; }
  double bin_area() const { return wb * hb; }
  double sum() const;
  Rect bounds() const {
    return {origin.x, origin.y, origin.x + n * wb, origin.y + n * hb};
  }
};

// Splats every node (movable, fixed, dark, filler) onto the grid as exact
// rectangle overlap / bin area, with fixed/dark charge pre-scaled by rho_t,
// then removes the DC component. Movable/filler nodes entirely outside the
// grid are an error; fixed/dark nodes are clipped.
DensityGrid build_density(const Netlist& nl, const PlacementState& pl,
                          const GridConfig& grid, double rho_t);

// mean subtraction over all bins; idempotent
void remove_dc(DensityGrid& grid);

// Fillers occupy the whitespace budget rho_t * A_ws - A_movable as squares of
// the 5-95 percentile mean movable area, uniformly seeded over the rows.
std::vector<Node> insert_fillers(const Netlist& nl, const Region& region, double rho_t,
                                 std::uint64_t seed);

struct OverflowReport {
  double tau = 0.0;
  double overflowed_area = 0.0;
};

// Density overflow: sum over bins of max(movable_area - rho_t * capacity, 0),
// normalized by total movable area. Capacity is bin area minus fixed/dark
// geometric overlap; fillers are excluded.
OverflowReport overflow(const Netlist& nl, const PlacementState& pl,
                        const GridConfig& grid, double rho_t);

// Fixed/dark blockage is static; cache it when overflow runs every iteration.
struct OverflowContext {
  GridConfig grid;
  double rho_t = 1.0;
  double total_movable = 0.0;
  std::vector<double> capacity;  // per bin, rho_t * (bin area - blocked)
};
OverflowContext make_overflow_context(const Netlist& nl, const GridConfig& grid,
                                      double rho_t);
OverflowReport overflow(const OverflowContext& ctx, const Netlist& nl,
                        const PlacementState& pl);

// N = sum over all charged nodes of q_i * psi_i, with psi_i the
// overlap-area-weighted average of the potential over intersected bins.
double potential_energy(const Netlist& nl, const PlacementState& pl,
                        const FieldMaps& field, double rho_t);

// pieces of N: fixed/dark nodes never move, so their share is constant for a
// given field and can be cached across line-search probes
double static_energy(const Netlist& nl, const FieldMaps& field, double rho_t);
double mobile_energy(const Netlist& nl, const PlacementState& pl,
                     const FieldMaps& field);

}  // namespace fftpl
