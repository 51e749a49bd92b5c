#pragma once

#include <vector>

#include "fftpl/netlist.hpp"

namespace fftpl {

struct WirelengthResult {
  double total = 0.0;
  std::vector<double> per_net;  // filled when requested
  std::vector<double> grad_x;   // aligned with placement slots, filled when requested
  std::vector<double> grad_y;
};

// Exact half-perimeter wirelength: per net, (max - min) of pin x plus the
// same in y. Degree-<2 nets contribute zero; fillers carry no pins.
WirelengthResult hpwl(const Netlist& nl, const PlacementState& pl, bool per_net = false);
double hpwl_total(const Netlist& nl, const PlacementState& pl);

// Weighted-average smoothed wirelength. Per net and axis,
//   sum(x e^{x/g}) / sum(e^{x/g}) - sum(x e^{-x/g}) / sum(e^{-x/g}),
// computed with per-net max/min shifts so the exponentials never overflow.
// The gradient is the analytic derivative accumulated onto owning nodes.
WirelengthResult wa_wirelength(const Netlist& nl, const PlacementState& pl, double gamma,
                               bool with_gradient = true, int threads = 1);

// value-only evaluation (line-search probes)
double wa_value(const Netlist& nl, const PlacementState& pl, double gamma, int threads = 1);

}  // namespace fftpl
