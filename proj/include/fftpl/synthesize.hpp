#pragma once

#include <cstdint>

#include "fftpl/bookshelf.hpp"
#include "fftpl/netlist.hpp"

namespace fftpl {

struct SynthConfig {
  int m = 100;               // movable cell count, >= 2
  double whitespace = 0.5;   // 1 - (movable area / row area)
  std::uint64_t seed = 1;
  double nets_per_cell = 1.1;
  double pad_net_fraction = 0.08;  // chance a net picks up one perimeter pad
  double margin = 2.0;             // dark ring between rows and bounding box
};

// Deterministic pseudo-random instance: log-normal cell widths on unit-height
// rows, degree 2-8 random nets, perimeter pads in a dark ring, region sized
// for the requested whitespace fraction.
ParsedDesign synthesize_instance(const SynthConfig& cfg);

}  // namespace fftpl
