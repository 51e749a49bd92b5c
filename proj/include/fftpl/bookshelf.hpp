#pragma once

#include <stdexcept>
#include <string>

#include "fftpl/netlist.hpp"

namespace fftpl {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParsedDesign {
  Netlist netlist;
  Region region;
  PlacementState placement;
};

// Reads an ISPD-2005 Bookshelf suite via its .aux manifest. Dark nodes for
// non-placeable area inside the row bounding box are appended to the netlist.
// Throws ParseError with file:line diagnostics.
ParsedDesign parse_bookshelf(const std::string& aux_path);

// Writes a Bookshelf .pl (lower-left corners, fixed nodes tagged /FIXED,
// fillers omitted).
void write_pl(const PlacementState& placement, const Netlist& netlist,
              const std::string& path);

}  // namespace fftpl
