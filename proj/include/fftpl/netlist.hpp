#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fftpl/geometry.hpp"

namespace fftpl {

enum class NodeKind : std::uint8_t { Movable, Fixed, Filler, Dark };

struct Node {
  int id = -1;
  NodeKind kind = NodeKind::Movable;
  double width = 0.0;
  double height = 0.0;
  Point center;  // static position for fixed/dark; initial position for movable
  std::string name;

  double area() const { return width * height; }
  // Electric quantity: node area, scaled by the target density for fixed and
  // dark nodes so the whitespace charge balances globally.
  double charge(double rho_t) const {
    return (kind == NodeKind::Fixed || kind == NodeKind::Dark) ? rho_t * area() : area();
  }
  Rect rect_at(Point c) const { return centered_rect(c, width, height); }
};

struct Pin {
  int node_id = -1;
  Point offset;  // from node center
  int net_id = -1;
};

struct Net {
  int id = -1;
  int pin_begin = 0;  // range into Netlist::pins
  int pin_end = 0;
  std::string name;

  int degree() const { return pin_end - pin_begin; }
};

struct Row {
  double y = 0.0;       // bottom
  double height = 0.0;
  double lx = 0.0;
  double hx = 0.0;

  Rect rect() const { return {lx, y, hx, y + height}; }
  double area() const { return (hx - lx) * height; }
};

struct Region {
  Rect bbox;
  std::vector<Row> rows;
  std::vector<Rect> dark_rects;  // bbox minus union of rows

  double row_area() const;
  // Sweep-line subtraction of the row union from bbox, merged into maximal
  // horizontal strips. Deterministic.
  void build_dark_rects();
};

// Coordinates of the mobile nodes (movable cells followed by fillers),
// indexed by slot: slot i < num_movable is node i, slots beyond are fillers.
struct PlacementState {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
  bool finite() const;
};

class Netlist {
 public:
  // nodes laid out as [movable][fixed][dark][filler]
  std::vector<Node> nodes;
  std::vector<Net> nets;
  std::vector<Pin> pins;  // grouped by net, nets[i] spans [pin_begin, pin_end)

  int movable_count = 0;
  int fixed_count = 0;
  int dark_count = 0;
  int filler_count = 0;

  int mobile_count() const { return movable_count + filler_count; }
  int filler_begin() const { return movable_count + fixed_count + dark_count; }

  bool is_mobile(const Node& n) const {
    return n.kind == NodeKind::Movable || n.kind == NodeKind::Filler;
  }
  // placement slot of a movable or filler node, -1 otherwise
  int slot_of(int node_id) const {
    const Node& n = nodes[node_id];
    if (n.kind == NodeKind::Movable) return node_id;
    if (n.kind == NodeKind::Filler) return movable_count + (node_id - filler_begin());
    return -1;
  }
  int node_of_slot(int slot) const {
    return slot < movable_count ? slot : filler_begin() + (slot - movable_count);
  }

  // Appends dark nodes for each region dark rect; call once after parsing.
  void add_dark_nodes(const Region& region);
  // Appends filler nodes (from density::insert_fillers); call once.
  void append_fillers(const std::vector<Node>& fillers);

  // pins of a node, as indices into `pins` (CSR; built on finalize)
  const std::vector<int>& pins_of_node(int node_id) const { return node_pins_[node_id]; }
  void finalize();

  // Initial placement (centers of movable nodes; fillers at their seed spots).
  PlacementState initial_placement() const;

  Point pin_position(const Pin& pin, const PlacementState& pl) const {
    const Node& n = nodes[pin.node_id];
    int slot = slot_of(pin.node_id);
    if (slot < 0) return {n.center.x + pin.offset.x, n.center.y + pin.offset.y};
    return {pl.x[slot] + pin.offset.x, pl.y[slot] + pin.offset.y};
  }

  long long total_pin_count() const { return static_cast<long long>(pins.size()); }

 private:
  std::vector<std::vector<int>> node_pins_;
};

}  // namespace fftpl
