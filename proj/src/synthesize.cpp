#include "fftpl/synthesize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fftpl/rng.hpp"

namespace fftpl {

ParsedDesign synthesize_instance(const SynthConfig& cfg) {
  if (cfg.m < 2) throw std::invalid_argument("synthesize_instance: need m >= 2");
  if (cfg.whitespace < 0.05 || cfg.whitespace > 0.95)
    throw std::invalid_argument("synthesize_instance: whitespace must be in [0.05, 0.95]");

  Rng rng(cfg.seed);
  ParsedDesign out;
  Netlist& nl = out.netlist;

  // movable cells: unit height, log-normal widths clipped to [1, 8]
  double movable_area = 0.0;
  for (int i = 0; i < cfg.m; ++i) {
    Node n;
    n.id = i;
    n.kind = NodeKind::Movable;
    n.width = std::clamp(std::exp(rng.normal(0.6, 0.45)), 1.0, 8.0);
    n.height = 1.0;
    n.name = "c" + std::to_string(i);
    nl.nodes.push_back(std::move(n));
    movable_area += nl.nodes.back().area();
  }
  nl.movable_count = cfg.m;

  // whitespace = 1 - movable_area / row_area  (infeasible configs rejected above)
  double row_area = movable_area / (1.0 - cfg.whitespace);
  int num_rows = std::max(1, static_cast<int>(std::lround(std::sqrt(row_area))));
  double core_w = row_area / num_rows;

  Region& region = out.region;
  double core_lx = cfg.margin, core_ly = cfg.margin;
  for (int r = 0; r < num_rows; ++r)
    region.rows.push_back({core_ly + r, 1.0, core_lx, core_lx + core_w});
  region.bbox = {0.0, 0.0, core_lx + core_w + cfg.margin, core_ly + num_rows + cfg.margin};
  region.build_dark_rects();

  // perimeter pads, evenly spaced along the ring centerline
  int num_pads = std::max(4, static_cast<int>(std::lround(std::sqrt(cfg.m))));
  double half = 0.5 * cfg.margin;
  double ring_w = region.bbox.width() - cfg.margin;   // centerline rectangle
  double ring_h = region.bbox.height() - cfg.margin;
  double perimeter = 2.0 * (ring_w + ring_h);
  for (int p = 0; p < num_pads; ++p) {
    double s = perimeter * p / num_pads;
    Point c;
    if (s < ring_w) c = {half + s, half};
    else if (s < ring_w + ring_h) c = {half + ring_w, half + (s - ring_w)};
    else if (s < 2 * ring_w + ring_h) c = {half + ring_w - (s - ring_w - ring_h), half + ring_h};
    else c = {half, half + ring_h - (s - 2 * ring_w - ring_h)};
    Node n;
    n.id = static_cast<int>(nl.nodes.size());
    n.kind = NodeKind::Fixed;
    n.width = 1.0;
    n.height = 1.0;
    n.center = c;
    n.name = "p" + std::to_string(p);
    nl.nodes.push_back(std::move(n));
    ++nl.fixed_count;
  }

  // nets: net 0 always joins cells 0 and 1, the rest pick 2-8 distinct nodes
  int num_nets = std::max(1, static_cast<int>(std::lround(cfg.nets_per_cell * cfg.m)));
  auto add_pin = [&](Net& net, int node_id) {
    const Node& n = nl.nodes[node_id];
    Pin pin;
    pin.node_id = node_id;
    pin.net_id = net.id;
    pin.offset = {rng.uniform(-0.4, 0.4) * n.width, rng.uniform(-0.4, 0.4) * n.height};
    nl.pins.push_back(pin);
  };
  for (int e = 0; e < num_nets; ++e) {
    Net net;
    net.id = e;
    net.name = "n" + std::to_string(e);
    net.pin_begin = static_cast<int>(nl.pins.size());
    if (e == 0) {
      add_pin(net, 0);
      add_pin(net, 1);
    } else {
      double u = rng.uniform();
      int degree = 2 + static_cast<int>(std::floor(6.0 * u * u * u));  // skewed to 2-3
      degree = std::min(degree, cfg.m);
      bool with_pad = rng.uniform() < cfg.pad_net_fraction;
      std::vector<int> members;
      if (with_pad) members.push_back(cfg.m + static_cast<int>(rng.index(num_pads)));
      while (static_cast<int>(members.size()) < degree) {
        int cand = static_cast<int>(rng.index(cfg.m));
        if (std::find(members.begin(), members.end(), cand) == members.end())
          members.push_back(cand);
      }
      for (int id : members) add_pin(net, id);
    }
    net.pin_end = static_cast<int>(nl.pins.size());
    nl.nets.push_back(std::move(net));
  }

  // initial positions uniform over the core
  for (int i = 0; i < cfg.m; ++i) {
    Node& n = nl.nodes[i];
    n.center.x = rng.uniform(core_lx + 0.5 * n.width, core_lx + core_w - 0.5 * n.width);
    n.center.y = rng.uniform(core_ly + 0.5 * n.height, core_ly + num_rows - 0.5 * n.height);
  }

  nl.add_dark_nodes(region);
  nl.finalize();
  out.placement = nl.initial_placement();
  return out;
}

}  // namespace fftpl
