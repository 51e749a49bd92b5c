#include "fftpl/netlist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fftpl {

double Region::row_area() const {
  double a = 0.0;
  for (const Row& r : rows) a += r.area();
  return a;
}

namespace {

// complement of a set of [lo,hi) intervals within [lx,hx)
std::vector<std::pair<double, double>> complement_intervals(
    std::vector<std::pair<double, double>> ivals, double lx, double hx) {
  std::sort(ivals.begin(), ivals.end());
  std::vector<std::pair<double, double>> out;
  double cur = lx;
  for (auto& [lo, hi] : ivals) {
    if (lo > cur) out.emplace_back(cur, std::min(lo, hx));
    cur = std::max(cur, hi);
    if (cur >= hx) break;
  }
  if (cur < hx) out.emplace_back(cur, hx);
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](auto& p) { return p.second - p.first <= 1e-12; }),
            out.end());
  return out;
}

}  // namespace

void Region::build_dark_rects() {
  dark_rects.clear();
  // horizontal slabs bounded by every distinct y edge
  std::vector<double> ys = {bbox.ly, bbox.hy};
  for (const Row& r : rows) {
    ys.push_back(r.y);
    ys.push_back(r.y + r.height);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end(),
                       [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
           ys.end());

  std::vector<Rect> strips;
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
    double ylo = ys[i], yhi = ys[i + 1];
    if (yhi <= bbox.ly || ylo >= bbox.hy) continue;
    double ymid = 0.5 * (ylo + yhi);
    std::vector<std::pair<double, double>> covered;
    for (const Row& r : rows)
      if (ymid > r.y && ymid < r.y + r.height) covered.emplace_back(r.lx, r.hx);
    for (auto& [lo, hi] : complement_intervals(std::move(covered), bbox.lx, bbox.hx))
      strips.push_back({lo, ylo, hi, yhi});
  }

  // merge vertically adjacent strips with identical x extents
  std::sort(strips.begin(), strips.end(), [](const Rect& a, const Rect& b) {
    return std::tie(a.lx, a.hx, a.ly) < std::tie(b.lx, b.hx, b.ly);
  });
  for (const Rect& s : strips) {
    if (!dark_rects.empty()) {
      Rect& last = dark_rects.back();
      if (std::abs(last.lx - s.lx) <= 1e-12 && std::abs(last.hx - s.hx) <= 1e-12 &&
          std::abs(last.hy - s.ly) <= 1e-12) {
        last.hy = s.hy;
        continue;
      }
    }
    dark_rects.push_back(s);
  }
}

bool PlacementState::finite() const {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

void Netlist::add_dark_nodes(const Region& region) {
  if (dark_count != 0) throw std::logic_error("dark nodes already added");
  if (filler_count != 0) throw std::logic_error("dark nodes must precede fillers");
  for (const Rect& r : region.dark_rects) {
    Node n;
    n.id = static_cast<int>(nodes.size());
    n.kind = NodeKind::Dark;
    n.width = r.width();
    n.height = r.height();
    n.center = r.center();
    n.name = "dark" + std::to_string(dark_count);
    nodes.push_back(std::move(n));
    ++dark_count;
  }
}

void Netlist::append_fillers(const std::vector<Node>& fillers) {
  if (filler_count != 0) throw std::logic_error("fillers already added");
  for (Node f : fillers) {
    f.id = static_cast<int>(nodes.size());
    f.kind = NodeKind::Filler;
    nodes.push_back(std::move(f));
    ++filler_count;
  }
}

void Netlist::finalize() {
  node_pins_.assign(nodes.size(), {});
  for (std::size_t i = 0; i < pins.size(); ++i)
    node_pins_[pins[i].node_id].push_back(static_cast<int>(i));
}

PlacementState Netlist::initial_placement() const {
  PlacementState pl;
  pl.x.reserve(mobile_count());
  pl.y.reserve(mobile_count());
  for (int i = 0; i < movable_count; ++i) {
    pl.x.push_back(nodes[i].center.x);
    pl.y.push_back(nodes[i].center.y);
  }
  for (int i = 0; i < filler_count; ++i) {
    const Node& f = nodes[filler_begin() + i];
    pl.x.push_back(f.center.x);
    pl.y.push_back(f.center.y);
  }
  return pl;
}

}  // namespace fftpl
