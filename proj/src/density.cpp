#include "fftpl/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fftpl/poisson.hpp"
#include "fftpl/rng.hpp"

namespace fftpl {

GridConfig make_grid(const Region& region, int n) {
  if (n < 1) throw std::invalid_argument("make_grid: n must be >= 1");
  GridConfig g;
  g.n = n;
  g.origin = {region.bbox.lx, region.bbox.ly};
  g.wb = region.bbox.width() / n;
  g.hb = region.bbox.height() / n;
  if (!(g.wb > 0.0 && g.hb > 0.0)) throw std::invalid_argument("make_grid: empty region");
  return g;
}

int choose_grid_dim(long long m) {
  if (m < 1) throw std::invalid_argument("choose_grid_dim: m must be >= 1");
  int n = 1;
  while (n < 1024 && static_cast<long long>(n) * n < m) n *= 2;
  return n;
}

double DensityGrid::sum() const {
  double s = 0.0;
  for (double v : rho) s += v;
  return s;
}

namespace {

struct BinSpan {
  int lo = 0, hi = 0;  // bin index range [lo, hi]
};

// clips [rlo, rhi] to the grid along one axis; false if no overlap
bool bin_span(double rlo, double rhi, double origin, double step, int n, BinSpan& s) {
  double flo = (rlo - origin) / step;
  double fhi = (rhi - origin) / step;
  if (fhi <= 0.0 || flo >= static_cast<double>(n)) return false;
  s.lo = std::max(0, static_cast<int>(std::floor(flo)));
  s.hi = std::min(n - 1, static_cast<int>(std::floor(fhi)));
  return true;
}

template <typename Visit>
bool for_each_overlap(const Rect& r, const GridConfig& g, Visit&& visit) {
  BinSpan sx, sy;
  if (!bin_span(r.lx, r.hx, g.origin.x, g.wb, g.n, sx)) return false;
  if (!bin_span(r.ly, r.hy, g.origin.y, g.hb, g.n, sy)) return false;
  bool any = false;
  for (int ix = sx.lo; ix <= sx.hi; ++ix) {
    double bx_lo = g.origin.x + ix * g.wb;
    double dx = overlap_1d(r.lx, r.hx, bx_lo, bx_lo + g.wb);
    if (dx <= 0.0) continue;
    for (int iy = sy.lo; iy <= sy.hi; ++iy) {
      double by_lo = g.origin.y + iy * g.hb;
      double dy = overlap_1d(r.ly, r.hy, by_lo, by_lo + g.hb);
      if (dy <= 0.0) continue;
      visit(ix, iy, dx * dy);
      any = true;
    }
  }
  return any;
}

Point node_position(const Netlist& nl, const PlacementState& pl, const Node& n) {
  int slot = nl.slot_of(n.id);
  return slot < 0 ? n.center : Point{pl.x[slot], pl.y[slot]};
}

}  // namespace

DensityGrid build_density(const Netlist& nl, const PlacementState& pl,
                          const GridConfig& grid, double rho_t) {
  DensityGrid g;
  g.n = grid.n;
  g.wb = grid.wb;
  g.hb = grid.hb;
  g.origin = grid.origin;
  g.rho.assign(static_cast<std::size_t>(grid.n) * grid.n, 0.0);
  double inv_bin = 1.0 / g.bin_area();

  for (const Node& node : nl.nodes) {
    Rect r = node.rect_at(node_position(nl, pl, node));
    if (!std::isfinite(r.lx) || !std::isfinite(r.ly))
      throw std::invalid_argument("build_density: non-finite node position");
    double scale = node.charge(rho_t) / node.area();
    bool any = for_each_overlap(r, grid, [&](int ix, int iy, double a) {
      g.at(ix, iy) += a * scale * inv_bin;
    });
    if (!any && nl.is_mobile(node))
      throw std::domain_error("build_density: node '" + node.name +
                              "' entirely outside the grid");
  }
  remove_dc(g);
  return g;
}

void remove_dc(DensityGrid& grid) {
  double mean = grid.sum() / static_cast<double>(grid.rho.size());
  for (double& v : grid.rho) v -= mean;
}

std::vector<Node> insert_fillers(const Netlist& nl, const Region& region, double rho_t,
                                 std::uint64_t seed) {
  // placeable area: rows minus fixed-node overlap with rows
  double a_ws = region.row_area();
  for (const Node& n : nl.nodes) {
    if (n.kind != NodeKind::Fixed) continue;
    Rect r = n.rect_at(n.center);
    for (const Row& row : region.rows) a_ws -= overlap_area(r, row.rect());
  }
  double a_m = 0.0;
  std::vector<double> areas;
  for (const Node& n : nl.nodes)
    if (n.kind == NodeKind::Movable) {
      a_m += n.area();
      areas.push_back(n.area());
    }

  double a_fc = rho_t * a_ws - a_m;
  if (a_fc <= 0.0) return {};

  double filler_area = 1.0;  // fallback when there are no movable cells
  if (!areas.empty()) {
    std::sort(areas.begin(), areas.end());
    std::size_t lo = static_cast<std::size_t>(0.05 * areas.size());
    std::size_t hi = std::max(lo + 1, static_cast<std::size_t>(0.95 * areas.size()));
    hi = std::min(hi, areas.size());
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += areas[i];
    filler_area = sum / static_cast<double>(hi - lo);
  }
  double side = std::sqrt(filler_area);
  long long count = static_cast<long long>(std::floor(a_fc / filler_area));

  // uniform over the row union by area: pick a row weighted by area, then a
  // point inside it; clamp so the filler stays inside the bounding box
  std::vector<double> cum;
  double total = 0.0;
  for (const Row& r : region.rows) cum.push_back(total += r.area());
  Rng rng(seed);
  std::vector<Node> fillers;
  fillers.reserve(count);
  for (long long i = 0; i < count; ++i) {
    double pick = rng.uniform(0.0, total);
    std::size_t ri = std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin();
    ri = std::min(ri, region.rows.size() - 1);
    const Row& row = region.rows[ri];
    Node f;
    f.kind = NodeKind::Filler;
    f.width = side;
    f.height = side;
    f.name = "f" + std::to_string(i);
    double cx = rng.uniform(row.lx, row.hx);
    double cy = rng.uniform(row.y, row.y + row.height);
    f.center.x = std::clamp(cx, region.bbox.lx + 0.5 * side, region.bbox.hx - 0.5 * side);
    f.center.y = std::clamp(cy, region.bbox.ly + 0.5 * side, region.bbox.hy - 0.5 * side);
    fillers.push_back(std::move(f));
  }
  return fillers;
}

OverflowContext make_overflow_context(const Netlist& nl, const GridConfig& grid,
                                      double rho_t) {
  OverflowContext ctx;
  ctx.grid = grid;
  ctx.rho_t = rho_t;
  std::size_t bins = static_cast<std::size_t>(grid.n) * grid.n;
  std::vector<double> blocked(bins, 0.0);
  for (const Node& node : nl.nodes) {
    if (node.kind == NodeKind::Movable) {
      ctx.total_movable += node.area();
      continue;
    }
    if (node.kind == NodeKind::Filler) continue;
    Rect r = node.rect_at(node.center);
    for_each_overlap(r, grid, [&](int ix, int iy, double a) {
      blocked[static_cast<std::size_t>(ix) * grid.n + iy] += a;
    });
  }
  if (ctx.total_movable <= 0.0) throw std::domain_error("overflow: no movable area");
  double bin_area = grid.wb * grid.hb;
  ctx.capacity.resize(bins);
  for (std::size_t b = 0; b < bins; ++b)
    ctx.capacity[b] = rho_t * std::max(0.0, bin_area - blocked[b]);
  return ctx;
}

OverflowReport overflow(const OverflowContext& ctx, const Netlist& nl,
                        const PlacementState& pl) {
  std::size_t bins = ctx.capacity.size();
  std::vector<double> movable(bins, 0.0);
  for (int i = 0; i < nl.movable_count; ++i) {
    const Node& node = nl.nodes[i];
    Rect r = node.rect_at({pl.x[i], pl.y[i]});
    for_each_overlap(r, ctx.grid, [&](int ix, int iy, double a) {
      movable[static_cast<std::size_t>(ix) * ctx.grid.n + iy] += a;
    });
  }
  OverflowReport rep;
  for (std::size_t b = 0; b < bins; ++b)
    rep.overflowed_area += std::max(0.0, movable[b] - ctx.capacity[b]);
  rep.tau = rep.overflowed_area / ctx.total_movable;
  return rep;
}

OverflowReport overflow(const Netlist& nl, const PlacementState& pl,
                        const GridConfig& grid, double rho_t) {
  return overflow(make_overflow_context(nl, grid, rho_t), nl, pl);
}

namespace {

double node_energy(const Node& node, Point pos, const FieldMaps& field, double rho_t) {
  GridConfig g{field.n, field.wb, field.hb, field.origin};
  Rect r = node.rect_at(pos);
  double acc = 0.0, wsum = 0.0;
  for_each_overlap(r, g, [&](int ix, int iy, double a) {
    acc += a * field.psi[static_cast<std::size_t>(ix) * field.n + iy];
    wsum += a;
  });
  return wsum > 0.0 ? node.charge(rho_t) * (acc / wsum) : 0.0;
}

}  // namespace

double static_energy(const Netlist& nl, const FieldMaps& field, double rho_t) {
  double energy = 0.0;
  for (const Node& node : nl.nodes)
    if (node.kind == NodeKind::Fixed || node.kind == NodeKind::Dark)
      energy += node_energy(node, node.center, field, rho_t);
  return energy;
}

double mobile_energy(const Netlist& nl, const PlacementState& pl,
                     const FieldMaps& field) {
  double energy = 0.0;
  for (const Node& node : nl.nodes) {
    if (!nl.is_mobile(node)) continue;
    int slot = nl.slot_of(node.id);
    energy += node_energy(node, {pl.x[slot], pl.y[slot]}, field, 1.0);
  }
  return energy;
}

double potential_energy(const Netlist& nl, const PlacementState& pl,
                        const FieldMaps& field, double rho_t) {
  return static_energy(nl, field, rho_t) + mobile_energy(nl, pl, field);
}

}  // namespace fftpl
