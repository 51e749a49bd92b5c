#include "fftpl/initial.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "fftpl/rng.hpp"

namespace fftpl {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

struct B2BEdge {
  // endpoint < 0 encodes a fixed pin at absolute position `fixed_pos`
  int var_a = -1, var_b = -1;
  double off_a = 0.0, off_b = 0.0;
  double fixed_pos = 0.0;
  double weight = 0.0;
};

class AxisSolver {
 public:
  AxisSolver(const Netlist& nl, const std::vector<int>& var_of, int num_vars, bool x_axis)
      : nl_(nl), var_of_(var_of), num_vars_(num_vars), x_axis_(x_axis) {}

  // Builds B2B edges from current pin coordinates. When `unit_weights` is
  // set the 1/|d| factor is dropped (first pass from possibly coincident
  // starting points).
  void build_edges(const std::vector<double>& coord, double eps, bool unit_weights) {
    edges_.clear();
    for (const Net& net : nl_.nets) {
      int deg = net.degree();
      if (deg < 2) continue;
      // bound pins by coordinate, ties broken by pin index
      int imin = net.pin_begin, imax = net.pin_begin;
      double cmin = pin_coord(net.pin_begin, coord);
      double cmax = cmin;
      for (int p = net.pin_begin + 1; p < net.pin_end; ++p) {
        double c = pin_coord(p, coord);
        if (c < cmin) cmin = c, imin = p;
        if (c > cmax) cmax = c, imax = p;
      }
      for (int p = net.pin_begin; p < net.pin_end; ++p) {
        for (int bound : {imin, imax}) {
          if (p == bound) continue;
          if (p == imax && bound == imin) continue;  // min-max edge only once
          add_edge(net, p, bound, coord, eps, unit_weights);
        }
      }
    }
  }

  double objective(const std::vector<double>& coord) const {
    double q = 0.0;
    for (const B2BEdge& e : edges_) {
      double pa = e.var_a >= 0 ? coord_of_var(e.var_a, coord) + e.off_a : e.fixed_pos;
      double pb = e.var_b >= 0 ? coord_of_var(e.var_b, coord) + e.off_b : e.fixed_pos;
      double d = pa - pb;
      q += e.weight * d * d;
    }
    return q;
  }

  // one linear solve; returns max coordinate move
  double solve(std::vector<double>& coord, double cg_tol) {
    Eigen::SparseMatrix<double> A(num_vars_, num_vars_);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(num_vars_);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(edges_.size() * 4);
    for (const B2BEdge& e : edges_) {
      if (e.var_a >= 0 && e.var_b >= 0) {
        double delta = e.off_a - e.off_b;
        trips.emplace_back(e.var_a, e.var_a, e.weight);
        trips.emplace_back(e.var_b, e.var_b, e.weight);
        trips.emplace_back(e.var_a, e.var_b, -e.weight);
        trips.emplace_back(e.var_b, e.var_a, -e.weight);
        rhs[e.var_a] -= e.weight * delta;
        rhs[e.var_b] += e.weight * delta;
      } else if (e.var_a >= 0) {
        trips.emplace_back(e.var_a, e.var_a, e.weight);
        rhs[e.var_a] += e.weight * (e.fixed_pos - e.off_a);
      }
    }
    A.setFromTriplets(trips.begin(), trips.end());

    Eigen::VectorXd guess(num_vars_);
    for (int i = 0; i < static_cast<int>(var_nodes_.size()); ++i)
      guess[i] = coord[nl_.slot_of(var_nodes_[i])];

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>
        cg;
    cg.setTolerance(cg_tol);
    cg.compute(A);
    Eigen::VectorXd sol = cg.solveWithGuess(rhs, guess);

    double max_move = 0.0;
    for (int i = 0; i < static_cast<int>(var_nodes_.size()); ++i) {
      int slot = nl_.slot_of(var_nodes_[i]);
      max_move = std::max(max_move, std::abs(sol[i] - coord[slot]));
      coord[slot] = sol[i];
    }
    return max_move;
  }

  void set_var_nodes(std::vector<int> nodes) { var_nodes_ = std::move(nodes); }

 private:
  double pin_coord(int pin_idx, const std::vector<double>& coord) const {
    const Pin& pin = nl_.pins[pin_idx];
    const Node& node = nl_.nodes[pin.node_id];
    double off = x_axis_ ? pin.offset.x : pin.offset.y;
    int slot = nl_.slot_of(pin.node_id);
    if (slot < 0) return (x_axis_ ? node.center.x : node.center.y) + off;
    return coord[slot] + off;
  }

  double coord_of_var(int var, const std::vector<double>& coord) const {
    return coord[nl_.slot_of(var_nodes_[var])];
  }

  void add_edge(const Net& net, int p, int bound, const std::vector<double>& coord,
                double eps, bool unit_weights) {
    const Pin& pa = nl_.pins[p];
    const Pin& pb = nl_.pins[bound];
    if (pa.node_id == pb.node_id) return;  // rigid offsets, no force
    int va = var_of_[pa.node_id];
    int vb = var_of_[pb.node_id];
    if (va < 0 && vb < 0) return;

    double w = 2.0 / (net.degree() - 1);
    if (!unit_weights) {
      double d = std::abs(pin_coord(p, coord) - pin_coord(bound, coord));
      w /= std::max(d, eps);
    }
    B2BEdge e;
    e.weight = w;
    e.var_a = va;
    e.var_b = vb;
    e.off_a = x_axis_ ? pa.offset.x : pa.offset.y;
    e.off_b = x_axis_ ? pb.offset.x : pb.offset.y;
    if (va < 0) {
      std::swap(e.var_a, e.var_b);
      std::swap(e.off_a, e.off_b);
      e.fixed_pos = pin_coord(p, coord);
    } else if (vb < 0) {
      e.fixed_pos = pin_coord(bound, coord);
    }
    edges_.push_back(e);
  }

  const Netlist& nl_;
  const std::vector<int>& var_of_;
  int num_vars_;
  bool x_axis_;
  std::vector<int> var_nodes_;
  std::vector<B2BEdge> edges_;
};

}  // namespace

PlacementState initial_place(const Netlist& nl, const Region& region,
                             const InitialPlaceConfig& cfg,
                             std::vector<double>* quad_objective_trace) {
  PlacementState pl = nl.initial_placement();
  if (nl.movable_count == 0) return pl;

  // connected components over movable cells; anchored = touches a fixed pin
  UnionFind uf(nl.movable_count);
  std::vector<char> net_has_fixed(nl.nets.size(), 0);
  for (const Net& net : nl.nets) {
    int first_movable = -1;
    for (int p = net.pin_begin; p < net.pin_end; ++p) {
      const Node& n = nl.nodes[nl.pins[p].node_id];
      if (n.kind == NodeKind::Movable) {
        if (first_movable < 0) first_movable = n.id;
        else uf.join(first_movable, n.id);
      } else {
        net_has_fixed[net.id] = 1;
      }
    }
  }
  std::vector<char> anchored_root(nl.movable_count, 0);
  for (const Net& net : nl.nets) {
    if (!net_has_fixed[net.id]) continue;
    for (int p = net.pin_begin; p < net.pin_end; ++p) {
      const Node& n = nl.nodes[nl.pins[p].node_id];
      if (n.kind == NodeKind::Movable) anchored_root[uf.find(n.id)] = 1;
    }
  }

  Rng rng(cfg.seed);
  Point center = region.bbox.center();
  std::vector<int> var_of(nl.nodes.size(), -1);
  std::vector<int> var_nodes;
  for (int i = 0; i < nl.movable_count; ++i) {
    if (anchored_root[uf.find(i)]) {
      var_of[i] = static_cast<int>(var_nodes.size());
      var_nodes.push_back(i);
    } else {
      pl.x[i] = center.x + rng.uniform(-0.5, 0.5);
      pl.y[i] = center.y + rng.uniform(-0.5, 0.5);
    }
  }
  if (var_nodes.empty()) return pl;

  for (int axis = 0; axis < 2; ++axis) {
    bool x_axis = axis == 0;
    std::vector<double>& coord = x_axis ? pl.x : pl.y;
    double span = x_axis ? region.bbox.width() : region.bbox.height();
    double eps = cfg.eps_frac * span;

    AxisSolver solver(nl, var_of, static_cast<int>(var_nodes.size()), x_axis);
    solver.set_var_nodes(var_nodes);

    solver.build_edges(coord, eps, /*unit_weights=*/true);
    solver.solve(coord, cfg.cg_tolerance);
    for (int round = 0; round < cfg.rounds; ++round) {
      solver.build_edges(coord, eps, /*unit_weights=*/false);
      double moved = solver.solve(coord, cfg.cg_tolerance);
      if (quad_objective_trace) quad_objective_trace->push_back(solver.objective(coord));
      if (moved < cfg.move_tol_frac * span) break;
    }
  }

  // keep every cell inside the region
  for (int i = 0; i < nl.movable_count; ++i) {
    const Node& n = nl.nodes[i];
    pl.x[i] = std::clamp(pl.x[i], region.bbox.lx + 0.5 * n.width,
                         region.bbox.hx - 0.5 * n.width);
    pl.y[i] = std::clamp(pl.y[i], region.bbox.ly + 0.5 * n.height,
                         region.bbox.hy - 0.5 * n.height);
  }
  return pl;
}

}  // namespace fftpl
