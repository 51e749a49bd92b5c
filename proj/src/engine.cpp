#include "fftpl/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fftpl/wirelength.hpp"

namespace fftpl {

double penalty_scale_mu(double dw, double dw_ref, double lo, double hi) {
  double mu = std::pow(1.1, -dw / dw_ref + 1.0);
  return std::clamp(mu, lo, hi);
}

double smoothing_gamma(double tau, double wb) {
  return 8.0 * wb * std::pow(10.0, 20.0 / 9.0 * (tau - 0.1) - 1.0);
}

ObjectiveEval objective_and_gradient(const Netlist& nl, const PlacementState& pl,
                                     const FieldMaps& field, double gamma,
                                     double lambda, double rho_t, int threads) {
  ObjectiveEval ev;
  WirelengthResult wl = wa_wirelength(nl, pl, gamma, /*with_gradient=*/true, threads);
  ev.wa = wl.total;
  ev.energy = potential_energy(nl, pl, field, rho_t);
  ev.f = ev.wa + lambda * ev.energy;
  ev.grad_x = std::move(wl.grad_x);
  ev.grad_y = std::move(wl.grad_y);

  for (int slot = 0; slot < static_cast<int>(pl.size()); ++slot) {
    const Node& node = nl.nodes[nl.node_of_slot(slot)];
    FieldSample s = sample_field(field, node.rect_at({pl.x[slot], pl.y[slot]}));
    double q = node.area();
    ev.grad_x[slot] -= lambda * q * s.ex;
    ev.grad_y[slot] -= lambda * q * s.ey;
  }
  return ev;
}

std::vector<double> cg_direction(CgState& state, const std::vector<double>& grad,
                                 int restart_period) {
  for (double g : grad)
    if (!std::isfinite(g)) throw std::invalid_argument("cg_direction: non-finite gradient");

  std::vector<double> dir(grad.size());
  bool restart = state.prev_grad.size() != grad.size() ||
                 state.since_restart >= restart_period;
  double beta = 0.0;
  if (!restart) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      num += grad[i] * (grad[i] - state.prev_grad[i]);
      den += state.prev_grad[i] * state.prev_grad[i];
    }
    beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
  }
  double descent = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    dir[i] = -grad[i] + (restart ? 0.0 : beta * state.prev_dir[i]);
    descent += dir[i] * grad[i];
  }
  if (!restart && descent >= 0.0) {  // conjugate direction lost descent
    restart = true;
    for (std::size_t i = 0; i < grad.size(); ++i) dir[i] = -grad[i];
  }
  state.since_restart = restart ? 1 : state.since_restart + 1;
  state.prev_grad = grad;
  state.prev_dir = dir;
  return dir;
}

double backtrack_search(const std::function<double(double)>& phi, double phi0,
                        double slope, double alpha_max, double alpha_min, double c1) {
  if (!(alpha_max > 0.0) || !(alpha_min > 0.0))
    throw std::invalid_argument("backtrack_search: bounds must be positive");
  double alpha = alpha_max;
  while (alpha >= alpha_min) {
    if (phi(alpha) <= phi0 + c1 * alpha * slope) return alpha;
    alpha *= 0.5;
  }
  return alpha_min;
}

namespace {

void clamp_into_region(const Netlist& nl, const Region& region, PlacementState& pl) {
  const Rect& b = region.bbox;
  for (int slot = 0; slot < static_cast<int>(pl.size()); ++slot) {
    const Node& node = nl.nodes[nl.node_of_slot(slot)];
    double hw = 0.5 * node.width, hh = 0.5 * node.height;
    pl.x[slot] = hw * 2.0 >= b.width() ? b.center().x
                                       : std::clamp(pl.x[slot], b.lx + hw, b.hx - hw);
    pl.y[slot] = hh * 2.0 >= b.height() ? b.center().y
                                        : std::clamp(pl.y[slot], b.ly + hh, b.hy - hh);
  }
}

double l1_norm_pair(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  for (double v : y) s += std::abs(v);
  return s;
}

}  // namespace

GlobalPlaceResult global_place(const Netlist& nl, const Region& region,
                               const PlacementState& initial, const EngineConfig& cfg,
                               const SnapshotHook& snapshot) {
  if (static_cast<int>(initial.size()) != nl.mobile_count())
    throw std::invalid_argument("global_place: placement size mismatch");

  int n = cfg.grid_override > 0 ? cfg.grid_override : choose_grid_dim(nl.movable_count);
  GridConfig grid = make_grid(region, n);
  PoissonSolver solver(n);
  OverflowContext ovctx = make_overflow_context(nl, grid, cfg.rho_t);

  GlobalPlaceResult res;
  res.grid = grid;
  PlacementState x = initial;
  clamp_into_region(nl, region, x);

  ScheduleState sched;
  sched.dw_ref = cfg.dw_ref;
  sched.alpha_max0 = cfg.alpha0_factor * grid.wb;
  sched.alpha_max = sched.alpha_max0;
  sched.alpha_min = 0.01 * sched.alpha_max;
  sched.tau = overflow(ovctx, nl, x).tau;
  sched.gamma = smoothing_gamma(sched.tau, grid.wb);

  // lambda_0 balances the wirelength and density forces in L1 norm
  {
    DensityGrid rho0 = build_density(nl, x, grid, cfg.rho_t);
    FieldMaps field0 = solver.solve(rho0);
    WirelengthResult wl = wa_wirelength(nl, x, sched.gamma, true, cfg.threads);
    std::vector<double> fx(x.size(), 0.0), fy(x.size(), 0.0);
    for (int slot = 0; slot < static_cast<int>(x.size()); ++slot) {
      const Node& node = nl.nodes[nl.node_of_slot(slot)];
      FieldSample s = sample_field(field0, node.rect_at({x.x[slot], x.y[slot]}));
      fx[slot] = node.area() * s.ex;
      fy[slot] = node.area() * s.ey;
    }
    double wl_norm = l1_norm_pair(wl.grad_x, wl.grad_y);
    double force_norm = l1_norm_pair(fx, fy);
    sched.lambda = force_norm > 0.0 ? wl_norm / force_norm : 1.0;
    if (!(sched.lambda > 0.0)) sched.lambda = 1.0;
  }

  double w_prev = hpwl_total(nl, x);
  CgState cg;
  PlacementState best = x;
  double best_tau = sched.tau;

  for (int k = 1; k <= cfg.max_iters; ++k) {
    auto t0 = std::chrono::steady_clock::now();

    DensityGrid rho = build_density(nl, x, grid, cfg.rho_t);
    FieldMaps field = solver.solve(rho);
    if (snapshot) snapshot(k, rho, field);
    ObjectiveEval ev =
        objective_and_gradient(nl, x, field, sched.gamma, sched.lambda, cfg.rho_t,
                               cfg.threads);

    std::vector<double> g(2 * x.size());
    std::copy(ev.grad_x.begin(), ev.grad_x.end(), g.begin());
    std::copy(ev.grad_y.begin(), ev.grad_y.end(), g.begin() + x.size());
    std::vector<double> dir = cg_direction(cg, g, cfg.cg_restart_period);

    double dinf = 0.0;
    for (double d : dir) dinf = std::max(dinf, std::abs(d));

    double alpha = sched.alpha_min;
    double wa_probe = ev.wa;
    double energy_probe = ev.energy;
    PlacementState cand = x;
    if (dinf > 0.0) {
      double inv = 1.0 / dinf;
      double slope = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) slope += g[i] * dir[i] * inv;

      double e_static = static_energy(nl, field, cfg.rho_t);
      auto move_to = [&](double a) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          cand.x[i] = x.x[i] + a * dir[i] * inv;
          cand.y[i] = x.y[i] + a * dir[i + x.size()] * inv;
        }
        clamp_into_region(nl, region, cand);
      };
      // probes reuse the frozen field: wirelength re-evaluated, energy
      // resampled against psi of this iteration, no second Poisson solve
      auto phi = [&](double a) {
        move_to(a);
        wa_probe = wa_value(nl, cand, sched.gamma, cfg.threads);
        energy_probe = e_static + mobile_energy(nl, cand, field);
        return wa_probe + sched.lambda * energy_probe;
      };
      alpha = backtrack_search(phi, ev.f, slope, sched.alpha_max, sched.alpha_min,
                               cfg.armijo_c1);
      move_to(alpha);  // recompute in case the last probe was rejected
      wa_probe = wa_value(nl, cand, sched.gamma, cfg.threads);
      energy_probe = e_static + mobile_energy(nl, cand, field);
      x = cand;
    }

    double w_now = hpwl_total(nl, x);
    double tau_now = overflow(ovctx, nl, x).tau;
    double dw = w_now - w_prev;
    w_prev = w_now;

    sched.k = k;
    sched.tau = tau_now;
    sched.lambda *= penalty_scale_mu(dw, sched.dw_ref, sched.mu_lo, sched.mu_hi);
    sched.alpha_max = std::max(sched.alpha_max0, 2.0 * alpha);
    sched.alpha_min = 0.01 * sched.alpha_max;
    sched.gamma = smoothing_gamma(tau_now, grid.wb);

    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    res.trace.push_back({k, w_now, wa_probe, energy_probe, tau_now, sched.lambda,
                         sched.gamma, alpha, ms});

    if (tau_now < best_tau) {
      best_tau = tau_now;
      best = x;
    }
    res.iterations = k;
    if (tau_now <= cfg.stop_overflow) {
      res.converged = true;
      break;
    }
  }

  res.placement = res.converged ? x : best;
  return res;
}

}  // namespace fftpl
