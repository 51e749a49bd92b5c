#include "fftpl/wirelength.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace fftpl {

namespace {

void check_finite(const PlacementState& pl) {
  if (!pl.finite()) throw std::invalid_argument("wirelength: non-finite coordinates");
}

struct AxisAccum {
  double value = 0.0;
};

// one net, one axis; writes per-pin gradients when gpin != nullptr
inline double wa_net_axis(const double* coord, int degree, double inv_gamma,
                          double* gpin) {
  double cmax = -std::numeric_limits<double>::infinity();
  double cmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < degree; ++i) {
    cmax = std::max(cmax, coord[i]);
    cmin = std::min(cmin, coord[i]);
  }
  double sp = 0.0, dp = 0.0, sm = 0.0, dm = 0.0;
  for (int i = 0; i < degree; ++i) {
    double ep = std::exp((coord[i] - cmax) * inv_gamma);
    double em = std::exp((cmin - coord[i]) * inv_gamma);
    sp += coord[i] * ep;
    dp += ep;
    sm += coord[i] * em;
    dm += em;
  }
  if (gpin != nullptr) {
    for (int i = 0; i < degree; ++i) {
      double ep = std::exp((coord[i] - cmax) * inv_gamma);
      double em = std::exp((cmin - coord[i]) * inv_gamma);
      double dmax = ep * ((1.0 + coord[i] * inv_gamma) * dp - sp * inv_gamma) / (dp * dp);
      double dmin = em * ((1.0 - coord[i] * inv_gamma) * dm + sm * inv_gamma) / (dm * dm);
      gpin[i] = dmax - dmin;
    }
  }
  return sp / dp - sm / dm;
}

}  // namespace

WirelengthResult hpwl(const Netlist& nl, const PlacementState& pl, bool per_net) {
  check_finite(pl);
  WirelengthResult res;
  if (per_net) res.per_net.resize(nl.nets.size(), 0.0);
  for (const Net& net : nl.nets) {
    if (net.degree() < 2) continue;
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (int p = net.pin_begin; p < net.pin_end; ++p) {
      Point pos = nl.pin_position(nl.pins[p], pl);
      xlo = std::min(xlo, pos.x);
      xhi = std::max(xhi, pos.x);
      ylo = std::min(ylo, pos.y);
      yhi = std::max(yhi, pos.y);
    }
    double w = (xhi - xlo) + (yhi - ylo);
    if (per_net) res.per_net[net.id] = w;
    res.total += w;
  }
  return res;
}

double hpwl_total(const Netlist& nl, const PlacementState& pl) {
  return hpwl(nl, pl, false).total;
}

namespace {

// Shared worker: evaluates nets [net_lo, net_hi), filling per_net values and
// (optionally) per-pin gradients. Scratch sized to the max degree in range.
void wa_run_range(const Netlist& nl, const PlacementState& pl, double inv_gamma,
                  int net_lo, int net_hi, double* per_net, double* gpin_x,
                  double* gpin_y) {
  std::vector<double> cx, cy, gx, gy;
  for (int e = net_lo; e < net_hi; ++e) {
    const Net& net = nl.nets[e];
    int deg = net.degree();
    if (deg < 2) {
      per_net[e] = 0.0;
      continue;
    }
    cx.resize(deg);
    cy.resize(deg);
    for (int i = 0; i < deg; ++i) {
      Point pos = nl.pin_position(nl.pins[net.pin_begin + i], pl);
      cx[i] = pos.x;
      cy[i] = pos.y;
    }
    double vx, vy;
    if (gpin_x != nullptr) {
      vx = wa_net_axis(cx.data(), deg, inv_gamma, gpin_x + net.pin_begin);
      vy = wa_net_axis(cy.data(), deg, inv_gamma, gpin_y + net.pin_begin);
    } else {
      vx = wa_net_axis(cx.data(), deg, inv_gamma, nullptr);
      vy = wa_net_axis(cy.data(), deg, inv_gamma, nullptr);
    }
    per_net[e] = vx + vy;
  }
}

void wa_parallel(const Netlist& nl, const PlacementState& pl, double inv_gamma,
                 int threads, double* per_net, double* gpin_x, double* gpin_y) {
  int n = static_cast<int>(nl.nets.size());
  threads = std::clamp(threads, 1, 64);
  if (threads == 1 || n < 256) {
    wa_run_range(nl, pl, inv_gamma, 0, n, per_net, gpin_x, gpin_y);
    return;
  }
  std::vector<std::future<void>> jobs;
  int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
      wa_run_range(nl, pl, inv_gamma, lo, hi, per_net, gpin_x, gpin_y);
    }));
  }
  for (auto& j : jobs) j.get();
}

}  // namespace

WirelengthResult wa_wirelength(const Netlist& nl, const PlacementState& pl, double gamma,
                               bool with_gradient, int threads) {
  if (!(gamma > 0.0)) throw std::invalid_argument("wa_wirelength: gamma must be > 0");
  check_finite(pl);
  WirelengthResult res;
  res.per_net.resize(nl.nets.size(), 0.0);
  std::vector<double> gpin_x, gpin_y;
  if (with_gradient) {
    gpin_x.resize(nl.pins.size(), 0.0);
    gpin_y.resize(nl.pins.size(), 0.0);
    res.grad_x.assign(pl.size(), 0.0);
    res.grad_y.assign(pl.size(), 0.0);
  }
  wa_parallel(nl, pl, 1.0 / gamma, threads, res.per_net.data(),
              with_gradient ? gpin_x.data() : nullptr,
              with_gradient ? gpin_y.data() : nullptr);

  for (const Net& net : nl.nets) res.total += res.per_net[net.id];
  if (with_gradient) {
    // fixed pin order keeps the reduction deterministic for any thread count
    for (std::size_t p = 0; p < nl.pins.size(); ++p) {
      int slot = nl.slot_of(nl.pins[p].node_id);
      if (slot < 0) continue;
      res.grad_x[slot] += gpin_x[p];
      res.grad_y[slot] += gpin_y[p];
    }
  }
  return res;
}

double wa_value(const Netlist& nl, const PlacementState& pl, double gamma, int threads) {
  if (!(gamma > 0.0)) throw std::invalid_argument("wa_value: gamma must be > 0");
  check_finite(pl);
  std::vector<double> per_net(nl.nets.size(), 0.0);
  wa_parallel(nl, pl, 1.0 / gamma, threads, per_net.data(), nullptr, nullptr);
  double total = 0.0;
  for (double v : per_net) total += v;
  return total;
}

}  // namespace fftpl
