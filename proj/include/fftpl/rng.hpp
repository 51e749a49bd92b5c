#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fftpl {

// mt19937_64 with hand-rolled distributions: the standard engine is bit-exact
// across platforms, the standard distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  std::uint64_t index(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }

  // Box-Muller, one deviate per call (no cached spare, keeps replay trivial)
  double normal(double mean = 0.0, double sigma = 1.0) {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fftpl
