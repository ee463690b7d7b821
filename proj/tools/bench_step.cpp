// Micro-benchmark for the product-formula step at several batch widths.
#include "transmon/model.hpp"
#include "transmon/pulses.hpp"
#include "transmon/solver.hpp"
#include "transmon/units.hpp"

#include <chrono>
#include <cstdio>

using namespace transmon;

int main() {
  DeviceParameters dev = DeviceParameters::defaults();
  auto eig = diagonalize_device(dev);
  auto terms = hamiltonian_terms(dev);
  const double tau = 1e-3;

  // idle drive and a representative driven schedule
  PulseSchedule idle;
  PulseSchedule driven;
  emit_drag(driven, 0.0, 0, 0.00444, 0.219, ghz_to_radns(5.346), 0.0);
  for (double until = driven.duration; until < 1e6;)
    until = emit_drag(driven, until, 0, 0.00444, 0.219, ghz_to_radns(5.346),
                      0.0);

  for (int cols : {1, 2, 4}) {
    for (bool use_drive : {false, true}) {
      TrotterPropagator prop(terms, dev.basis, tau);
      StateBlock s = StateBlock::zeros(dev.basis, cols);
      for (int c = 0; c < cols; ++c)
        s.set_column(c, computational_state(dev.basis, eig, c & 1, (c >> 1) & 1));
      DriveSampler sampler(use_drive ? driven : idle);
      const int n = 20000;
      auto t0 = std::chrono::steady_clock::now();
      for (int i = 0; i < n; ++i) prop.step(s, sampler, i * tau);
      auto t1 = std::chrono::steady_clock::now();
      double us =
          std::chrono::duration<double, std::micro>(t1 - t0).count() / n;
      std::printf("cols=%d drive=%d: %.2f us/step (%.2f us per column), "
                  "norm0=%.12f\n",
                  cols, use_drive, us, us / cols, s.norm(0));
    }
  }
  return 0;
}
