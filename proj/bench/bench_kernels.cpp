// Serial reference kernels against their OpenMP versions.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "vvs/experiment.hpp"
#include "vvs/kernels.hpp"

using namespace vvs;

namespace {

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000000ull;
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-28s %10s %10s %9s\n", "kernel", "serial[s]", "omp[s]", "speedup");

  const DensityMatrix rho = prepare_state(NoiseModel::from_fidelity(0.977), Encoding::vortex);
  const auto model = build_trial_model(rho, platonic_set(3), Receiver{}, ChannelModel{0.45, 1.0},
                                       ThetaPolicy::dynamic());
  CountTable a, b;
  const double ts = best_of(3, [&] { a = kernels::tally_trials_serial(model, trials, 1); });
  const double tp = best_of(3, [&] { b = kernels::tally_trials_parallel(model, trials, 1); });
  report("tally_trials (dynamic)", ts, tp, a == b);

  const auto grid = kernels::sphere_grid(2e-3);
  std::vector<BlochVector> vecs;
  for (const auto& s : enumerate_strategies(platonic_set(4))) {
    BlochVector sum{};
    for (std::size_t k = 0; k < s.answers.size(); ++k) sum = sum + platonic_set(4)[k] * s.answers[k];
    vecs.push_back(sum);
  }
  std::vector<double> sa, sb;
  const double ss = best_of(3, [&] { sa = kernels::sphere_search_serial(vecs, grid); });
  const double sp = best_of(3, [&] { sb = kernels::sphere_search_parallel(vecs, grid); });
  report("sphere_search (n=4)", ss, sp, sa == sb);

  std::vector<double> xi;
  for (int i = 1; i <= 400; ++i) xi.push_back(std::min(1.0, 1.0 / 6 + (5.0 / 6) * i / 400.0));
  std::vector<BoundResult> ba, bb;
  const double bs = best_of(3, [&] { ba = kernels::bound_grid_serial(platonic_set(6), xi, AnnounceConstraint::average); });
  const double bp = best_of(3, [&] { bb = kernels::bound_grid_parallel(platonic_set(6), xi, AnnounceConstraint::average); });
  bool same = ba.size() == bb.size();
  for (std::size_t i = 0; same && i < ba.size(); ++i) same = ba[i].c == bb[i].c;
  report("bound_grid (n=6, 400 pts)", bs, bp, same);
  return 0;
}
