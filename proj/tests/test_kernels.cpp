#include <doctest.h>

#include <omp.h>

#include <set>

#include "support.hpp"
#include "vvs/experiment.hpp"
#include "vvs/kernels.hpp"

using namespace vvs;

namespace {

kernels::TrialModel model_for(Encoding enc, const ThetaPolicy& policy, double eff = 0.45) {
  Receiver rcv;
  rcv.encoding = enc;
  const DensityMatrix rho = prepare_state(NoiseModel::from_fidelity(0.977), enc);
  return build_trial_model(rho, platonic_set(3), rcv, ChannelModel{eff, 1.0}, policy);
}

}  // namespace

TEST_CASE("block seeds are distinct and deterministic") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {0ull, 1ull, 42ull})
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(kernels::block_seed(master, i));
  CHECK(seen.size() == 3000);
  CHECK(kernels::block_seed(7, 3) == kernels::block_seed(7, 3));
}

TEST_CASE("trial model probabilities are a distribution") {
  std::mt19937_64 rng(51);
  for (Encoding enc : {Encoding::polarization, Encoding::vortex}) {
    const kernels::TrialModel m = model_for(enc, ThetaPolicy::fixed(0.0), 0.6);
    for (int trial = 0; trial < 50; ++trial) {
      const double theta = vvs::testing::uniform(rng, 0, 2 * M_PI);
      for (std::size_t k = 0; k < 3; ++k) {
        const auto p = m.probabilities(k, theta);
        double sum = 0, nulls = 0;
        for (std::size_t i = 0; i < 6; ++i) {
          CHECK(p[i] >= 0.0);
          sum += p[i];
        }
        nulls = p[2] + p[5];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(nulls == doctest::Approx(0.4).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("trial model matches the exact steering parameter") {
  const double v = werner_v_from_fidelity(0.977);
  const kernels::TrialModel m = model_for(Encoding::polarization, ThetaPolicy::fixed(0.0), 1.0);
  for (double theta : {0.0, 0.3, 1.0, M_PI / 2}) {
    double s = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto p = m.probabilities(k, theta);
      s += (p[1] + p[3]) - (p[0] + p[4]);
    }
    CHECK(s / 3 == doctest::Approx(v * (1 + 2 * std::cos(2 * theta)) / 3).epsilon(1e-12));
  }
}

TEST_CASE("serial and parallel tallies are identical") {
  const ThetaPolicy policies[] = {ThetaPolicy::fixed(0.4), ThetaPolicy::dynamic(false), ThetaPolicy::dynamic(true)};
  for (Encoding enc : {Encoding::polarization, Encoding::vortex})
    for (const auto& pol : policies) {
      const kernels::TrialModel m = model_for(enc, pol);
      for (std::uint64_t trials : std::vector<std::uint64_t>{3, 1000, kernels::kTrialBlock, 3 * kernels::kTrialBlock + 17}) {
        const CountTable serial = kernels::tally_trials_serial(m, trials, 99);
        const CountTable parallel = kernels::tally_trials_parallel(m, trials, 99);
        CHECK(serial == parallel);
        std::uint64_t total = 0;
        for (const auto& t : serial) total += t.total();
        CHECK(total == trials);
      }
    }
}

TEST_CASE("parallel tallies do not depend on the thread count") {
  const kernels::TrialModel m = model_for(Encoding::vortex, ThetaPolicy::dynamic(false));
  const CountTable reference = kernels::tally_trials_serial(m, 5 * kernels::kTrialBlock + 3, 7);
  const int saved = omp_get_max_threads();
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    CHECK(kernels::tally_trials_parallel(m, 5 * kernels::kTrialBlock + 3, 7) == reference);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("different seeds give different tallies") {
  const kernels::TrialModel m = model_for(Encoding::vortex, ThetaPolicy::fixed(0.0));
  CHECK_FALSE(kernels::tally_trials_parallel(m, 100000, 1) == kernels::tally_trials_parallel(m, 100000, 2));
}

TEST_CASE("sphere search kernels agree") {
  const auto grid = kernels::sphere_grid(0.05);
  CHECK(grid.size() > 1000);
  for (const auto& g : grid) CHECK(g.is_unit(1e-12));
  std::mt19937_64 rng(52);
  std::vector<BlochVector> vecs;
  for (int i = 0; i < 50; ++i) vecs.push_back(vvs::testing::random_direction(rng) * vvs::testing::uniform(rng, 0, 2));
  const auto a = kernels::sphere_search_serial(vecs, grid);
  const auto b = kernels::sphere_search_parallel(vecs, grid);
  CHECK(a == b);
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    CHECK(a[i] <= vecs[i].norm() + 1e-12);
    CHECK(a[i] >= vecs[i].norm() * std::cos(0.05));
  }
}

TEST_CASE("bound grid kernels agree") {
  std::vector<double> xi;
  for (int i = 1; i <= 30; ++i) xi.push_back(i / 30.0);
  for (auto mode : {AnnounceConstraint::average, AnnounceConstraint::per_setting}) {
    const auto a = kernels::bound_grid_serial(platonic_set(4), xi, mode);
    const auto b = kernels::bound_grid_parallel(platonic_set(4), xi, mode);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].c == b[i].c);
      CHECK(format_witness(a[i].witness) == format_witness(b[i].witness));
    }
  }
}
