#include <doctest.h>

#include "support.hpp"
#include "vvs/steering.hpp"

using namespace vvs;

namespace {

Receiver polarization_receiver() {
  Receiver r;
  r.encoding = Encoding::polarization;
  return r;
}

CountTable uniform_table(std::size_t n, std::uint64_t agree, std::uint64_t disagree, std::uint64_t nulls) {
  CountTable t(n);
  for (auto& s : t) {
    s.add(1, -1, agree);
    s.add(1, 1, disagree);
    s.add(-1, 0, nulls);
  }
  return t;
}

}  // namespace

TEST_CASE("platonic sets") {
  const MeasurementSet two = platonic_set(2);
  CHECK(two.size() == 2);
  CHECK(std::abs(two[0].dot(two[1])) < 1e-15);

  const MeasurementSet three = platonic_set(3);
  CHECK(three.size() == 3);
  CHECK(three[0].z == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(three[i].is_unit());
    for (std::size_t j = i + 1; j < 3; ++j) CHECK(std::abs(three[i].dot(three[j])) < 1e-15);
  }
  // Together the three directions are the coordinate axes.
  double sx = 0, sy = 0, sz = 0;
  for (const auto& u : three.directions()) {
    sx += std::abs(u.x);
    sy += std::abs(u.y);
    sz += std::abs(u.z);
  }
  CHECK(sx == doctest::Approx(1.0));
  CHECK(sy == doctest::Approx(1.0));
  CHECK(sz == doctest::Approx(1.0));

  const MeasurementSet four = platonic_set(4);
  CHECK(four[0].z == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) CHECK(four[i].dot(four[j]) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));

  const MeasurementSet six = platonic_set(6);
  CHECK(six[0].z == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j)
      CHECK(std::abs(six[i].dot(six[j])) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));

  for (int n : {0, 1, 5, 7, 8}) CHECK_THROWS_AS(platonic_set(n), DomainError);
}

TEST_CASE("measurement set validation") {
  CHECK_THROWS_AS(MeasurementSet({{0, 0, 1}}), DomainError);
  CHECK_THROWS_AS(MeasurementSet({{0, 0, 1}, {0, 0, 1}}), DomainError);
  CHECK_THROWS_AS(MeasurementSet({{0, 0, 1}, {0, 0, -1}}), DomainError);
  CHECK_THROWS_AS(MeasurementSet({{0, 0, 1}, {0, 1.1, 0}}), DomainError);
  CHECK_NOTHROW(MeasurementSet({{0, 0, 1}, {0, 1, 0}}));
}

TEST_CASE("exact steering parameter of the singlet is one in both encodings") {
  const DensityMatrix pol = DensityMatrix::from_pure(polarization_singlet());
  const DensityMatrix vortex = DensityMatrix::from_pure(vortex_singlet());
  for (int n : {2, 3, 4, 6}) {
    const MeasurementSet set = platonic_set(n);
    const SteeringEstimate a = steering_parameter_exact(pol, set, polarization_receiver(), 0.0);
    const SteeringEstimate b = steering_parameter_exact(vortex, set, Receiver{}, 0.0);
    CHECK(a.s_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.s_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.announce_fraction == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.announce_fraction == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.per_setting_correlations.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("exact steering parameter of Werner states") {
  for (double v : {0.0, 0.5, 0.9693}) {
    const DensityMatrix w = werner_state(v);
    const SteeringEstimate est = steering_parameter_exact(w, platonic_set(3), polarization_receiver(), 0.0);
    CHECK(est.s_value == doctest::Approx(v).epsilon(1e-12));
    for (double c : est.per_setting_correlations) CHECK(c == doctest::Approx(v).epsilon(1e-12));
    const SteeringEstimate ev = steering_parameter_exact(encode_bob_photon(w), platonic_set(4), Receiver{}, 1.1);
    CHECK(ev.s_value == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("polarization encoding follows (1 + 2 cos 2 theta)/3") {
  const DensityMatrix pol = DensityMatrix::from_pure(polarization_singlet());
  for (int step = 0; step <= 24; ++step) {
    const double theta = step * M_PI / 24.0;
    const double expected = (1.0 + 2.0 * std::cos(2.0 * theta)) / 3.0;
    const SteeringEstimate est = steering_parameter_exact(pol, platonic_set(3), polarization_receiver(), theta);
    CHECK(est.s_value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("vortex encoding is rotation invariant for every encoded state") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    const DensityMatrix rho = encode_bob_photon(vvs::testing::random_density(rng, 4));
    const MeasurementSet set = platonic_set(trial % 2 == 0 ? 3 : 4);
    const SteeringEstimate ref = steering_parameter_exact(rho, set, Receiver{}, 0.0);
    for (int step = 1; step < 16; ++step) {
      const double theta = vvs::testing::uniform(rng, 0.0, 2 * M_PI);
      const SteeringEstimate est = steering_parameter_exact(rho, set, Receiver{}, theta);
      CHECK(std::abs(est.s_value - ref.s_value) < 1e-9);
      for (std::size_t k = 0; k < set.size(); ++k)
        CHECK(std::abs(est.per_setting_correlations[k] - ref.per_setting_correlations[k]) < 1e-9);
    }
  }
}

TEST_CASE("steering parameter is linear in the state and bounded") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix a = vvs::testing::random_density(rng, 4);
    const DensityMatrix b = vvs::testing::random_density(rng, 4);
    const double alpha = vvs::testing::uniform(rng, 0.0, 1.0);
    const double theta = vvs::testing::uniform(rng, 0.0, M_PI);
    const MeasurementSet set = platonic_set(3);
    for (const Receiver& rcv : {polarization_receiver(), Receiver{}}) {
      auto s = [&](const DensityMatrix& rho) {
        const DensityMatrix state = rcv.encoding == Encoding::vortex ? encode_bob_photon(rho) : rho;
        return steering_parameter_exact(state, set, rcv, theta).s_value;
      };
      const double mixed = s(DensityMatrix::mixture(alpha, a, b));
      CHECK(mixed == doctest::Approx(alpha * s(a) + (1 - alpha) * s(b)).epsilon(1e-10));
      CHECK(std::abs(mixed) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("exact estimate rejects mismatched dimensions") {
  CHECK_THROWS_AS(steering_parameter_exact(DensityMatrix::maximally_mixed(4), platonic_set(3), Receiver{}, 0.0),
                  DimensionError);
  CHECK_THROWS_AS(steering_parameter_exact(DensityMatrix::maximally_mixed(20), platonic_set(3),
                                           polarization_receiver(), 0.0),
                  DimensionError);
}

TEST_CASE("count tallies") {
  SettingTally t;
  t.add(1, -1, 5);
  t.add(-1, 1, 2);
  t.add(1, 1, 3);
  t.add(-1, 0, 4);
  CHECK(t.total() == 14);
  CHECK(t.announced() == 10);
  CHECK(t.agree() == 7);
  CHECK(t.disagree() == 3);
  SettingTally u = t;
  u += t;
  CHECK(u.total() == 28);
  CHECK_THROWS_AS(t.add(0, 1), DomainError);
  CHECK_THROWS_AS(t.add(1, 2), DomainError);
}

TEST_CASE("empirical steering parameter examples") {
  const SteeringEstimate all = steering_parameter_counts(uniform_table(3, 1000, 0, 0));
  CHECK(all.s_value == 1.0);
  CHECK(all.announce_fraction == 1.0);
  CHECK(all.std_err == 0.0);

  const SteeringEstimate half = steering_parameter_counts(uniform_table(3, 500, 500, 0));
  CHECK(half.s_value == 0.0);

  const SteeringEstimate lossy = steering_parameter_counts(uniform_table(4, 300, 100, 600));
  CHECK(lossy.announce_fraction == doctest::Approx(0.4));
  CHECK(lossy.s_value == doctest::Approx(0.5));
  CHECK(lossy.std_err == doctest::Approx(std::sqrt(4 * (1 - 0.25) / 400.0) / 4.0));

  CountTable empty = uniform_table(3, 10, 10, 0);
  empty[1] = SettingTally{};
  empty[1].add(1, 0, 7);
  CHECK_THROWS_AS(steering_parameter_counts(empty), DomainError);
}

TEST_CASE("empirical estimate invariants on random tallies") {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<std::uint64_t> draw(0, 200);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    CountTable t(n);
    for (auto& s : t) {
      for (int a : {1, -1})
        for (int b : {1, -1, 0}) s.add(a, b, draw(rng));
      s.add(1, 1, 1);
    }
    const SteeringEstimate est = steering_parameter_counts(t);
    double mean = 0.0, var = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double m = static_cast<double>(t[k].announced());
      const double c = (static_cast<double>(t[k].agree()) - static_cast<double>(t[k].disagree())) / m;
      CHECK(est.per_setting_correlations[k] == doctest::Approx(c).epsilon(1e-14));
      CHECK(std::abs(c) <= 1.0);
      mean += c / static_cast<double>(n);
      var += (1 - c * c) / m;
    }
    CHECK(std::abs(est.s_value - mean) < 1e-12);
    CHECK(std::abs(est.s_value) <= 1.0);
    CHECK(est.std_err == doctest::Approx(std::sqrt(var) / static_cast<double>(n)).epsilon(1e-12));
  }
}
