#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "dirac/channels.hpp"

using namespace dirac;

TEST_CASE("delta values") {
  CHECK(delta(PotentialParams(0, 0, 0), 1) == doctest::Approx(1.0));
  CHECK(delta(PotentialParams(1, 0, 0), 1) == doctest::Approx(0.0).epsilon(0));
  CHECK(std::abs(delta(PotentialParams(0.95, 0, 0), 1) - 0.0975) < 1e-15);
  CHECK(std::abs(delta(PotentialParams(0.95, 0, 0), -1) - 0.0975) < 1e-15);
  CHECK_THROWS_AS(delta(PotentialParams(0, 0, 0), 0), std::invalid_argument);
}

TEST_CASE("delta symmetry in mu and nu signs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double nu = u(rng), mu = u(rng), lam = u(rng);
    const int k = 1 + static_cast<int>(std::abs(u(rng)));
    CHECK(delta(PotentialParams(nu, mu, lam), k) ==
          delta(PotentialParams(nu, -mu, lam), k));
    CHECK(delta(PotentialParams(nu, mu, lam), k) ==
          delta(PotentialParams(-nu, mu, lam), k));
  }
}

TEST_CASE("classification regimes") {
  const auto free1 = classify_channel(PotentialParams(0, 0, 0), 1);
  CHECK(free1.regime == Regime::EssentiallySelfAdjoint);
  CHECK(free1.delta == doctest::Approx(1.0));
  CHECK(free1.gamma == doctest::Approx(1.0));

  const auto sub = classify_channel(PotentialParams(0.95, 0, 0), -1);
  CHECK(sub.regime == Regime::Subcritical);
  CHECK(sub.delta == doctest::Approx(0.0975).epsilon(1e-14));
  CHECK(sub.gamma == doctest::Approx(0.312249899919920).epsilon(1e-12));

  const auto sup = classify_channel(PotentialParams(1.2, 0, 0), 1);
  CHECK(sup.regime == Regime::Supercritical);
  CHECK(sup.delta == doctest::Approx(-0.44).epsilon(1e-14));
  CHECK(sup.gamma == doctest::Approx(std::sqrt(0.44)).epsilon(1e-14));

  const auto crit = classify_channel(PotentialParams(1.0, 0, 0), -1);
  CHECK(crit.regime == Regime::Critical);
  CHECK(crit.gamma == 0.0);
}

TEST_CASE("regime boundary tolerance flags") {
  // delta within 1e-13 of zero: classified critical and flagged
  const double nu0 = std::sqrt(1.0 + 1e-13);
  const auto c0 = classify_channel(PotentialParams(nu0, 0, 0), 1);
  CHECK(c0.regime == Regime::Critical);
  CHECK(c0.near_boundary);

  // delta within 1e-13 of 1/4: classified essentially self-adjoint, flagged
  const double nu1 = std::sqrt(0.75 - 1e-13);
  const auto c1 = classify_channel(PotentialParams(nu1, 0, 0), 1);
  CHECK(c1.regime == Regime::EssentiallySelfAdjoint);
  CHECK(c1.near_boundary);

  CHECK_FALSE(classify_channel(PotentialParams(0.95, 0, 0), 1).near_boundary);
}

TEST_CASE("deficiency dimension") {
  CHECK(deficiency_dimension(PotentialParams(0, 0, 0)) == 0);
  CHECK(deficiency_dimension(PotentialParams(0.95, 0, 0)) == 4);
  CHECK(deficiency_dimension(PotentialParams(0, 0, 0.9)) == 2);
}

TEST_CASE("index set ordering and content") {
  const IndexSet coulomb = enumerate_index_set(PotentialParams(0.95, 0, 0));
  REQUIRE(coulomb.d == 4);
  // (1/2,-1/2,1), (1/2,1/2,1), (1/2,-1/2,-1), (1/2,1/2,-1)
  CHECK(coulomb.entries[0] == Channel{1, -1, 1});
  CHECK(coulomb.entries[1] == Channel{1, 1, 1});
  CHECK(coulomb.entries[2] == Channel{1, -1, -1});
  CHECK(coulomb.entries[3] == Channel{1, 1, -1});

  CHECK(enumerate_index_set(PotentialParams(0, 0, 0)).entries.empty());

  const IndexSet anom = enumerate_index_set(PotentialParams(0, 0, 0.9));
  REQUIRE(anom.d == 2);
  CHECK(anom.entries[0] == Channel{1, -1, -1});
  CHECK(anom.entries[1] == Channel{1, 1, -1});
}

TEST_CASE("index set size always matches deficiency dimension") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    const PotentialParams p(u(rng), u(rng), u(rng));
    const IndexSet set = enumerate_index_set(p);
    CHECK(set.d == deficiency_dimension(p));
    CHECK(set.d == static_cast<int>(set.entries.size()));
    for (const Channel& c : set.entries) CHECK(channel_valid(c));
  }
}

TEST_CASE("k-scan bound agrees with a wide brute-force scan") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 300; ++i) {
    const PotentialParams p(u(rng), u(rng), u(rng));
    const int bound = k_scan_bound(p);
    for (int k = -60; k <= 60; ++k) {
      if (k == 0) continue;
      if (delta(p, k) < 0.25) CHECK(std::abs(k) <= bound);
    }
  }
}

TEST_CASE("sup-norm at most one gives nonnegative delta everywhere") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> sgn(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    // draw inside the ball |nu| + sqrt(mu^2 + lambda^2) <= 1
    const double total = u(rng);
    const double split = u(rng);
    const double nu = (sgn(rng) < 0 ? -1 : 1) * total * split;
    const double rad = total * (1.0 - split);
    const double phi = 3.14159265358979 * sgn(rng);
    const PotentialParams p(nu, rad * std::cos(phi), rad * std::sin(phi));
    REQUIRE(p.sup_norm <= 1.0 + 1e-12);
    for (int k = -5; k <= 5; ++k) {
      if (k == 0) continue;
      CHECK(delta(p, k) >= -1e-12);
    }
  }
}
