#pragma once
#include <vector>

namespace dirac {

// Absolute tolerance used when comparing delta against the regime
// boundaries 0 and 1/4. Inputs inside the band are classified at the
// boundary and flagged.
inline constexpr double kRegimeTol = 1e-12;

// Coupling constants of the matrix potential (nu I4 + mu beta
// - i lambda alpha.x/|x| beta)/|x| plus the mass m of the free operator.
struct PotentialParams {
  double nu = 0.0;      // electric coupling
  double mu = 0.0;      // scalar coupling
  double lambda = 0.0;  // anomalous-magnetic coupling
  double mass = 1.0;    // m, natural units

  // |nu| + sqrt(mu^2 + lambda^2) = sup_x |x||V(x)|, cached at construction.
  double sup_norm = 0.0;

  PotentialParams() = default;
  PotentialParams(double nu_, double mu_, double lambda_, double mass_ = 1.0);
};

// Partial-wave channel label. Half-integers j, m_j are stored doubled so the
// ordering and multiplicity logic stays exact integer arithmetic.
struct Channel {
  int twice_j;   // 2j, positive odd
  int twice_mj;  // 2m_j, odd, |twice_mj| <= twice_j
  int k;         // spin-orbit number, k = +-(j+1/2), nonzero

  friend bool operator==(const Channel&, const Channel&) = default;
};

bool channel_valid(const Channel& c);

enum class Regime {
  EssentiallySelfAdjoint,  // delta >= 1/4
  Subcritical,             // 0 < delta < 1/4
  Critical,                // delta = 0
  Supercritical            // delta < 0
};

const char* regime_name(Regime r);

struct ChannelClassification {
  int k = 0;
  double delta = 0.0;  // (k+lambda)^2 + mu^2 - nu^2
  double gamma = 0.0;  // sqrt(|delta|)
  Regime regime = Regime::EssentiallySelfAdjoint;
  // set when |delta| or |delta - 1/4| falls inside the classification band
  bool near_boundary = false;
};

// The ordered set I of channels with delta_k < 1/4; d = |I|.
struct IndexSet {
  int d = 0;
  std::vector<Channel> entries;
};

double delta(const PotentialParams& p, int k);
ChannelClassification classify_channel(const PotentialParams& p, int k);

// Largest |k| that can satisfy delta_k < 1/4; every qualifying k obeys
// |k| <= k_scan_bound. Asserted against a wide brute-force scan in tests.
int k_scan_bound(const PotentialParams& p);

// Sum of 2|k| over channels with delta_k < 1/4.
int deficiency_dimension(const PotentialParams& p);

// Entries ordered by ascending j, then k = +(j+1/2) before k = -(j+1/2),
// then m_j ascending.
IndexSet enumerate_index_set(const PotentialParams& p);

}  // namespace dirac
