#include "dirac/channels.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace dirac {

PotentialParams::PotentialParams(double nu_, double mu_, double lambda_,
                                 double mass_)
    : nu(nu_), mu(mu_), lambda(lambda_), mass(mass_) {
  if (!std::isfinite(nu) || !std::isfinite(mu) || !std::isfinite(lambda) ||
      !std::isfinite(mass)) {
    throw std::invalid_argument("PotentialParams: fields must be finite");
  }
  sup_norm = std::abs(nu) + std::hypot(mu, lambda);
}

bool channel_valid(const Channel& c) {
  if (c.twice_j <= 0 || c.twice_j % 2 == 0) return false;
  if (std::abs(c.twice_mj) > c.twice_j || std::abs(c.twice_mj) % 2 != 1)
    return false;
  if (c.k == 0) return false;
  return std::abs(c.k) == (c.twice_j + 1) / 2;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::EssentiallySelfAdjoint: return "essentially_self_adjoint";
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
  }
  return "unknown";
}

double delta(const PotentialParams& p, int k) {
  if (k == 0) throw std::invalid_argument("delta: k must be nonzero");
  const double kl = static_cast<double>(k) + p.lambda;
  return kl * kl + p.mu * p.mu - p.nu * p.nu;
}

ChannelClassification classify_channel(const PotentialParams& p, int k) {
  ChannelClassification c;
  c.k = k;
  c.delta = delta(p, k);
  c.gamma = std::sqrt(std::abs(c.delta));
  c.near_boundary = std::abs(c.delta) <= kRegimeTol ||
                    std::abs(c.delta - 0.25) <= kRegimeTol;
  if (std::abs(c.delta) <= kRegimeTol) {
    c.regime = Regime::Critical;
    c.gamma = 0.0;
  } else if (c.delta >= 0.25 - kRegimeTol) {
    c.regime = Regime::EssentiallySelfAdjoint;
  } else if (c.delta > 0.0) {
    c.regime = Regime::Subcritical;
  } else {
    c.regime = Regime::Supercritical;
  }
  return c;
}

int k_scan_bound(const PotentialParams& p) {
  // delta_k < 1/4 forces |k+lambda| < 1/2 + |nu|, hence
  // |k| < 1/2 + |nu| + |lambda|.
  return static_cast<int>(
      std::ceil(0.5 + std::abs(p.nu) + std::abs(p.lambda)));
}

int deficiency_dimension(const PotentialParams& p) {
  const int kmax = k_scan_bound(p);
  int d = 0;
  for (int k = -kmax; k <= kmax; ++k) {
    if (k == 0) continue;
    if (delta(p, k) < 0.25 - kRegimeTol) d += 2 * std::abs(k);
  }
  return d;
}

IndexSet enumerate_index_set(const PotentialParams& p) {
  IndexSet set;
  const int kmax = k_scan_bound(p);
  // twice_j runs over 1, 3, 5, ...; |k| = (twice_j+1)/2 <= kmax.
  for (int twice_j = 1; (twice_j + 1) / 2 <= kmax; twice_j += 2) {
    const int abs_k = (twice_j + 1) / 2;
    for (int k : {abs_k, -abs_k}) {
      if (!(delta(p, k) < 0.25 - kRegimeTol)) continue;
      for (int twice_mj = -twice_j; twice_mj <= twice_j; twice_mj += 2) {
        set.entries.push_back(Channel{twice_j, twice_mj, k});
      }
    }
  }
  set.d = static_cast<int>(set.entries.size());
  return set;
}

}  // namespace dirac
