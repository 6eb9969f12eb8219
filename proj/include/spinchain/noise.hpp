#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <random>
#include <string>

// Classical Ornstein-Uhlenbeck bath trajectories. The update is the exact
// AR(1) discretization of dB = -(B - mu) dt / tau + sigma sqrt(2/tau) dW, so
// the stationary statistics are independent of dt.

namespace spinchain {

struct OUParams {
  double mu = 0.0;
  double sigma = 1.0;
  double tau = 1.0;
};

struct NoiseTrajectory {
  Eigen::VectorXd times;   // uniform grid starting at 0
  Eigen::MatrixXd values;  // 3 x n_samples, rows = (Bx, By, Bz)
  double dt = 0.0;
  std::uint64_t seed = 0;
  OUParams params;

  // Zero-order hold: the sample whose interval covers t.
  std::array<double, 3> at(double t) const;
};

// Three independent stationary paths; B(0) is drawn from the stationary
// distribution unless start_at_mean is set.
NoiseTrajectory ou_trajectory(const OUParams& p, double duration, double dt,
                              std::uint64_t seed, bool start_at_mean = false);

// Deterministic split of a base seed into per-(realization, stream) seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t realization,
                          std::uint64_t stream = 0);

// Portable standard-normal draws: explicit Box-Muller over mt19937_64 bits,
// so the stream does not depend on the standard library's distribution
// implementation.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

void dump_csv(const NoiseTrajectory& traj, const std::string& path);

}  // namespace spinchain
