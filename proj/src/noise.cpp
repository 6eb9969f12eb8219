#include "spinchain/noise.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace spinchain {

std::array<double, 3> NoiseTrajectory::at(double t) const {
  Eigen::Index k = static_cast<Eigen::Index>(std::floor(t / dt + 1e-12));
  if (k < 0) k = 0;
  if (k >= values.cols()) k = values.cols() - 1;
  return {values(0, k), values(1, k), values(2, k)};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t realization,
                          std::uint64_t stream) {
  // splitmix64 finalizer over the packed inputs
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (realization + 1) +
                    0xbf58476d1ce4e5b9ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double NormalSampler::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1], u2 in [0, 1)
  const double u1 = ((engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = (engine_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

NoiseTrajectory ou_trajectory(const OUParams& p, double duration, double dt,
                              std::uint64_t seed, bool start_at_mean) {
  if (p.sigma < 0.0 || p.tau <= 0.0)
    throw std::invalid_argument("ou_trajectory: need sigma >= 0 and tau > 0");
  if (duration <= 0.0 || dt <= 0.0 || dt > duration)
    throw std::invalid_argument("ou_trajectory: need 0 < dt <= duration");

  const Eigen::Index n = static_cast<Eigen::Index>(std::ceil(duration / dt)) + 1;
  NoiseTrajectory traj;
  traj.dt = dt;
  traj.seed = seed;
  traj.params = p;
  traj.times = Eigen::VectorXd::LinSpaced(n, 0.0, (n - 1) * dt);
  traj.values.resize(3, n);

  const double decay = std::exp(-dt / p.tau);
  const double kick = p.sigma * std::sqrt(1.0 - decay * decay);
  for (int comp = 0; comp < 3; ++comp) {
    NormalSampler rng(derive_seed(seed, 0, static_cast<std::uint64_t>(comp)));
    double b = start_at_mean ? p.mu : p.mu + p.sigma * rng.next();
    traj.values(comp, 0) = b;
    for (Eigen::Index k = 1; k < n; ++k) {
      b = p.mu + (b - p.mu) * decay + kick * rng.next();
      traj.values(comp, k) = b;
    }
  }
  return traj;
}

void dump_csv(const NoiseTrajectory& traj, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("dump_csv: cannot open " + path);
  std::fprintf(f, "t,Bx,By,Bz\n");
  for (Eigen::Index k = 0; k < traj.times.size(); ++k)
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", traj.times[k], traj.values(0, k),
                 traj.values(1, k), traj.values(2, k));
  std::fclose(f);
}

}  // namespace spinchain
