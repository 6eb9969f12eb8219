#pragma once

namespace spinchain {

// Shared numerical tolerances. Tests reference these instead of re-typing
// magic numbers.
inline constexpr double kNormTol = 1e-10;  // state normalization
inline constexpr double kHermTol = 1e-12;  // Hermiticity of assembled operators
inline constexpr double kPsdTol  = 1e-10;  // density-matrix positivity slack

// Dense 2^N path is capped here by default; larger chains go through the
// free-fermion route.
inline constexpr int kDefaultMaxDenseSites = 12;

}  // namespace spinchain
