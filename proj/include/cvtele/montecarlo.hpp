#pragma once

// Seedable Monte Carlo checks of the closed-form fidelities.
//
// Sampling contract (kept stable so that golden seeds reproduce):
//   * RngStream(s, k) is std::mt19937_64 seeded with the key
//     splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15);
//   * split(j) of a stream with key K is RngStream(K, j), so nested splits
//     never collide with their parent's siblings;
//   * a uniform variate is ((x >> 11) + 1) * 2^-53, in (0, 1];
//   * normals come in pairs from the Box-Muller transform
//     r = sqrt(-2 ln u1), (r cos 2 pi u2, r sin 2 pi u2).
// Estimators draw samples in fixed blocks of kBlockSize, block k from
// rng.split(k), and merge block statistics in block order. Results therefore do
// not depend on the number of worker threads.

#include <complex>
#include <cstdint>
#include <random>
#include <utility>

#include "cvtele/teleport.hpp"

namespace cvtele {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

class RngStream {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/splitmix64";

  explicit RngStream(std::uint64_t seed, std::uint64_t substream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t substream() const { return substream_; }

  /// Independent child stream derived deterministically from this stream's key.
  RngStream split(std::uint64_t index) const { return RngStream(key_, index); }

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  std::pair<double, double> normal_pair();

 private:
  std::uint64_t seed_;
  std::uint64_t substream_;
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

inline constexpr std::int64_t kBlockSize = 4096;

struct McEstimate {
  double mean = 0;
  double std_error = 0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

/// Draws alpha ~ (lambda/pi) exp(-lambda |alpha|^2).
std::complex<double> sample_alpha(double lambda, RngStream& rng);

/// <alpha| rho |alpha> for a Gaussian rho with moments `out`:
/// 2 / sqrt(det(1 + V)) exp(-delta^T (1 + V)^-1 delta), delta = d - sqrt2 (Re, Im) alpha.
double coherent_fidelity(std::complex<double> alpha, const SingleModeGaussian<double>& out);

/// Monte Carlo estimate of the alphabet-averaged fidelity of channel (tau, y).
McEstimate mc_channel_fidelity(double tau, double y, double lambda, std::int64_t n, const RngStream& rng,
                               unsigned workers = 1);

/// Run-level BK teleportation of a fixed coherent input.
struct BkTeleportEstimate {
  McEstimate fidelity;
  Vector2<double> mean_displacement = Vector2<double>::Zero();
  Vector2<double> mean_displacement_se = Vector2<double>::Zero();
  /// Empirical output covariance: vacuum covariance + twice the sample
  /// covariance of the per-run displacements.
  Matrix2<double> covariance = Matrix2<double>::Zero();
  Matrix2<double> covariance_se = Matrix2<double>::Zero();
};

/// Unravels the BK protocol: each run yields a coherent state displaced by
/// g d_in + xi, xi ~ N(0, (V_out - 1) / 2), where V_out is the moment-map
/// output for a coherent input. The mixture reproduces bk_output exactly.
BkTeleportEstimate mc_bk_teleport(const ResourceSpec<double>& spec, std::complex<double> alpha, std::int64_t n,
                                  const RngStream& rng, unsigned workers = 1);

}  // namespace cvtele
