#include "cvtele/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace cvtele {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t substream)
    : seed_(seed),
      substream_(substream),
      key_(splitmix64(seed + (substream + 1) * 0x9E3779B97F4A7C15ULL)),
      engine_(key_) {}

double RngStream::uniform() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

std::pair<double, double> RngStream::normal_pair() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

std::complex<double> sample_alpha(double lambda, RngStream& rng) {
  if (!(lambda > 0)) throw Error(Errc::NonPositiveLambda, "sampling requires lambda > 0");
  const double sigma = 1.0 / std::sqrt(2.0 * lambda);
  const auto [x, y] = rng.normal_pair();
  return {sigma * x, sigma * y};
}

double coherent_fidelity(std::complex<double> alpha, const SingleModeGaussian<double>& out) {
  if (!is_physical(out)) throw Error(Errc::UnphysicalState, "output state violates det V >= 1");
  const Matrix2<double> m = Matrix2<double>::Identity() + out.V;
  Vector2<double> delta = out.d;
  delta(0) -= std::numbers::sqrt2 * alpha.real();
  delta(1) -= std::numbers::sqrt2 * alpha.imag();
  const double quad = delta.dot(m.inverse() * delta);
  return 2.0 / std::sqrt(m.determinant()) * std::exp(-quad);
}

namespace {

// Running mean / M2 with Chan's pairwise merge.
struct Moments {
  std::int64_t n = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const std::int64_t total = n + o.n;
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / static_cast<double>(total);
    n = total;
  }

  double std_error() const {
    if (n < 2) return 0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

// Runs fn(stream, count) for every block; block k always uses master.split(k),
// whichever thread executes it.
template <typename Result, typename Fn>
std::vector<Result> run_blocks(std::int64_t n, const RngStream& master, unsigned workers, Fn fn) {
  const std::int64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<Result> results(static_cast<std::size_t>(blocks));
  auto work = [&](unsigned worker, unsigned stride) {
    for (std::int64_t k = worker; k < blocks; k += stride) {
      RngStream stream = master.split(static_cast<std::uint64_t>(k));
      const std::int64_t count = std::min(kBlockSize, n - k * kBlockSize);
      results[static_cast<std::size_t>(k)] = fn(stream, count);
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace

McEstimate mc_channel_fidelity(double tau, double y, double lambda, std::int64_t n, const RngStream& rng,
                               unsigned workers) {
  const PhaseInsensitiveChannel<double> ch(tau, y);
  if (!ch.is_physical()) throw Error(Errc::UnphysicalChannel, "channel violates y >= |1 - tau|");
  if (!(lambda > 0)) throw Error(Errc::NonPositiveLambda, "sampling requires lambda > 0");
  if (n < 100) throw Error(Errc::InvalidArgument, "at least 100 samples are required");

  auto blocks = run_blocks<Moments>(n, rng, workers, [&](RngStream& stream, std::int64_t count) {
    Moments m;
    for (std::int64_t i = 0; i < count; ++i) {
      const auto alpha = sample_alpha(lambda, stream);
      m.add(coherent_fidelity(alpha, apply_channel(ch, SingleModeGaussian<double>::coherent(alpha))));
    }
    return m;
  });
  Moments total;
  for (const auto& b : blocks) total.merge(b);
  return {total.mean, total.std_error(), total.n, rng.seed()};
}

BkTeleportEstimate mc_bk_teleport(const ResourceSpec<double>& spec, std::complex<double> alpha, std::int64_t n,
                                  const RngStream& rng, unsigned workers) {
  if (n < 1000) throw Error(Errc::InvalidArgument, "at least 1000 runs are required");
  const auto input = SingleModeGaussian<double>::coherent(alpha);
  const auto out = bk_output(spec.state(), spec.g, input);

  // Excess noise over the coherent output's own vacuum covariance. V is twice
  // the quadrature covariance, so displacements d carry half of it.
  const Matrix2<double> excess = (out.V - Matrix2<double>::Identity()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix2<double>> es(excess);
  Vector2<double> ev = es.eigenvalues();
  for (int i = 0; i < 2; ++i) {
    if (ev(i) < -kTolerance) throw Error(Errc::InvalidUnravelling, "excess-noise covariance is not positive semidefinite");
    ev(i) = std::max(ev(i), 0.0);
  }
  const Matrix2<double> factor = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  const Vector2<double> centre = out.d;

  struct Sample {
    double q, p, fidelity;
  };
  auto blocks = run_blocks<std::vector<Sample>>(n, rng, workers, [&](RngStream& stream, std::int64_t count) {
    std::vector<Sample> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
      const auto [z1, z2] = stream.normal_pair();
      const Vector2<double> d = centre + factor * Vector2<double>(z1, z2);
      const double dist2 = (d - input.d).squaredNorm();
      samples.push_back({d(0), d(1), std::exp(-dist2 / 2.0)});
    }
    return samples;
  });

  BkTeleportEstimate est;
  Moments fid, mq, mp;
  for (const auto& block : blocks) {
    for (const auto& s : block) {
      fid.add(s.fidelity);
      mq.add(s.q);
      mp.add(s.p);
    }
  }
  est.fidelity = {fid.mean, fid.std_error(), fid.n, rng.seed()};
  est.mean_displacement << mq.mean, mp.mean;
  est.mean_displacement_se << mq.std_error(), mp.std_error();

  Moments cqq, cqp, cpp;
  for (const auto& block : blocks) {
    for (const auto& s : block) {
      const double dq = s.q - mq.mean;
      const double dp = s.p - mp.mean;
      cqq.add(dq * dq);
      cqp.add(dq * dp);
      cpp.add(dp * dp);
    }
  }
  const double k = 2.0 * static_cast<double>(n) / static_cast<double>(n - 1);
  est.covariance << 1.0 + k * cqq.mean, k * cqp.mean, k * cqp.mean, 1.0 + k * cpp.mean;
  est.covariance_se << 2.0 * cqq.std_error(), 2.0 * cqp.std_error(), 2.0 * cqp.std_error(), 2.0 * cpp.std_error();
  return est;
}

}  // namespace cvtele
