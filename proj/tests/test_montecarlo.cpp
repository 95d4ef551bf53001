#include <doctest.h>

#include <cmath>
#include <vector>

#include "cvtele/fidelity.hpp"
#include "cvtele/montecarlo.hpp"

using namespace cvtele;
using doctest::Approx;

TEST_CASE("splitmix64 reference values") {
  // Reference generator seeded with 0: outputs are splitmix64 of 0, gamma, 2 gamma, ...
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("rng determinism and substreams") {
  RngStream a(42), b(42), c(43);
  std::vector<double> xa, xb;
  for (int i = 0; i < 10; ++i) {
    xa.push_back(a.uniform());
    xb.push_back(b.uniform());
  }
  CHECK(xa == xb);
  CHECK(c.uniform() != xa[0]);
  RngStream s1 = RngStream(42).split(1), s2 = RngStream(42).split(2);
  CHECK(s1.next_u64() != s2.next_u64());
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    CHECK(u > 0);
    CHECK(u <= 1);
  }
}

TEST_CASE("sample_alpha moments") {
  auto moments = [](double lambda, std::uint64_t seed) {
    RngStream rng(seed);
    const int n = 1000000;
    double sum_abs2 = 0, sum_abs4 = 0, sum_re = 0, sum_re2 = 0;
    for (int i = 0; i < n; ++i) {
      const auto a = sample_alpha(lambda, rng);
      const double m = std::norm(a);
      sum_abs2 += m;
      sum_abs4 += m * m;
      sum_re += a.real();
      sum_re2 += a.real() * a.real();
    }
    struct M { double abs2, abs2_se, re, re_se; };
    const double mean2 = sum_abs2 / n;
    const double mean_re = sum_re / n;
    return M{mean2, std::sqrt((sum_abs4 / n - mean2 * mean2) / n), mean_re,
             std::sqrt((sum_re2 / n - mean_re * mean_re) / n)};
  };
  const auto m1 = moments(0.2, 3);
  CHECK(std::abs(m1.abs2 - 5.0) <= 5 * m1.abs2_se);
  const auto m2 = moments(2.0, 4);
  CHECK(std::abs(m2.re) <= 5 * m2.re_se);
  RngStream rng(1);
  CHECK_THROWS_AS(sample_alpha(0.0, rng), Error);
}

TEST_CASE("coherent_fidelity conventions") {
  const std::complex<double> alpha(0.8, -0.3), beta(-0.1, 0.5);
  CHECK(coherent_fidelity(alpha, SingleModeGaussian<double>::coherent(alpha)) == Approx(1.0).epsilon(1e-14));
  CHECK(coherent_fidelity(alpha, SingleModeGaussian<double>::coherent(beta)) ==
        Approx(std::exp(-std::norm(alpha - beta))).epsilon(1e-14));
  const double y = 0.6;
  const auto out = apply_channel(PhaseInsensitiveChannel<double>(1, y), SingleModeGaussian<double>::coherent(alpha));
  CHECK(coherent_fidelity(alpha, out) == Approx(2 / (2 + y)).epsilon(1e-14));
  CHECK_THROWS_AS(coherent_fidelity(alpha, SingleModeGaussian<double>::thermal(0.5)), Error);
}

TEST_CASE("mc_channel_fidelity agrees with the closed form") {
  auto est = mc_channel_fidelity(1, 0, 0.2, 10000, RngStream(1));
  CHECK(est.mean == 1.0);
  CHECK(est.n == 10000);

  struct Case { double tau, y; };
  for (auto [tau, y] : {Case{1, 0.73576}, Case{0.73423, 0.49221}, Case{0.3, 0.9}, Case{1.7, 1.2}}) {
    est = mc_channel_fidelity(tau, y, 0.2, 100000, RngStream(7));
    CHECK(std::abs(est.mean - avg_fidelity(tau, y, 0.2)) <= 4 * est.std_error + 1e-12);
    CHECK(est.std_error < 1e-3);
  }
  CHECK_THROWS_AS(mc_channel_fidelity(1, 0, 0.2, 99, RngStream(1)), Error);
  CHECK_THROWS_AS(mc_channel_fidelity(0.5, 0.1, 0.2, 1000, RngStream(1)), Error);
}

TEST_CASE("estimates are bit-identical across seeds reuse and worker counts") {
  const auto a = mc_channel_fidelity(0.6, 0.5, 0.3, 50000, RngStream(99), 1);
  const auto b = mc_channel_fidelity(0.6, 0.5, 0.3, 50000, RngStream(99), 1);
  const auto c = mc_channel_fidelity(0.6, 0.5, 0.3, 50000, RngStream(99), 4);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.mean == c.mean);
  CHECK(a.std_error == c.std_error);
  CHECK(a.seed == 99);
}

TEST_CASE("standard error shrinks as 1/sqrt(n)") {
  std::vector<double> lx, ly;
  for (int k = 0; k < 5; ++k) {
    const std::int64_t n = 20000LL << k;
    const auto est = mc_channel_fidelity(0.5, 0.8, 0.2, n, RngStream(5));
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(est.std_error));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) mx += lx[i] / lx.size(), my += ly[i] / ly.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
  CHECK(sxy / sxx == Approx(-0.5).epsilon(0.1));
}

TEST_CASE("BK unravelling reproduces the moment map") {
  const auto check = [](const ResourceSpec<double>& spec, std::complex<double> alpha, std::uint64_t seed) {
    const auto in = SingleModeGaussian<double>::coherent(alpha);
    const auto exact = bk_output(spec.state(), spec.g, in);
    const auto est = mc_bk_teleport(spec, alpha, 100000, RngStream(seed));
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(est.mean_displacement(i) - exact.d(i)) <= 4 * est.mean_displacement_se(i) + 1e-12);
      for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(est.covariance(i, j) - exact.V(i, j)) <= 4 * est.covariance_se(i, j) + 1e-12);
      }
    }
    CHECK(std::abs(est.fidelity.mean - coherent_fidelity(alpha, exact)) <= 4 * est.fidelity.std_error + 1e-12);
  };
  check(ResourceSpec<double>::custom(std::cosh(1.0), std::cosh(1.0), std::sinh(1.0), 1.0), {1.0, 0.0}, 11);
  check(optimal_resource_fixed_sba(1.0, 0.4), {0.0, 2.0}, 12);
  check(optimal_resource_fixed_sab(1.0, 0.6), {-0.5, 0.3}, 13);
  check(optimal_resource_fixed_sba(0.8, 1.0), {1.5, -1.0}, 14);

  const auto tmsv_fid = mc_bk_teleport(ResourceSpec<double>::custom(std::cosh(1.0), std::cosh(1.0), std::sinh(1.0), 1.0),
                                       {1.0, 0.0}, 100000, RngStream(15));
  CHECK(std::abs(tmsv_fid.fidelity.mean - 2 / (2 + 2 * std::exp(-1.0))) <= 4 * tmsv_fid.fidelity.std_error + 1e-12);

  const auto epr = ResourceSpec<double>::custom(std::cosh(20.0), std::cosh(20.0), std::sinh(20.0), 1.0);
  const auto e = mc_bk_teleport(epr, {0.3, 0.3}, 1000, RngStream(16));
  CHECK(e.fidelity.mean == Approx(1.0).epsilon(1e-6));
  CHECK((e.covariance - Matrix2<double>::Identity()).cwiseAbs().maxCoeff() <= 1e-6);

  CHECK_THROWS_AS(mc_bk_teleport(epr, {0, 0}, 999, RngStream(1)), Error);
}

TEST_CASE("BK worker count does not change the estimate") {
  const auto spec = optimal_resource_fixed_sba(1.0, 0.4);
  const auto a = mc_bk_teleport(spec, {0.2, 0.1}, 20000, RngStream(8), 1);
  const auto b = mc_bk_teleport(spec, {0.2, 0.1}, 20000, RngStream(8), 3);
  CHECK(a.fidelity.mean == b.fidelity.mean);
  CHECK(a.covariance == b.covariance);
}

TEST_CASE("nested sampling links the run-level and channel pictures") {
  const auto spec = optimal_resource_fixed_sba(0.9, 0.5);
  const auto ch = spec.channel();
  const double lambda = 0.4;
  RngStream outer(21);
  const int n_alpha = 10000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n_alpha; ++i) {
    const auto alpha = sample_alpha(lambda, outer);
    const double f = mc_bk_teleport(spec, alpha, 1000, outer.split(1000 + i)).fidelity.mean;
    sum += f;
    sum2 += f * f;
  }
  const double mean = sum / n_alpha;
  const double se = std::sqrt((sum2 / n_alpha - mean * mean) / n_alpha);
  CHECK(std::abs(mean - avg_fidelity(ch.tau(), ch.y(), lambda)) <= 4 * se);
}
