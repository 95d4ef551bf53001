#pragma once

// Braunstein-Kimble teleportation as a moment map, the channel it induces, the
// steering-limited accessible region, and the two minimal-energy resource
// families that reach its boundary.

#include <cmath>
#include <limits>
#include <utility>

#include "cvtele/channels.hpp"
#include "cvtele/gaussian.hpp"

namespace cvtele {

/// Available steerabilities of a resource; +inf imposes no constraint.
template <typename Scalar = double>
struct SteeringBudget {
  Scalar s_ba = std::numeric_limits<Scalar>::infinity();
  Scalar s_ab = std::numeric_limits<Scalar>::infinity();

  static SteeringBudget unlimited() { return {}; }
};

namespace detail {

template <typename Scalar>
Matrix2<Scalar> z_matrix() {
  Matrix2<Scalar> z;
  z << Scalar(1), Scalar(0), Scalar(0), Scalar(-1);
  return z;
}

// Bona fide condition with a tolerance that covers the rounding of V itself.
// Uses the realified LMI [[V, -W], [W, V]] >= 0 with W = omega (+) omega, whose
// smallest eigenvalue moves by at most ~eps*|V| under rounding of V. This keeps
// strongly squeezed resources (where nu_minus is not resolvable in double)
// from being rejected spuriously.
template <typename Scalar>
bool is_physical_within_rounding(const TwoModeCM<Scalar>& V) {
  Matrix4<Scalar> w = Matrix4<Scalar>::Zero();
  w.template topLeftCorner<2, 2>() = symplectic_form<Scalar>();
  w.template bottomRightCorner<2, 2>() = symplectic_form<Scalar>();
  Eigen::Matrix<Scalar, 8, 8> real_form;
  real_form << V.matrix(), -w, w, V.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, 8, 8>> es(real_form, Eigen::EigenvaluesOnly);
  const Scalar scale = V.matrix().cwiseAbs().maxCoeff();
  const Scalar tol = std::max(Scalar(kTolerance), Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale);
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace detail

/// Output moments of BK teleportation with gain g:
/// d_out = g d_in, V_out = g^2 V_in + g^2 Z A Z + g (Z C + C^T Z) + B.
template <typename Scalar>
SingleModeGaussian<Scalar> bk_output(const TwoModeCM<Scalar>& resource, Scalar g,
                                     const SingleModeGaussian<Scalar>& input) {
  if (!std::isfinite(g)) throw Error(Errc::InvalidArgument, "gain must be finite");
  if (!detail::is_physical_within_rounding(resource)) {
    throw Error(Errc::UnphysicalResource, "resource covariance violates the bona fide condition");
  }
  if (!is_physical(input)) throw Error(Errc::UnphysicalInput, "input state violates det V >= 1");
  const Matrix2<Scalar> Z = detail::z_matrix<Scalar>();
  const Matrix2<Scalar> C = resource.C();
  SingleModeGaussian<Scalar> out;
  out.d = g * input.d;
  out.V = g * g * input.V + g * g * Z * resource.A() * Z + g * (Z * C + C.transpose() * Z) + resource.B();
  out.V = (out.V + out.V.transpose()) / Scalar(2);
  return out;
}

/// Channel simulated by a standard-form resource (a, b, c) at gain g:
/// tau = g^2, y = g^2 a - 2 g c + b.
template <typename Scalar>
PhaseInsensitiveChannel<Scalar> induced_channel(Scalar a, Scalar b, Scalar c, Scalar g) {
  if (!std::isfinite(g)) throw Error(Errc::InvalidArgument, "gain must be finite");
  if (!detail::is_physical_within_rounding(TwoModeCM<Scalar>::standard_form(a, b, c))) {
    throw Error(Errc::UnphysicalResource, "standard-form resource is unphysical");
  }
  const Scalar tau = g * g;
  const Scalar y = g * g * a - Scalar(2) * g * c + b;
  const Scalar slack = Scalar(kTolerance) +
                       Scalar(16) * std::numeric_limits<Scalar>::epsilon() * (g * g * a + std::abs(2 * g * c) + b);
  if (y < std::abs(Scalar(1) - tau) - slack) {
    throw Error(Errc::NonPositiveNoise, "induced noise below the complete-positivity bound");
  }
  return {tau, std::max(y, Scalar(0))};
}

/// Whether (tau, y) can be simulated by a resource with the given budget:
/// y >= e^{-s_ba} tau and y >= e^{-s_ab}.
template <typename Scalar>
bool accessible(Scalar tau, Scalar y, const SteeringBudget<Scalar>& budget) {
  const PhaseInsensitiveChannel<Scalar> ch(tau, y);
  if (!ch.is_physical()) throw Error(Errc::UnphysicalChannel, "channel violates y >= |1 - tau|");
  if (budget.s_ba < Scalar(0) || budget.s_ab < Scalar(0)) {
    throw Error(Errc::InvalidBudget, "steering budget must be non-negative");
  }
  const Scalar tol = Scalar(kTolerance);
  return y >= std::exp(-budget.s_ba) * tau - tol && y >= std::exp(-budget.s_ab) - tol;
}

enum class ResourceFamily { FixedSba, FixedSab, Custom };

/// Standard-form resource (a, b, c) with BK gain g. For family members,
/// `steering_budget` is the fixed steerability in `direction`.
template <typename Scalar = double>
struct ResourceSpec {
  Scalar a{};
  Scalar b{};
  Scalar c{};
  Scalar g{};
  Direction direction = Direction::BtoA;
  Scalar steering_budget{};
  /// Mean photon number per mode of the resource; +inf when divergent.
  Scalar energy{};
  ResourceFamily family = ResourceFamily::Custom;

  TwoModeCM<Scalar> state() const { return TwoModeCM<Scalar>::standard_form(a, b, c); }
  PhaseInsensitiveChannel<Scalar> channel() const { return induced_channel(a, b, c, g); }
  Scalar tau() const { return g * g; }

  /// Arbitrary standard-form resource; records its BtoA steerability.
  static ResourceSpec custom(Scalar a, Scalar b, Scalar c, Scalar g) {
    ResourceSpec r;
    r.a = a;
    r.b = b;
    r.c = c;
    r.g = g;
    r.direction = Direction::BtoA;
    const auto V = r.state();
    if (!detail::is_physical_within_rounding(V)) {
      throw Error(Errc::UnphysicalResource, "standard-form resource is unphysical");
    }
    r.steering_budget = is_physical(V) ? steerability(V, Direction::BtoA) : std::numeric_limits<Scalar>::infinity();
    r.energy = (a + b - Scalar(2)) / Scalar(4);
    r.family = ResourceFamily::Custom;
    return r;
  }
};

/// Relative margin used to keep family requests away from the quantum-limited
/// endpoints, where the minimal energy diverges.
inline constexpr double kEndpointMargin = 1e-9;

/// Open tau-interval on which the family for direction `dir` has finite energy.
/// BtoA: (1/(1+e^{-s}), 1/(1-e^{-s})); AtoB: (1-e^{-s}, 1+e^{-s}).
template <typename Scalar>
std::pair<Scalar, Scalar> finite_energy_interval(Direction dir, Scalar s) {
  if (!(s > Scalar(0))) throw Error(Errc::InvalidBudget, "steering budget must be positive");
  const Scalar e = std::exp(-s);
  if (dir == Direction::BtoA) {
    const Scalar hi = e < Scalar(1) ? Scalar(1) / (Scalar(1) - e) : std::numeric_limits<Scalar>::infinity();
    return {Scalar(1) / (Scalar(1) + e), hi};
  }
  return {Scalar(1) - e, Scalar(1) + e};
}

/// Smallest admissible a, max{a+, a-}, for the family at (tau, s). Throws
/// DivergentEnergy at or beyond the quantum-limited endpoints.
template <typename Scalar>
Scalar minimal_a(Direction dir, Scalar tau, Scalar s) {
  const auto [lo, hi] = finite_energy_interval(dir, s);
  const Scalar margin = Scalar(kEndpointMargin);
  if (!(tau > lo * (Scalar(1) + margin)) || !(tau < hi * (Scalar(1) - margin))) {
    throw Error(Errc::DivergentEnergy, "tau at or beyond a quantum-limited endpoint of the finite-energy interval");
  }
  Scalar a_plus, a_minus;
  if (dir == Direction::BtoA) {
    const Scalar es = std::exp(s);
    const Scalar em = std::exp(-s);
    a_plus = (es + tau * (em + Scalar(1))) / (es * (tau - Scalar(1)) + tau);
    a_minus = (es + tau * (em - Scalar(1))) / (es * (Scalar(1) - tau) + tau);
  } else {
    const Scalar es = std::exp(s);
    a_plus = Scalar(1) / (tau * (Scalar(1) / (es + Scalar(1)) - Scalar(1)) + Scalar(1));
    // 1/(e^s - 1) + 1 = 1/(1 - e^{-s}); the latter avoids cancellation at small s.
    a_minus = Scalar(1) / (tau / (Scalar(1) - std::exp(-s)) - Scalar(1));
  }
  return std::max(a_plus, a_minus);
}

/// Member of a resource family with an explicit a >= minimal_a.
template <typename Scalar>
ResourceSpec<Scalar> family_member(Direction dir, Scalar tau, Scalar s, Scalar a) {
  const Scalar a_min = minimal_a(dir, tau, s);
  if (!(a >= a_min * (Scalar(1) - Scalar(1e-12)))) {
    throw Error(Errc::Unphysical, "a below the family's physicality bound");
  }
  ResourceSpec<Scalar> r;
  const Scalar e = std::exp(-s);
  const Scalar rt = std::sqrt(tau);
  r.a = a;
  if (dir == Direction::BtoA) {
    r.b = (a - e) * tau;
    r.c = (a - e) * rt;
    r.family = ResourceFamily::FixedSba;
  } else {
    r.b = a * tau + e;
    r.c = a * rt;
    r.family = ResourceFamily::FixedSab;
  }
  r.g = rt;
  r.direction = dir;
  r.steering_budget = s;
  r.energy = (r.a + r.b - Scalar(2)) / Scalar(4);
  return r;
}

/// Minimal-energy resource simulating (tau, e^{-s_ba} tau) with S_{B->A} = s_ba.
template <typename Scalar>
ResourceSpec<Scalar> optimal_resource_fixed_sba(Scalar tau, Scalar s_ba) {
  return family_member(Direction::BtoA, tau, s_ba, minimal_a(Direction::BtoA, tau, s_ba));
}

/// Minimal-energy resource simulating (tau, e^{-s_ab}) with S_{A->B} = s_ab.
template <typename Scalar>
ResourceSpec<Scalar> optimal_resource_fixed_sab(Scalar tau, Scalar s_ab) {
  return family_member(Direction::AtoB, tau, s_ab, minimal_a(Direction::AtoB, tau, s_ab));
}

template <typename Scalar>
ResourceSpec<Scalar> optimal_resource(Direction dir, Scalar tau, Scalar s) {
  return dir == Direction::BtoA ? optimal_resource_fixed_sba(tau, s) : optimal_resource_fixed_sab(tau, s);
}

/// Steerability of a resource in the direction opposite to its budget.
/// Family members use the closed forms (decreasing in a); custom resources
/// fall back to the measure.
template <typename Scalar>
Scalar cross_steerability(const ResourceSpec<Scalar>& spec) {
  const Scalar s = spec.steering_budget;
  const Scalar tau = spec.tau();
  switch (spec.family) {
    case ResourceFamily::FixedSba:
      return std::max(Scalar(0), -std::log(std::exp(-Scalar(2) * s) * (spec.a * std::exp(s) - Scalar(1)) * tau / spec.a));
    case ResourceFamily::FixedSab:
      return std::max(Scalar(0), -std::log(spec.a / (spec.a * std::exp(s) * tau + Scalar(1))));
    case ResourceFamily::Custom:
      break;
  }
  return steerability(spec.state(), opposite(spec.direction));
}

/// The a -> infinity limit of cross_steerability: the least cross steering the
/// family can offer at (tau, s). BtoA: s - log tau; AtoB: s + log tau.
template <typename Scalar>
Scalar cross_steerability_limit(Direction dir, Scalar tau, Scalar s) {
  const Scalar v = dir == Direction::BtoA ? s - std::log(tau) : s + std::log(tau);
  return std::max(Scalar(0), v);
}

/// Residuals of the resource invariants.
template <typename Scalar>
struct ResourceCheck {
  bool physical = false;
  Scalar nu_minus{};
  Scalar steering{};
  Scalar cross_measured{};
  Scalar boundary_residual{};  ///< |y_induced - y_boundary|
  bool ok = false;
};

template <typename Scalar>
ResourceCheck<Scalar> verify_resource(const ResourceSpec<Scalar>& spec) {
  ResourceCheck<Scalar> out;
  const auto V = spec.state();
  out.physical = is_physical(V);
  if (!out.physical) return out;
  out.nu_minus = symplectic_spectrum(V).nu_minus;
  out.steering = steerability(V, spec.direction);
  out.cross_measured = steerability(V, opposite(spec.direction));
  const auto ch = spec.channel();
  const Scalar s = spec.steering_budget;
  const Scalar y_boundary = spec.direction == Direction::BtoA ? std::exp(-s) * ch.tau() : std::exp(-s);
  out.boundary_residual = std::abs(ch.y() - y_boundary);
  if (spec.family == ResourceFamily::Custom) {
    out.ok = true;
    return out;
  }
  // Only the minimal-energy member saturates nu- = 1; larger a is strictly mixed.
  const bool minimal = std::abs(spec.a - minimal_a(spec.direction, ch.tau(), s)) <= Scalar(1e-9) * spec.a;
  const bool nu_ok = minimal ? std::abs(out.nu_minus - Scalar(1)) <= Scalar(1e-6)
                             : out.nu_minus >= Scalar(1) - Scalar(kTolerance);
  out.ok = nu_ok && std::abs(out.steering - s) <= Scalar(1e-6) &&
           std::abs(out.cross_measured - cross_steerability(spec)) <= Scalar(1e-6) &&
           out.boundary_residual <= Scalar(1e-9);
  return out;
}

}  // namespace cvtele
