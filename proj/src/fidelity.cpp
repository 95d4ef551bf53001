#include "cvtele/fidelity.hpp"

#include <cmath>
#include <numbers>

namespace cvtele {

namespace {

constexpr double kSqrt2Minus1 = std::numbers::sqrt2 - 1.0;

void require_positive_lambda(double lambda) {
  if (std::isnan(lambda) || lambda < 0) throw Error(Errc::NegativeLambda, "lambda must be non-negative");
  if (lambda == 0) throw Error(Errc::UniformLimit, "lambda = 0 is the uniform limit; use a positive lambda");
}

void require_budget(double s) {
  if (!(s >= 0)) throw Error(Errc::InvalidBudget, "steering budget must be non-negative");
}

// Branch conditions, written in e^{-s} so that large budgets do not overflow.
// BtoA: lambda <= 2 (sqrt(e^s (e^s + 1)) - e^s) / (e^s + 1).
double ba_breakpoint(double s) {
  const double em = std::exp(-s);
  return 2.0 * (std::sqrt(1.0 + em) - 1.0) / (1.0 + em);
}

// AtoB: lambda <= 2 (sqrt(e^s / (e^s - 1)) - 1); +inf at s = 0.
double ab_breakpoint(double s) {
  const double q = -std::expm1(-s);
  if (q <= 0) return std::numeric_limits<double>::infinity();
  return 2.0 * (1.0 / std::sqrt(q) - 1.0);
}

}  // namespace

Alphabet::Alphabet(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0)) throw Error(Errc::NegativeLambda, "lambda must be non-negative");
}

double Alphabet::density(double re, double im) const {
  return lambda_ / std::numbers::pi * std::exp(-lambda_ * (re * re + im * im));
}

double avg_fidelity(double tau, double y, double lambda) {
  const PhaseInsensitiveChannel<double> ch(tau, y);
  if (!ch.is_physical()) throw Error(Errc::UnphysicalChannel, "channel violates y >= |1 - tau|");
  require_positive_lambda(lambda);
  const double gap = 1.0 - std::sqrt(tau);
  return 2.0 * lambda / (2.0 * gap * gap + lambda * (1.0 + y + tau));
}

double no_cloning_threshold(double lambda) {
  if (!(lambda >= 0)) throw Error(Errc::NegativeLambda, "lambda must be non-negative");
  if (lambda <= kSqrt2Minus1) return 2.0 * (1.0 + lambda) / (3.0 + lambda);
  return 2.0 * lambda / (3.0 - 2.0 * std::numbers::sqrt2 + 2.0 * lambda);
}

double boundary_noise(double tau, double s, Direction dir) {
  return dir == Direction::BtoA ? std::exp(-s) * tau : std::exp(-s);
}

bool clamp_branch_active(double lambda, double s, Direction dir) {
  require_positive_lambda(lambda);
  require_budget(s);
  return dir == Direction::BtoA ? lambda > ba_breakpoint(s) : lambda > ab_breakpoint(s);
}

double tau_opt(double lambda, double s, Direction dir) {
  require_positive_lambda(lambda);
  require_budget(s);
  const double em = std::exp(-s);
  if (dir == Direction::BtoA) {
    // 4 e^{2s} / [lambda + e^s (2 + lambda)]^2, divided through by e^{2s}.
    const double den = lambda * em + 2.0 + lambda;
    return std::max(4.0 / (den * den), 1.0 / (1.0 + em));
  }
  return std::max(4.0 / ((2.0 + lambda) * (2.0 + lambda)), 1.0 - em);
}

double f_opt(double lambda, double s, Direction dir) {
  require_positive_lambda(lambda);
  require_budget(s);
  const double em = std::exp(-s);
  if (dir == Direction::BtoA) {
    if (lambda <= ba_breakpoint(s)) {
      return 2.0 * (lambda * em + 2.0 + lambda) / ((2.0 + lambda) * em + 4.0 + lambda);
    }
    return lambda * (1.0 + em) / ((1.0 + lambda) * em + 2.0 + lambda - 2.0 * std::sqrt(em + 1.0));
  }
  if (lambda <= ab_breakpoint(s)) {
    return 2.0 * (2.0 + lambda) / ((2.0 + lambda) * em + 4.0 + lambda);
  }
  const double gap = std::sqrt(-std::expm1(-s)) - 1.0;
  return lambda / (lambda + gap * gap);
}

double s_ab_min(double lambda) {
  if (!(lambda >= 0)) throw Error(Errc::NegativeLambda, "lambda must be non-negative");
  if (lambda <= kSqrt2Minus1) return std::log(0.5 * (1.0 + lambda) * (2.0 + lambda));
  if (lambda <= 2.0 * kSqrt2Minus1) {
    return -std::log(lambda / (lambda + 2.0) + (3.0 - 2.0 * std::numbers::sqrt2) / lambda);
  }
  return std::log(2.0);
}

FidelityReport security_report(double tau, double y, double lambda, const SteeringBudget<double>& budget) {
  FidelityReport r;
  r.tau = tau;
  r.y = y;
  r.budget_used = budget;
  r.f_avg = avg_fidelity(tau, y, lambda);
  r.threshold = no_cloning_threshold(lambda);
  r.secure = exceeds_threshold(r.f_avg, r.threshold);
  r.accessible = accessible(tau, y, budget);
  return r;
}

}  // namespace cvtele
