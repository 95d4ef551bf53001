#pragma once

// Average fidelities for a Gaussian-distributed coherent-state alphabet, the
// Gaussian no-cloning security threshold, and the steering-limited optima.

#include <optional>

#include "cvtele/teleport.hpp"

namespace cvtele {

/// Coherent-state alphabet p(alpha) = (lambda/pi) exp(-lambda |alpha|^2).
/// lambda = 0 is the uniform limit.
class Alphabet {
 public:
  explicit Alphabet(double lambda);
  double lambda() const { return lambda_; }
  double density(double re, double im) const;

 private:
  double lambda_;
};

/// Average fidelity of the phase-insensitive channel (tau, y) over the
/// alphabet: 2 lambda / (2 (1 - sqrt tau)^2 + lambda (1 + y + tau)).
double avg_fidelity(double tau, double y, double lambda);

/// Gaussian-cloner security threshold; breakpoint at lambda = sqrt(2) - 1.
double no_cloning_threshold(double lambda);

/// Strict security verdict f > threshold. Differences within kTolerance count
/// as equality and are not secure.
inline bool exceeds_threshold(double f, double threshold) { return f > threshold + kTolerance; }

/// Noise on the accessible-region boundary used by the optimum:
/// e^{-s} tau for BtoA, e^{-s} for AtoB.
double boundary_noise(double tau, double s, Direction dir);

/// Transmissivity maximising the average fidelity on the boundary of the
/// region accessible with steerability s in direction dir. s = 0 gives the
/// zero-budget limit.
double tau_opt(double lambda, double s, Direction dir);

/// Whether the optimum sits on the quantum-limited clamp (second branch).
bool clamp_branch_active(double lambda, double s, Direction dir);

/// Optimal average fidelity at fixed steerability s in direction dir.
double f_opt(double lambda, double s, Direction dir);

/// Minimal AtoB steerability needed to exceed the threshold.
double s_ab_min(double lambda);

struct McSummary {
  double estimate = 0;
  double std_error = 0;
  long long n_samples = 0;
  unsigned long long seed = 0;
  bool agrees = false;
};

struct FidelityReport {
  double f_avg = 0;
  double threshold = 0;
  bool secure = false;
  double tau = 0;
  double y = 0;
  SteeringBudget<double> budget_used;
  bool accessible = false;
  std::optional<McSummary> mc;
};

/// Bundles avg_fidelity, the threshold and the accessibility verdict.
/// Security uses the strict inequality f_avg > threshold.
FidelityReport security_report(double tau, double y, double lambda, const SteeringBudget<double>& budget);

}  // namespace cvtele
