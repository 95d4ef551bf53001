#pragma once

// Single-mode phase-insensitive Gaussian channels X = sqrt(tau) 1, Y = y 1.

#include <cmath>

#include "cvtele/gaussian.hpp"

namespace cvtele {

template <typename Scalar = double>
class PhaseInsensitiveChannel {
 public:
  /// Only phase-covariant channels (tau >= 0) are representable.
  PhaseInsensitiveChannel(Scalar tau, Scalar y) : tau_(tau), y_(y) {
    if (!(tau >= Scalar(0)) || !(y >= Scalar(0))) {
      throw Error(Errc::NegativeParameter, "channel parameters must satisfy tau >= 0, y >= 0");
    }
  }

  static PhaseInsensitiveChannel identity() { return {Scalar(1), Scalar(0)}; }

  Scalar tau() const { return tau_; }
  Scalar y() const { return y_; }

  Matrix2<Scalar> X() const { return std::sqrt(tau_) * Matrix2<Scalar>::Identity(); }
  Matrix2<Scalar> Y() const { return y_ * Matrix2<Scalar>::Identity(); }

  /// Complete positivity: y >= |1 - tau|.
  bool is_physical() const { return y_ >= std::abs(Scalar(1) - tau_) - Scalar(kTolerance); }

 private:
  Scalar tau_;
  Scalar y_;
};

enum class BoundaryTag { Interior, Identity, AttenuatorLimited, AmplifierLimited };

inline const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Interior: return "interior";
    case BoundaryTag::Identity: return "identity";
    case BoundaryTag::AttenuatorLimited: return "attenuator-limited";
    case BoundaryTag::AmplifierLimited: return "amplifier-limited";
  }
  return "interior";
}

/// Region membership of a point in the (tau, y) plane. Breaking flags are
/// only asserted for physical points.
struct ChannelClass {
  bool unphysical = false;
  bool entanglement_breaking = false;
  bool sb_b_to_a = false;
  bool sb_a_to_b = false;
  BoundaryTag tag = BoundaryTag::Interior;
};

template <typename Scalar>
ChannelClass classify(Scalar tau, Scalar y) {
  using std::abs;
  if (!(tau >= Scalar(0)) || !(y >= Scalar(0))) {
    throw Error(Errc::NegativeParameter, "classify requires tau >= 0 and y >= 0");
  }
  const Scalar tol = Scalar(kTolerance);
  ChannelClass out;
  const Scalar cp_bound = abs(Scalar(1) - tau);
  if (y < cp_bound - tol) {
    out.unphysical = true;
    return out;
  }
  out.entanglement_breaking = y >= Scalar(1) + tau - tol;
  out.sb_b_to_a = y >= (Scalar(1) + abs(Scalar(2) * tau - Scalar(1))) / Scalar(2) - tol;
  out.sb_a_to_b = y >= std::max(cp_bound, Scalar(1)) - tol;

  if (abs(tau - Scalar(1)) <= tol && y <= tol) {
    out.tag = BoundaryTag::Identity;
  } else if (abs(y - cp_bound) <= tol) {
    out.tag = tau < Scalar(1) ? BoundaryTag::AttenuatorLimited : BoundaryTag::AmplifierLimited;
  }
  return out;
}

template <typename Scalar>
ChannelClass classify(const PhaseInsensitiveChannel<Scalar>& ch) {
  return classify(ch.tau(), ch.y());
}

/// d -> sqrt(tau) d, V -> tau V + y 1.
template <typename Scalar>
SingleModeGaussian<Scalar> apply_channel(const PhaseInsensitiveChannel<Scalar>& ch,
                                         const SingleModeGaussian<Scalar>& s) {
  if (!ch.is_physical()) throw Error(Errc::UnphysicalChannel, "channel violates y >= |1 - tau|");
  if (!is_physical(s)) throw Error(Errc::UnphysicalState, "input state violates det V >= 1");
  SingleModeGaussian<Scalar> out;
  out.d = std::sqrt(ch.tau()) * s.d;
  out.V = ch.tau() * s.V + ch.y() * Matrix2<Scalar>::Identity();
  return out;
}

/// Channel acting on mode B only: A fixed, C -> sqrt(tau) C, B -> tau B + y 1.
template <typename Scalar>
TwoModeCM<Scalar> apply_one_sided(const PhaseInsensitiveChannel<Scalar>& ch, const TwoModeCM<Scalar>& V) {
  if (!ch.is_physical()) throw Error(Errc::UnphysicalChannel, "channel violates y >= |1 - tau|");
  if (!is_physical(V)) throw Error(Errc::UnphysicalState, "two-mode input is unphysical");
  const Scalar k = std::sqrt(ch.tau());
  return TwoModeCM<Scalar>::from_blocks(V.A(), ch.tau() * V.B() + ch.y() * Matrix2<Scalar>::Identity(),
                                        k * V.C());
}

/// c1 after c2: (tau1 tau2, tau1 y2 + y1).
template <typename Scalar>
PhaseInsensitiveChannel<Scalar> compose(const PhaseInsensitiveChannel<Scalar>& c1,
                                        const PhaseInsensitiveChannel<Scalar>& c2) {
  if (!c1.is_physical() || !c2.is_physical()) {
    throw Error(Errc::UnphysicalChannel, "cannot compose unphysical channels");
  }
  return {c1.tau() * c2.tau(), c1.tau() * c2.y() + c1.y()};
}

}  // namespace cvtele
