#pragma once

// Covariance-matrix algebra for one- and two-mode Gaussian states.
//
// Conventions: quadrature ordering (q_A, p_A, q_B, p_B); the vacuum covariance
// matrix is the identity; a coherent state |alpha> has displacement
// sqrt(2) * (Re alpha, Im alpha).

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "cvtele/error.hpp"

namespace cvtele {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

/// Absolute tolerance applied to the decisive scalar of every boundary
/// predicate. Boundary cases resolve to the non-strict side.
inline constexpr double kTolerance = 1e-9;

/// Steering direction. BtoA means Bob's measurements steer Alice's mode.
enum class Direction { BtoA, AtoB };

inline constexpr Direction opposite(Direction d) noexcept {
  return d == Direction::BtoA ? Direction::AtoB : Direction::BtoA;
}

template <typename Scalar>
Matrix2<Scalar> symplectic_form() {
  Matrix2<Scalar> w;
  w << Scalar(0), Scalar(1), Scalar(-1), Scalar(0);
  return w;
}

namespace detail {

template <typename Derived>
typename Derived::Scalar max_asymmetry(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Scalar scale = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
  return max_asymmetry(m) <= Scalar(kTolerance) * scale;
}

template <typename Derived>
bool is_positive_definite(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Plain = typename Derived::PlainObject;
  Eigen::SelfAdjointEigenSolver<Plain> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > Scalar(0);
}

// 2x2 bona fide test: M + i*omega >= 0  <=>  det M >= 1 and tr M > 0.
template <typename Scalar>
bool satisfies_uncertainty(const Matrix2<Scalar>& m) {
  return m.determinant() >= Scalar(1) - Scalar(kTolerance) && m.trace() > Scalar(0);
}

}  // namespace detail

/// One mode: displacement d and covariance V.
template <typename Scalar = double>
struct SingleModeGaussian {
  Vector2<Scalar> d = Vector2<Scalar>::Zero();
  Matrix2<Scalar> V = Matrix2<Scalar>::Identity();

  static SingleModeGaussian vacuum() { return {}; }

  static SingleModeGaussian coherent(std::complex<Scalar> alpha) {
    SingleModeGaussian s;
    const Scalar k = std::sqrt(Scalar(2));
    s.d << k * alpha.real(), k * alpha.imag();
    return s;
  }

  static SingleModeGaussian thermal(Scalar variance) {
    SingleModeGaussian s;
    s.V = variance * Matrix2<Scalar>::Identity();
    return s;
  }
};

template <typename Scalar>
bool is_physical(const SingleModeGaussian<Scalar>& s) {
  return detail::is_symmetric(s.V) && detail::satisfies_uncertainty<Scalar>(s.V);
}

/// Covariance matrix of a two-mode Gaussian state, stored as the full 4x4
/// matrix [[A, C], [C^T, B]]. Always symmetric; physicality is a separate
/// predicate.
template <typename Scalar = double>
class TwoModeCM {
 public:
  using MatrixType = Matrix4<Scalar>;
  using Block = Matrix2<Scalar>;

  TwoModeCM() : m_(MatrixType::Identity()) {}

  template <typename Derived>
  explicit TwoModeCM(const Eigen::MatrixBase<Derived>& m) : m_(m) {
    if (!detail::is_symmetric(m_)) {
      throw Error(Errc::NonSymmetric, "covariance matrix is not symmetric");
    }
    m_ = (m_ + m_.transpose()) / Scalar(2);
  }

  static TwoModeCM from_blocks(const Block& A, const Block& B, const Block& C) {
    MatrixType m;
    m << A, C, C.transpose(), B;
    return TwoModeCM(m);
  }

  /// Standard form with A = a*1, B = b*1, C = diag(-c, c). No physicality check.
  static TwoModeCM standard_form(Scalar a, Scalar b, Scalar c) {
    MatrixType m = MatrixType::Zero();
    m(0, 0) = m(1, 1) = a;
    m(2, 2) = m(3, 3) = b;
    m(0, 2) = m(2, 0) = -c;
    m(1, 3) = m(3, 1) = c;
    return TwoModeCM(m);
  }

  const MatrixType& matrix() const { return m_; }
  Block A() const { return m_.template topLeftCorner<2, 2>(); }
  Block B() const { return m_.template bottomRightCorner<2, 2>(); }
  Block C() const { return m_.template topRightCorner<2, 2>(); }

  Scalar operator()(int i, int j) const { return m_(i, j); }

  bool isApprox(const TwoModeCM& other, Scalar prec = Scalar(1e-12)) const {
    return (m_ - other.m_).cwiseAbs().maxCoeff() <= prec * std::max(Scalar(1), m_.cwiseAbs().maxCoeff());
  }

 private:
  MatrixType m_;
};

template <typename Scalar>
struct SymplecticSpectrum {
  Scalar nu_plus;
  Scalar nu_minus;
  Scalar delta;  ///< det A + det B + 2 det C
  Scalar det;    ///< det V
};

namespace detail {

// det V = det B * det(A - C B^-1 C^T); avoids the a^4 cancellation of a
// cofactor expansion for strongly squeezed states.
template <typename Scalar>
Scalar stable_determinant(const TwoModeCM<Scalar>& V) {
  const Matrix2<Scalar> B = V.B();
  const Scalar detB = B.determinant();
  if (!(detB > Scalar(kTolerance))) return V.matrix().determinant();
  const Matrix2<Scalar> M = V.A() - V.C() * B.inverse() * V.C().transpose();
  return detB * M.determinant();
}

}  // namespace detail

/// Symplectic spectrum of a two-mode covariance matrix.
///
/// For positive-definite V the eigenvalues are taken from the singular values
/// of V^{1/2} Omega V^{1/2} (each symplectic eigenvalue appears twice); this
/// agrees with the closed form sqrt((Delta +- sqrt(Delta^2 - 4 det V)) / 2)
/// but keeps full precision for nearly pure, strongly squeezed states where
/// the closed form loses half of its digits. Otherwise the closed form is
/// evaluated directly.
template <typename Scalar>
SymplecticSpectrum<Scalar> symplectic_spectrum(const TwoModeCM<Scalar>& V) {
  using std::sqrt;
  SymplecticSpectrum<Scalar> out{};
  out.delta = V.A().determinant() + V.B().determinant() + Scalar(2) * V.C().determinant();
  out.det = detail::stable_determinant(V);

  Eigen::SelfAdjointEigenSolver<Matrix4<Scalar>> es(V.matrix());
  if (es.eigenvalues().minCoeff() > Scalar(0)) {
    const Matrix4<Scalar> root = es.operatorSqrt();
    Matrix4<Scalar> omega = Matrix4<Scalar>::Zero();
    omega.template topLeftCorner<2, 2>() = symplectic_form<Scalar>();
    omega.template bottomRightCorner<2, 2>() = symplectic_form<Scalar>();
    const Matrix4<Scalar> k = root * omega * root;
    Eigen::JacobiSVD<Matrix4<Scalar>> svd(k);
    const auto& sv = svd.singularValues();
    out.nu_plus = (sv(0) + sv(1)) / Scalar(2);
    out.nu_minus = (sv(2) + sv(3)) / Scalar(2);
    return out;
  }

  Scalar disc = out.delta * out.delta - Scalar(4) * out.det;
  if (disc < -Scalar(kTolerance) * std::max(Scalar(1), out.delta * out.delta)) {
    throw Error(Errc::ComplexSpectrum, "Delta^2 - 4 det V is negative");
  }
  disc = std::max(disc, Scalar(0));
  const Scalar root = sqrt(disc);
  out.nu_plus = sqrt(std::max(Scalar(0), (out.delta + root) / Scalar(2)));
  out.nu_minus = sqrt(std::max(Scalar(0), (out.delta - root) / Scalar(2)));
  return out;
}

/// Bona fide condition V + i(omega (+) omega) >= 0, tested as V > 0 and
/// nu_minus >= 1.
template <typename Scalar>
bool is_physical(const TwoModeCM<Scalar>& V) {
  if (!detail::is_positive_definite(V.matrix())) return false;
  return symplectic_spectrum(V).nu_minus >= Scalar(1) - Scalar(kTolerance);
}

/// Mean photon number per mode, (tr V - 2n) / (4n). Displacement is ignored.
template <typename Scalar>
Scalar mean_photon_number(const TwoModeCM<Scalar>& V) {
  if (!is_physical(V)) throw Error(Errc::Unphysical, "mean photon number of an unphysical state");
  return (V.matrix().trace() - Scalar(4)) / Scalar(8);
}

template <typename Scalar>
Scalar mean_photon_number(const SingleModeGaussian<Scalar>& s) {
  if (!is_physical(s)) throw Error(Errc::Unphysical, "mean photon number of an unphysical state");
  return (s.V.trace() - Scalar(2)) / Scalar(4);
}

/// Partial transposition on mode B (p_B -> -p_B).
template <typename Scalar>
TwoModeCM<Scalar> partial_transpose(const TwoModeCM<Scalar>& V) {
  Matrix4<Scalar> lambda = Matrix4<Scalar>::Identity();
  lambda(3, 3) = Scalar(-1);
  return TwoModeCM<Scalar>(lambda * V.matrix() * lambda);
}

/// PPT criterion, exact for two-mode Gaussian states.
template <typename Scalar>
bool is_separable(const TwoModeCM<Scalar>& V) {
  if (!is_physical(V)) throw Error(Errc::Unphysical, "separability of an unphysical state");
  return is_physical(partial_transpose(V));
}

namespace detail {

// Schur complement of the steering party's block: for BtoA this is
// A - C B^-1 C^T (Alice's conditional covariance).
template <typename Scalar>
Matrix2<Scalar> steering_schur_complement(const TwoModeCM<Scalar>& V, Direction dir) {
  const Matrix2<Scalar> steering = dir == Direction::BtoA ? V.B() : V.A();
  if (std::abs(steering.determinant()) <= Scalar(kTolerance)) {
    throw Error(Errc::DegenerateBlock, "steering party's block is singular");
  }
  if (dir == Direction::BtoA) return V.A() - V.C() * steering.inverse() * V.C().transpose();
  return V.B() - V.C().transpose() * steering.inverse() * V.C();
}

}  // namespace detail

/// Gaussian unsteerability: V + i(omega (+) 0) >= 0 for BtoA, the mirror for
/// AtoB. Equivalent to the steering block being positive definite and its
/// Schur complement M obeying det M >= 1, tr M > 0.
template <typename Scalar>
bool is_unsteerable(const TwoModeCM<Scalar>& V, Direction dir) {
  const Matrix2<Scalar> M = detail::steering_schur_complement(V, dir);
  const Matrix2<Scalar> steering = dir == Direction::BtoA ? V.B() : V.A();
  if (!detail::is_positive_definite(steering)) return false;
  return detail::satisfies_uncertainty<Scalar>(M);
}

/// Gaussian steerability max{0, 1/2 log(det B / det V)} (BtoA) or with det A
/// (AtoB). Evaluated as -1/2 log det M with M the Schur complement, which is
/// the same quantity. Returns exactly 0 whenever is_unsteerable holds.
template <typename Scalar>
Scalar steerability(const TwoModeCM<Scalar>& V, Direction dir) {
  if (detail::stable_determinant(V) <= Scalar(kTolerance)) {
    return std::numeric_limits<Scalar>::infinity();
  }
  if (!is_physical(V)) throw Error(Errc::Unphysical, "steerability of an unphysical state");
  const Matrix2<Scalar> M = detail::steering_schur_complement(V, dir);
  if (detail::satisfies_uncertainty<Scalar>(M)) return Scalar(0);
  return std::max(Scalar(0), -std::log(M.determinant()) / Scalar(2));
}

/// Two-mode squeezed vacuum: a = b = cosh 2r, c = sinh 2r.
template <typename Scalar = double>
TwoModeCM<Scalar> tmsv(Scalar r) {
  return TwoModeCM<Scalar>::standard_form(std::cosh(Scalar(2) * r), std::cosh(Scalar(2) * r),
                                          std::sinh(Scalar(2) * r));
}

/// Two-mode squeezed thermal state in standard form; throws if unphysical.
template <typename Scalar = double>
TwoModeCM<Scalar> squeezed_thermal(Scalar a, Scalar b, Scalar c) {
  auto V = TwoModeCM<Scalar>::standard_form(a, b, c);
  if (!is_physical(V)) throw Error(Errc::Unphysical, "standard-form parameters violate the bona fide condition");
  return V;
}

/// Local symplectic S_A (+) S_B applied as S V S^T.
template <typename Scalar>
TwoModeCM<Scalar> apply_local(const TwoModeCM<Scalar>& V, const Matrix2<Scalar>& SA, const Matrix2<Scalar>& SB) {
  Matrix4<Scalar> S = Matrix4<Scalar>::Zero();
  S.template topLeftCorner<2, 2>() = SA;
  S.template bottomRightCorner<2, 2>() = SB;
  return TwoModeCM<Scalar>(S * V.matrix() * S.transpose());
}

template <typename Scalar>
Matrix2<Scalar> rotation(Scalar theta) {
  Matrix2<Scalar> R;
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return R;
}

}  // namespace cvtele
