#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace irs {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
inline constexpr Real kTwoPi = Real(2) * std::numbers::pi_v<Real>;

// Maps an angle onto [0, 2*pi).
template <typename Real>
Real wrap_phase(Real theta) {
  Real r = std::fmod(theta, kTwoPi<Real>);
  if (r < Real(0)) r += kTwoPi<Real>;
  if (r >= kTwoPi<Real>) r = Real(0);
  return r;
}

}  // namespace irs
