#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "irs/channel.hpp"
#include "irs/random.hpp"
#include "irs/types.hpp"

namespace irs {

/// Surface phase shifts theta_n in [0, 2*pi). The reflection vector used by the
/// phase subproblem is v_n = exp(-j*theta_n), so that h_r^H Theta x = v^H (diag(h_r^H) x).
template <typename Real>
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(RVector<Real> theta) : theta_(std::move(theta)) {
    for (Eigen::Index i = 0; i < theta_.size(); ++i) theta_(i) = wrap_phase(theta_(i));
  }

  static PhaseVector zeros(Eigen::Index n) { return PhaseVector(RVector<Real>::Zero(n)); }

  static PhaseVector random(Eigen::Index n, Rng& rng) {
    RVector<Real> theta(n);
    for (Eigen::Index i = 0; i < n; ++i) theta(i) = rng.uniform<Real>(Real(0), kTwoPi<Real>);
    return PhaseVector(std::move(theta));
  }

  /// Inverse of reflection(); entries of v need not be exactly unit modulus.
  static PhaseVector from_reflection(const CVector<Real>& v) {
    RVector<Real> theta(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) theta(i) = -std::arg(v(i));
    return PhaseVector(std::move(theta));
  }

  Eigen::Index size() const { return theta_.size(); }
  const RVector<Real>& theta() const { return theta_; }
  Real operator[](Eigen::Index i) const { return theta_(i); }

  /// v with v_n = exp(-j theta_n).
  CVector<Real> reflection() const {
    CVector<Real> v(theta_.size());
    for (Eigen::Index i = 0; i < theta_.size(); ++i) v(i) = std::polar(Real(1), -theta_(i));
    return v;
  }

  /// Diagonal of Theta, exp(j theta_n).
  CVector<Real> diagonal() const { return reflection().conjugate(); }

  bool operator==(const PhaseVector& other) const { return theta_ == other.theta_; }

 private:
  RVector<Real> theta_;
};

/// Average MSE as a quadratic form in the beamformer:
///   e(w, c) = |c|^2 (w^H A w + sigma_n2) - 2 Re(c alpha^H w) + 1.
template <typename Real>
struct MseQuadratic {
  CMatrix<Real> A;
  CVector<Real> alpha;
  Real sigma_n2 = Real(0);

  Eigen::Index antennas() const { return alpha.size(); }
};

template <typename Real>
struct Design {
  CVector<Real> w;
  Complex<Real> c{0, 0};
  PhaseVector<Real> phases;
  Real mse = Real(1);
};

/// Effective nominal channel alpha = G^H Theta^H h_r + h_d.
template <typename Real>
CVector<Real> effective_channel(const ChannelEstimate<Real>& est, const PhaseVector<Real>& phases) {
  if (phases.size() != est.elements())
    throw std::invalid_argument("effective_channel: phase count does not match element count");
  if (est.elements() == 0) return est.h_d;
  return est.G.adjoint() * phases.reflection().cwiseProduct(est.h_r) + est.h_d;
}

/// Builds (A, alpha) of the averaged MSE for unit-modulus phases. `errs` are
/// absolute per-entry error variances.
///
/// A = alpha alpha^H + sigma_g2 |h_r|^2 I + sigma_r2 G^H G + (N sigma_r2 sigma_g2 + sigma_d2) I.
template <typename Real>
MseQuadratic<Real> build_quadratic(const ChannelEstimate<Real>& est, const ErrorStats<Real>& errs,
                                   const PhaseVector<Real>& phases, Real sigma_n2) {
  const Eigen::Index m = est.h_d.size();
  const Eigen::Index n = est.h_r.size();
  if (est.G.rows() != n || (n > 0 && est.G.cols() != m))
    throw std::invalid_argument("build_quadratic: channel dimensions are inconsistent");

  MseQuadratic<Real> q;
  q.sigma_n2 = sigma_n2;
  q.alpha = effective_channel(est, phases);
  q.A = q.alpha * q.alpha.adjoint();
  const Real diag = errs.sigma_g2 * est.h_r.squaredNorm() +
                    Real(n) * errs.sigma_r2 * errs.sigma_g2 + errs.sigma_d2;
  if (n > 0 && errs.sigma_r2 != Real(0)) q.A.noalias() += errs.sigma_r2 * (est.G.adjoint() * est.G);
  q.A.diagonal().array() += diag;
  return q;
}

/// Quadratic for the link without a surface: A0 = h_d h_d^H + sigma_d2 I, alpha0 = h_d.
template <typename Real>
MseQuadratic<Real> build_direct_quadratic(const CVector<Real>& h_d, Real sigma_d2, Real sigma_n2) {
  MseQuadratic<Real> q;
  q.sigma_n2 = sigma_n2;
  q.alpha = h_d;
  q.A = h_d * h_d.adjoint();
  q.A.diagonal().array() += sigma_d2;
  return q;
}

template <typename Real>
Real evaluate_mse(const MseQuadratic<Real>& q, const CVector<Real>& w, Complex<Real> c) {
  const Real quad = std::real(w.dot(q.A * w));  // w^H A w
  const Complex<Real> cross = q.alpha.dot(w);    // alpha^H w
  return std::norm(c) * (quad + q.sigma_n2) - Real(2) * std::real(c * cross) + Real(1);
}

/// MSE with the Wiener equalizer substituted: 1 - |w^H alpha|^2 / (w^H A w + sigma_n2).
template <typename Real>
Real evaluate_mse_wiener(const MseQuadratic<Real>& q, const CVector<Real>& w) {
  const Real quad = std::real(w.dot(q.A * w));
  return Real(1) - std::norm(w.dot(q.alpha)) / (quad + q.sigma_n2);
}

struct MseEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo estimate of E|c y - s|^2 with y = (h_r^H Theta G + h_d^H) w s + n0,
/// where the true channels are estimate + error and `errs` are absolute variances.
template <typename Real>
MseEstimate mc_mse_oracle(const ChannelEstimate<Real>& est, const ErrorStats<Real>& errs,
                          const PhaseVector<Real>& phases, const CVector<Real>& w,
                          Complex<Real> c, Real sigma_n2, std::int64_t trials,
                          std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("mc_mse_oracle: trials must be >= 1");
  const Eigen::Index m = est.h_d.size();
  const Eigen::Index n = est.h_r.size();
  const CVector<Real> theta_diag = phases.diagonal();
  Rng rng(seed);

  CMatrix<Real> G(n, m);
  CVector<Real> h_r(n);
  CVector<Real> h_d(m);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < n; ++i) G(i, j) = est.G(i, j) + rng.complex_normal(errs.sigma_g2);
    for (Eigen::Index i = 0; i < n; ++i) h_r(i) = est.h_r(i) + rng.complex_normal(errs.sigma_r2);
    for (Eigen::Index i = 0; i < m; ++i) h_d(i) = est.h_d(i) + rng.complex_normal(errs.sigma_d2);
    const Complex<Real> s = rng.complex_normal(Real(1));
    const Complex<Real> noise = rng.complex_normal(sigma_n2);

    Complex<Real> gain = h_d.dot(w);  // h_d^H w
    if (n > 0) gain += h_r.dot(theta_diag.cwiseProduct(G * w));
    const Complex<Real> y = gain * s + noise;
    const double err = static_cast<double>(std::norm(c * y - s));
    sum += err;
    sum_sq += err * err;
  }
  const double count = static_cast<double>(trials);
  const double mean = sum / count;
  const double var = trials > 1 ? (sum_sq - count * mean * mean) / (count - 1.0) : 0.0;
  return {mean, std::sqrt(std::max(var, 0.0) / count)};
}

}  // namespace irs
