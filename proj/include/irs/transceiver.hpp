#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "irs/mse.hpp"

namespace irs {

struct BisectionConfig {
  double power_tol = 1e-10;  // relative, on |w|^2 - P0
  int max_iters = 200;
  // Each doubling of the initial upper bracket is attempted at most this many
  // times if the analytic bracket turns out infeasible in floating point.
  int max_bracket_doublings = 64;

  void validate() const {
    if (!(power_tol > 0.0)) throw std::invalid_argument("BisectionConfig: power_tol must be > 0");
    if (max_iters < 1) throw std::invalid_argument("BisectionConfig: max_iters must be >= 1");
  }
};

/// Wiener equalizer c = w^H alpha / (w^H A w + sigma_n2).
template <typename Real>
Complex<Real> wiener_equalizer(const MseQuadratic<Real>& q, const CVector<Real>& w) {
  if (!(q.sigma_n2 > Real(0))) throw std::invalid_argument("wiener_equalizer: noise power must be > 0");
  const Real denom = std::real(w.dot(q.A * w)) + q.sigma_n2;
  return w.dot(q.alpha) / denom;
}

template <typename Real>
struct BeamformerResult {
  CVector<Real> w;
  Real lambda = Real(0);
  int iterations = 0;
  bool converged = true;
};

/// Solves min_w |c|^2 w^H A w - 2 Re(c alpha^H w) s.t. |w|^2 <= P0.
///
/// The stationary point is w(lambda) = (|c|^2 A + lambda I)^{-1} alpha c^*. A is
/// diagonalized once; |w(lambda)|^2 is then an explicit, strictly decreasing
/// function of lambda and the multiplier is found by bisection on
/// [0, |c| |alpha| / sqrt(P0)].
template <typename Real>
BeamformerResult<Real> update_beamformer(const MseQuadratic<Real>& q, Complex<Real> c, Real p0,
                                         const BisectionConfig& cfg = {}) {
  if (!(p0 > Real(0))) throw std::invalid_argument("update_beamformer: P0 must be > 0");
  cfg.validate();
  const Eigen::Index m = q.alpha.size();
  BeamformerResult<Real> out;
  const Real alpha_norm = q.alpha.norm();
  if (alpha_norm == Real(0)) {
    out.w = CVector<Real>::Zero(m);
    return out;
  }
  const Real c2 = std::norm(c);
  if (c2 == Real(0)) {
    // Objective is constant in w; keep a full-power beam along alpha.
    out.w = (std::sqrt(p0) / alpha_norm) * q.alpha;
    return out;
  }

  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> eig(q.A);
  if (eig.info() != Eigen::Success) throw std::runtime_error("update_beamformer: eigendecomposition failed");
  RVector<Real> d = eig.eigenvalues().cwiseMax(Real(0));
  CVector<Real> b = eig.eigenvectors().adjoint() * q.alpha * std::conj(c);
  // alpha lies in the range of A (A - alpha alpha^H is PSD), so components of b
  // along numerically null eigenvectors are rounding noise.
  const Real null_tol = d.maxCoeff() * Real(m) * std::numeric_limits<Real>::epsilon();
  for (Eigen::Index i = 0; i < m; ++i)
    if (d(i) <= null_tol) {
      d(i) = Real(0);
      b(i) = Complex<Real>(0);
    }
  const RVector<Real> b2 = b.cwiseAbs2();

  auto power = [&](Real lambda) {
    Real sum = Real(0);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (b2(i) == Real(0)) continue;
      const Real den = c2 * d(i) + lambda;
      sum += b2(i) / (den * den);
    }
    return sum;
  };
  auto beam = [&](Real lambda) {
    CVector<Real> scaled(m);
    for (Eigen::Index i = 0; i < m; ++i)
      scaled(i) = b2(i) == Real(0) ? Complex<Real>(0) : b(i) / (c2 * d(i) + lambda);
    return CVector<Real>(eig.eigenvectors() * scaled);
  };

  const Real limit = p0 * (Real(1) + Real(cfg.power_tol));
  if (power(Real(0)) <= limit) {
    out.w = beam(Real(0));
    return out;
  }

  Real lo = Real(0);
  Real hi = std::sqrt(c2) * alpha_norm / std::sqrt(p0);
  for (int k = 0; k < cfg.max_bracket_doublings && power(hi) > p0; ++k) {
    lo = hi;
    hi *= Real(2);
  }

  out.converged = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    out.iterations = it;
    const Real p_hi = power(hi);
    if (p_hi <= p0 && p0 - p_hi <= Real(cfg.power_tol) * p0) {
      out.converged = true;
      break;
    }
    const Real mid = lo + (hi - lo) / Real(2);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted at machine precision
    if (power(mid) > p0)
      lo = mid;
    else
      hi = mid;
  }
  if (!out.converged) {
    const Real p_hi = power(hi);
    out.converged = p_hi <= p0 && p0 - p_hi <= Real(cfg.power_tol) * p0;
  }
  out.lambda = hi;
  out.w = beam(hi);
  return out;
}

}  // namespace irs
