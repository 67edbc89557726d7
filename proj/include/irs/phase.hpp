#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "irs/mse.hpp"

namespace irs {

/// Unit-modulus QCQP  min_v v^H Q v - 2 Re(v^H q),  |v_n| = 1,
/// with Q = Phi Phi^H and q = Phi (1 - conj(d)).
template <typename Real>
struct PhaseSubproblem {
  CVector<Real> Phi;
  Complex<Real> d{0, 0};
  CMatrix<Real> Q;
  CVector<Real> q;

  Eigen::Index size() const { return Phi.size(); }
};

/// Phi = diag(h_r^H) G w c, d = h_d^H w c.
template <typename Real>
PhaseSubproblem<Real> build_subproblem(const ChannelEstimate<Real>& est, const CVector<Real>& w,
                                       Complex<Real> c) {
  if (est.elements() < 1) throw std::invalid_argument("build_subproblem: no surface elements");
  if (w.size() != est.antennas() || est.G.cols() != w.size())
    throw std::invalid_argument("build_subproblem: beamformer length does not match antenna count");
  PhaseSubproblem<Real> sub;
  sub.Phi = est.h_r.conjugate().cwiseProduct(est.G * w) * c;
  sub.d = est.h_d.dot(w) * c;
  sub.Q = sub.Phi * sub.Phi.adjoint();
  sub.q = sub.Phi * (Real(1) - std::conj(sub.d));
  return sub;
}

/// Largest eigenvalue of the rank-one Q, i.e. |Phi|^2.
template <typename Real>
Real lambda_max_rank1(const PhaseSubproblem<Real>& sub) {
  return sub.Phi.squaredNorm();
}

/// f(v) = v^H Q v - 2 Re(v^H q), evaluated through Phi.
template <typename Real>
Real phase_objective(const PhaseSubproblem<Real>& sub, const CVector<Real>& v) {
  return std::norm(sub.Phi.dot(v)) - Real(2) * std::real(v.dot(sub.q));
}

template <typename Real>
Real phase_objective(const PhaseSubproblem<Real>& sub, const PhaseVector<Real>& phases) {
  return phase_objective(sub, phases.reflection());
}

/// Surrogate of f at v_k with H = lambda_max(Q) I:
///   g(v, v_k) = v^H H v + 2 Re(v^H (Q - H) v_k) + v_k^H (H - Q) v_k - 2 Re(v^H q).
/// g >= f everywhere and g(v_k, v_k) = f(v_k).
template <typename Real>
Real phase_surrogate(const PhaseSubproblem<Real>& sub, const CVector<Real>& v,
                     const CVector<Real>& vk) {
  const Real lmax = lambda_max_rank1(sub);
  const CVector<Real> shifted = sub.Q * vk - lmax * vk;  // (Q - H) v_k
  return lmax * v.squaredNorm() + Real(2) * std::real(v.dot(shifted)) -
         std::real(vk.dot(shifted)) - Real(2) * std::real(v.dot(sub.q));
}

/// u = (Q - lambda_max I) v - q, using the rank-one form of Q.
template <typename Real>
CVector<Real> majorizer_direction(const PhaseSubproblem<Real>& sub, const CVector<Real>& v) {
  const Real lmax = lambda_max_rank1(sub);
  return sub.Phi * sub.Phi.dot(v) - lmax * v - sub.q;
}

/// One MM update v_n <- -exp(j arg u_n); coordinates with u_n = 0 keep their value.
template <typename Real>
CVector<Real> mm_update(const PhaseSubproblem<Real>& sub, const CVector<Real>& v) {
  const CVector<Real> u = majorizer_direction(sub, v);
  CVector<Real> next = v;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (std::abs(u(i)) != Real(0)) next(i) = -std::polar(Real(1), std::arg(u(i)));
  return next;
}

template <typename Real>
struct MmResult {
  PhaseVector<Real> phases;
  std::vector<Real> objective;  // f(v_0), f(v_1), ...
  int iterations = 0;
  bool converged = false;
};

struct MmConfig {
  double eps_mm = 1e-8;
  int max_iters = 1000;
};

/// Majorization-minimization from `start` until the decrease of f falls below
/// eps_mm or max_iters updates have been taken.
template <typename Real>
MmResult<Real> mm_iterate(const PhaseSubproblem<Real>& sub, const PhaseVector<Real>& start,
                          const MmConfig& cfg = {}) {
  if (start.size() != sub.size())
    throw std::invalid_argument("mm_iterate: start phase count does not match subproblem");
  MmResult<Real> out;
  PhaseVector<Real> current = start;
  CVector<Real> v = current.reflection();
  Real f = phase_objective(sub, v);
  out.objective.push_back(f);
  for (int k = 1; k <= cfg.max_iters; ++k) {
    PhaseVector<Real> next = PhaseVector<Real>::from_reflection(mm_update(sub, v));
    const CVector<Real> v_next = next.reflection();
    const Real f_next = phase_objective(sub, v_next);
    out.iterations = k;
    out.objective.push_back(f_next);
    const Real decrease = f - f_next;
    current = std::move(next);
    v = v_next;
    f = f_next;
    if (decrease < Real(cfg.eps_mm)) {
      out.converged = true;
      break;
    }
  }
  out.phases = std::move(current);
  return out;
}

}  // namespace irs
