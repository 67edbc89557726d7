#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "irs/phase.hpp"
#include "irs/transceiver.hpp"

namespace irs {

struct AoConfig {
  double eps = 1e-4;  // absolute MSE decrease that ends the outer loop
  double eps_mm = 1e-8;
  int max_outer_iters = 500;
  int max_mm_iters = 1000;
  BisectionConfig bisection;
  double p0 = 1e-2;        // W
  double sigma_n2 = 1e-14; // W
  bool refresh_after_quantization = true;

  void validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("AoConfig: eps must be > 0");
    if (!(eps_mm > 0.0)) throw std::invalid_argument("AoConfig: eps_mm must be > 0");
    if (!(p0 > 0.0)) throw std::invalid_argument("AoConfig: P0 must be > 0");
    if (!(sigma_n2 > 0.0)) throw std::invalid_argument("AoConfig: noise power must be > 0");
    if (max_outer_iters < 1 || max_mm_iters < 0)
      throw std::invalid_argument("AoConfig: iteration caps must be positive");
    bisection.validate();
  }

  MmConfig mm() const { return {eps_mm, max_mm_iters}; }
};

/// MSE after each sub-update of one outer iteration. `after_c` is measured with
/// the Wiener equalizer for the iteration's starting (w, Theta).
struct AoStep {
  double after_c = 0.0;
  double after_w = 0.0;
  double after_theta = 0.0;
};

template <typename Real>
struct AoTrace {
  std::vector<Real> mse;  // mse[0] is the initial point, one entry per outer iteration after that
  std::vector<AoStep> steps;
  Design<Real> design;
  int iterations = 0;
  bool converged = false;
  int beamformer_failures = 0;  // bisection calls that hit their cap
  int mm_cap_hits = 0;          // MM runs that hit max_mm_iters
  // (lambda, |w|^2) returned by every beamformer update, in call order.
  std::vector<std::pair<Real, Real>> multipliers;
};

namespace detail {

template <typename Real>
CVector<Real> initial_beamformer(Eigen::Index m, Real p0) {
  return CVector<Real>::Constant(m, Complex<Real>(std::sqrt(p0 / Real(m)), Real(0)));
}

// Shared tail of the outer loop: stop test on the newest trace entry.
template <typename Real>
bool record_and_check(AoTrace<Real>& trace, Real e_new, double eps) {
  const Real e_old = trace.mse.back();
  trace.mse.push_back(e_new);
  return !(e_old - e_new >= Real(eps));
}

}  // namespace detail

/// Alternating optimization of (c, w, Theta). Each outer iteration updates the
/// Wiener equalizer, then the beamformer, then the phases by MM, in that order.
/// `errs` are absolute error variances; `seed` drives the random initial phases.
template <typename Real>
AoTrace<Real> run_ao(const ChannelEstimate<Real>& est, const ErrorStats<Real>& errs,
                     const SystemDims& dims, const AoConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  est.check(dims);
  if (dims.elements < 1) throw std::invalid_argument("run_ao: at least one surface element is required");
  const Real p0 = static_cast<Real>(cfg.p0);
  const Real noise = static_cast<Real>(cfg.sigma_n2);

  Rng rng(seed);
  PhaseVector<Real> phases = PhaseVector<Real>::random(dims.elements, rng);
  CVector<Real> w = detail::initial_beamformer<Real>(dims.antennas, p0);
  MseQuadratic<Real> q = build_quadratic(est, errs, phases, noise);
  Complex<Real> c = wiener_equalizer(q, w);

  AoTrace<Real> trace;
  trace.mse.push_back(evaluate_mse(q, w, c));
  for (int t = 1; t <= cfg.max_outer_iters; ++t) {
    AoStep step;
    step.after_c = static_cast<double>(trace.mse.back());

    const BeamformerResult<Real> bf = update_beamformer(q, c, p0, cfg.bisection);
    if (!bf.converged) ++trace.beamformer_failures;
    trace.multipliers.emplace_back(bf.lambda, bf.w.squaredNorm());
    w = bf.w;
    step.after_w = static_cast<double>(evaluate_mse(q, w, c));

    const PhaseSubproblem<Real> sub = build_subproblem(est, w, c);
    MmResult<Real> mm = mm_iterate(sub, phases, cfg.mm());
    if (!mm.converged && cfg.max_mm_iters > 0) ++trace.mm_cap_hits;
    phases = std::move(mm.phases);
    q = build_quadratic(est, errs, phases, noise);
    step.after_theta = static_cast<double>(evaluate_mse(q, w, c));

    c = wiener_equalizer(q, w);
    trace.steps.push_back(step);
    trace.iterations = t;
    if (detail::record_and_check(trace, evaluate_mse(q, w, c), cfg.eps)) {
      trace.converged = true;
      break;
    }
  }
  trace.design = {w, c, phases, trace.mse.back()};
  return trace;
}

/// Alternates Wiener equalizer and beamformer updates on a fixed quadratic.
template <typename Real>
AoTrace<Real> run_transceiver(const MseQuadratic<Real>& q, const AoConfig& cfg) {
  cfg.validate();
  const Real p0 = static_cast<Real>(cfg.p0);
  CVector<Real> w = detail::initial_beamformer<Real>(q.antennas(), p0);
  Complex<Real> c = wiener_equalizer(q, w);

  AoTrace<Real> trace;
  trace.mse.push_back(evaluate_mse(q, w, c));
  for (int t = 1; t <= cfg.max_outer_iters; ++t) {
    AoStep step;
    step.after_c = static_cast<double>(trace.mse.back());
    const BeamformerResult<Real> bf = update_beamformer(q, c, p0, cfg.bisection);
    if (!bf.converged) ++trace.beamformer_failures;
    trace.multipliers.emplace_back(bf.lambda, bf.w.squaredNorm());
    w = bf.w;
    step.after_w = static_cast<double>(evaluate_mse(q, w, c));
    step.after_theta = step.after_w;
    c = wiener_equalizer(q, w);
    trace.steps.push_back(step);
    trace.iterations = t;
    if (detail::record_and_check(trace, evaluate_mse(q, w, c), cfg.eps)) {
      trace.converged = true;
      break;
    }
  }
  trace.design = {w, c, PhaseVector<Real>{}, trace.mse.back()};
  return trace;
}

struct SchemeKind {
  enum class Type { kRobust, kNonRobust, kDiscretePhase, kNoIrs };
  Type type = Type::kRobust;
  int bits = 0;  // only for kDiscretePhase

  static SchemeKind robust() { return {Type::kRobust, 0}; }
  static SchemeKind non_robust() { return {Type::kNonRobust, 0}; }
  static SchemeKind discrete(int bits) { return {Type::kDiscretePhase, bits}; }
  static SchemeKind no_irs() { return {Type::kNoIrs, 0}; }

  std::string name() const {
    switch (type) {
      case Type::kRobust: return "robust";
      case Type::kNonRobust: return "nonrobust";
      case Type::kDiscretePhase: return "discrete" + std::to_string(bits);
      case Type::kNoIrs: return "noirs";
    }
    return "unknown";
  }

  /// Accepts the names produced by name().
  static SchemeKind parse(const std::string& s) {
    if (s == "robust") return robust();
    if (s == "nonrobust") return non_robust();
    if (s == "noirs") return no_irs();
    if (s.rfind("discrete", 0) == 0 && s.size() > 8) {
      const std::string digits = s.substr(8);
      if (digits.find_first_not_of("0123456789") == std::string::npos && digits.size() <= 2) {
        const int b = std::stoi(digits);
        if (b >= 1 && b <= 16) return discrete(b);
      }
    }
    throw std::invalid_argument("unknown scheme '" + s + "'");
  }

  bool operator==(const SchemeKind&) const = default;
};

/// Snaps each phase to the nearest point of {2 pi k / 2^bits}; exact ties go
/// to the smaller angle.
template <typename Real>
PhaseVector<Real> quantize_phases(const PhaseVector<Real>& phases, int bits) {
  if (bits < 1) throw std::invalid_argument("quantize_phases: bits must be >= 1");
  const long levels = 1L << bits;
  const Real step = kTwoPi<Real> / Real(levels);
  RVector<Real> theta(phases.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    long k = static_cast<long>(std::ceil(phases[i] / step - Real(0.5)));
    k = ((k % levels) + levels) % levels;
    theta(i) = Real(k) * step;
  }
  return PhaseVector<Real>(std::move(theta));
}

template <typename Real>
struct SchemeOutcome {
  Design<Real> design;
  int iterations = 0;
  bool converged = false;
};

/// Replaces the phases of `design` by their b-bit quantization. If any phase
/// moved and `cfg.refresh_after_quantization` is set, the transceiver is
/// refreshed (equalizer, beamformer, equalizer) before scoring.
template <typename Real>
Design<Real> apply_discrete_phases(const Design<Real>& design, int bits,
                                   const ChannelEstimate<Real>& est, const ErrorStats<Real>& errs,
                                   const AoConfig& cfg) {
  const PhaseVector<Real> snapped = quantize_phases(design.phases, bits);
  if (snapped == design.phases) return design;
  const Real noise = static_cast<Real>(cfg.sigma_n2);
  const MseQuadratic<Real> q = build_quadratic(est, errs, snapped, noise);
  Design<Real> out{design.w, design.c, snapped, Real(0)};
  if (cfg.refresh_after_quantization) {
    out.c = wiener_equalizer(q, out.w);
    out.w = update_beamformer(q, out.c, static_cast<Real>(cfg.p0), cfg.bisection).w;
    out.c = wiener_equalizer(q, out.w);
  }
  out.mse = evaluate_mse(q, out.w, out.c);
  return out;
}

/// Robust and DiscretePhase(b) share one robust AO run; this scores either from it.
template <typename Real>
SchemeOutcome<Real> score_from_robust(const SchemeKind& kind, const AoTrace<Real>& tr,
                                      const ChannelEstimate<Real>& est, const ErrorStats<Real>& errs,
                                      const AoConfig& cfg) {
  if (kind.type == SchemeKind::Type::kDiscretePhase)
    return {apply_discrete_phases(tr.design, kind.bits, est, errs, cfg), tr.iterations, tr.converged};
  if (kind.type != SchemeKind::Type::kRobust)
    throw std::invalid_argument("score_from_robust: scheme does not use the robust design");
  return {tr.design, tr.iterations, tr.converged};
}

/// Runs one comparison scheme. Every design is scored with the true (absolute)
/// error variances `errs`.
template <typename Real>
SchemeOutcome<Real> run_scheme(const SchemeKind& kind, const ChannelEstimate<Real>& est,
                               const ErrorStats<Real>& errs, const SystemDims& dims,
                               const AoConfig& cfg, std::uint64_t seed) {
  const Real noise = static_cast<Real>(cfg.sigma_n2);
  switch (kind.type) {
    case SchemeKind::Type::kRobust:
    case SchemeKind::Type::kDiscretePhase:
      return score_from_robust(kind, run_ao(est, errs, dims, cfg, seed), est, errs, cfg);
    case SchemeKind::Type::kNonRobust: {
      AoTrace<Real> tr = run_ao(est, ErrorStats<Real>{}, dims, cfg, seed);
      Design<Real> d = std::move(tr.design);
      d.mse = evaluate_mse(build_quadratic(est, errs, d.phases, noise), d.w, d.c);
      return {std::move(d), tr.iterations, tr.converged};
    }
    case SchemeKind::Type::kNoIrs: {
      cfg.validate();
      if (est.h_d.size() != dims.antennas)
        throw std::invalid_argument("run_scheme: direct channel length does not match antennas");
      AoTrace<Real> tr = run_transceiver(build_direct_quadratic(est.h_d, errs.sigma_d2, noise), cfg);
      return {std::move(tr.design), tr.iterations, tr.converged};
    }
  }
  throw std::invalid_argument("run_scheme: unknown scheme");
}

}  // namespace irs
