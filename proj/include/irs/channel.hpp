#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "irs/random.hpp"
#include "irs/types.hpp"

namespace irs {

/// Antenna count at the access point and element count at the surface.
/// elements == 0 means no surface is deployed.
struct SystemDims {
  int antennas = 4;
  int elements = 40;

  void validate() const {
    if (antennas < 1) throw std::invalid_argument("SystemDims: antennas must be >= 1");
    if (elements < 0) throw std::invalid_argument("SystemDims: elements must be >= 0");
  }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct Geometry {
  Point2 ap{0.0, 0.0};
  Point2 irs{100.0, 0.0};
  Point2 user{100.0, 20.0};

  double ap_irs() const { return distance(ap, irs); }
  double irs_user() const { return distance(irs, user); }
  double ap_user() const { return distance(ap, user); }

  void validate() const {
    if (!(ap_irs() > 0.0) || !(irs_user() > 0.0) || !(ap_user() > 0.0))
      throw std::invalid_argument("Geometry: node positions must be pairwise distinct");
  }
};

struct FadingParams {
  double reference_loss = 1e-3;  // linear, at 1 m
  double alpha_los = 2.0;
  double alpha_nlos = 3.0;
  double rician_k = 10.0;  // linear

  void validate() const {
    if (!(reference_loss > 0.0)) throw std::invalid_argument("FadingParams: reference loss must be > 0");
    if (!(alpha_los >= 0.0) || !(alpha_nlos >= 0.0))
      throw std::invalid_argument("FadingParams: path loss exponents must be >= 0");
    if (!(rician_k >= 0.0)) throw std::invalid_argument("FadingParams: Rician factor must be >= 0");
  }
};

/// Large-scale gain L0 * d^-alpha.
template <typename Real = double>
Real path_loss(Real d, Real alpha, Real reference_loss) {
  if (!(d > Real(0))) throw std::invalid_argument("path_loss: distance must be > 0");
  return reference_loss * std::pow(d, -alpha);
}

/// Linear power gains of the three links.
struct LinkGains {
  double ap_irs = 1.0;
  double irs_user = 1.0;
  double ap_user = 1.0;
};

inline LinkGains link_gains(const Geometry& geo, const FadingParams& fading) {
  return {path_loss(geo.ap_irs(), fading.alpha_los, fading.reference_loss),
          path_loss(geo.irs_user(), fading.alpha_los, fading.reference_loss),
          path_loss(geo.ap_user(), fading.alpha_nlos, fading.reference_loss)};
}

/// Channel estimates available to the designer. G is elements x antennas
/// (AP to surface), h_r has one entry per element, h_d one per antenna.
template <typename Real>
struct ChannelEstimate {
  CMatrix<Real> G;
  CVector<Real> h_r;
  CVector<Real> h_d;

  int antennas() const { return static_cast<int>(h_d.size()); }
  int elements() const { return static_cast<int>(h_r.size()); }

  void check(const SystemDims& dims) const {
    if (h_d.size() != dims.antennas || h_r.size() != dims.elements ||
        G.rows() != dims.elements || (dims.elements > 0 && G.cols() != dims.antennas))
      throw std::invalid_argument("ChannelEstimate: dimensions do not match SystemDims");
    if (!G.allFinite() || !h_r.allFinite() || !h_d.allFinite())
      throw std::invalid_argument("ChannelEstimate: non-finite entry");
  }
};

/// Per-entry complex Gaussian error variances. Depending on context these are
/// either relative to the link gain or absolute; see absolute_error_stats().
template <typename Real>
struct ErrorStats {
  Real sigma_g2 = Real(0);
  Real sigma_r2 = Real(0);
  Real sigma_d2 = Real(0);

  static ErrorStats uniform(Real sigma2) { return {sigma2, sigma2, sigma2}; }

  bool perfect() const {
    return sigma_g2 == Real(0) && sigma_r2 == Real(0) && sigma_d2 == Real(0);
  }

  void validate() const {
    if (!(sigma_g2 >= 0) || !(sigma_r2 >= 0) || !(sigma_d2 >= 0))
      throw std::invalid_argument("ErrorStats: variances must be >= 0");
  }
};

/// Converts relative error powers into absolute per-entry variances
/// (sigma^2 times the large-scale gain of the corresponding link).
template <typename Real>
ErrorStats<Real> absolute_error_stats(const ErrorStats<Real>& relative, const LinkGains& gains) {
  relative.validate();
  return {relative.sigma_g2 * Real(gains.ap_irs), relative.sigma_r2 * Real(gains.irs_user),
          relative.sigma_d2 * Real(gains.ap_user)};
}

template <typename Real>
struct ChannelError {
  CMatrix<Real> dG;
  CVector<Real> dh_r;
  CVector<Real> dh_d;
};

namespace detail {

// Half-wavelength ULA laid out along the y axis; the angle is measured from
// broadside (+x), so sin(angle) = dy / distance.
template <typename Real>
CVector<Real> ula_response(int n, const Point2& from, const Point2& to) {
  const double sin_angle = (to.y - from.y) / distance(from, to);
  CVector<Real> a(n);
  for (int i = 0; i < n; ++i)
    a(i) = std::polar(Real(1), static_cast<Real>(std::numbers::pi * i * sin_angle));
  return a;
}

enum class Stream : std::uint64_t { kApIrs = 1, kIrsUser = 2, kApUser = 3 };

}  // namespace detail

/// Deterministic line-of-sight components (unit-modulus entries).
template <typename Real>
CMatrix<Real> los_ap_irs(const SystemDims& dims, const Geometry& geo) {
  CVector<Real> arrival = detail::ula_response<Real>(dims.elements, geo.irs, geo.ap);
  CVector<Real> departure = detail::ula_response<Real>(dims.antennas, geo.ap, geo.irs);
  return arrival * departure.adjoint();
}

template <typename Real>
CVector<Real> los_irs_user(const SystemDims& dims, const Geometry& geo) {
  return detail::ula_response<Real>(dims.elements, geo.irs, geo.user);
}

/// Rician AP-surface and surface-user links, Rayleigh direct link. Each link
/// uses its own substream of `seed`, so the direct link does not depend on the
/// element count.
template <typename Real = double>
ChannelEstimate<Real> draw_channels(const SystemDims& dims, const Geometry& geo,
                                    const FadingParams& fading, std::uint64_t seed) {
  dims.validate();
  geo.validate();
  fading.validate();
  const LinkGains gains = link_gains(geo, fading);
  const Real k = static_cast<Real>(fading.rician_k);
  const Real los_weight = std::sqrt(k / (k + Real(1)));
  const Real nlos_weight = std::sqrt(Real(1) / (k + Real(1)));

  ChannelEstimate<Real> est;
  Rng g_rng(derive_seed(seed, {static_cast<std::uint64_t>(detail::Stream::kApIrs)}));
  Rng r_rng(derive_seed(seed, {static_cast<std::uint64_t>(detail::Stream::kIrsUser)}));
  Rng d_rng(derive_seed(seed, {static_cast<std::uint64_t>(detail::Stream::kApUser)}));

  // Scattered part filled one element (row) at a time: a draw for N elements
  // is the leading block of a draw for more elements with the same seed.
  CMatrix<Real> scatter(dims.elements, dims.antennas);
  for (int i = 0; i < dims.elements; ++i)
    for (int j = 0; j < dims.antennas; ++j) scatter(i, j) = g_rng.complex_normal<Real>();
  est.G = std::sqrt(Real(gains.ap_irs)) *
          (los_weight * los_ap_irs<Real>(dims, geo) + nlos_weight * scatter);
  est.h_r = std::sqrt(Real(gains.irs_user)) *
            (los_weight * los_irs_user<Real>(dims, geo) +
             nlos_weight * r_rng.complex_normal_vector<Real>(dims.elements));
  est.h_d = std::sqrt(Real(gains.ap_user)) * d_rng.complex_normal_vector<Real>(dims.antennas);
  return est;
}

/// Draws one CSI error realization. `relative` holds error powers relative to
/// the link gains; the per-entry variance is sigma^2 * L(link).
template <typename Real = double>
ChannelError<Real> draw_errors(const SystemDims& dims, const ErrorStats<Real>& relative,
                               const LinkGains& gains, std::uint64_t seed) {
  dims.validate();
  const ErrorStats<Real> abs = absolute_error_stats(relative, gains);
  Rng rng(seed);
  ChannelError<Real> err;
  err.dG = rng.complex_normal_matrix<Real>(dims.elements, dims.antennas, abs.sigma_g2);
  err.dh_r = rng.complex_normal_vector<Real>(dims.elements, abs.sigma_r2);
  err.dh_d = rng.complex_normal_vector<Real>(dims.antennas, abs.sigma_d2);
  return err;
}

}  // namespace irs
