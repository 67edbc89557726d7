#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "irs/types.hpp"

namespace irs {

/// Name of the only generator the harness accepts in its config.
inline constexpr const char* kRngName = "mt19937_64";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based substream split: the derived seed depends only on the
/// master seed and the key path, never on the order streams are requested.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ull));
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  template <typename Real>
  Complex<Real> complex_normal(Real variance = Real(1)) {
    const Real scale = std::sqrt(variance / Real(2));
    const Real re = static_cast<Real>(normal_(engine_));
    const Real im = static_cast<Real>(normal_(engine_));
    return {scale * re, scale * im};
  }

  template <typename Real>
  Real uniform(Real lo, Real hi) {
    return std::uniform_real_distribution<Real>(lo, hi)(engine_);
  }

  template <typename Real>
  CVector<Real> complex_normal_vector(Eigen::Index n, Real variance = Real(1)) {
    CVector<Real> v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal<Real>(variance);
    return v;
  }

  template <typename Real>
  CMatrix<Real> complex_normal_matrix(Eigen::Index rows, Eigen::Index cols,
                                      Real variance = Real(1)) {
    CMatrix<Real> m(rows, cols);
    // Column-major fill so the draw order matches Eigen's storage.
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal<Real>(variance);
    return m;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace irs
