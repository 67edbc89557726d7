#include <doctest.h>

#include <cmath>

#include "irs/channel.hpp"
#include "test_util.hpp"

using namespace irs;

TEST_CASE("path loss") {
  CHECK(path_loss(1.0, 2.0, 1e-3) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(path_loss(1.0, 3.7, 1e-3) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(path_loss(100.0, 2.0, 1e-3) == doctest::Approx(1e-7).epsilon(1e-14));
  CHECK(path_loss(1.0, 0.0, 1.0) == 1.0);
  CHECK(path_loss(37.0, 3.0, 2.0) > 0.0);
  CHECK_THROWS_AS(path_loss(0.0, 2.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(path_loss(-5.0, 2.0, 1e-3), std::invalid_argument);
}

TEST_CASE("default geometry link gains") {
  const LinkGains g = link_gains(Geometry{}, FadingParams{});
  CHECK(g.ap_irs == doctest::Approx(1e-7).epsilon(1e-12));
  CHECK(g.irs_user == doctest::Approx(1e-3 / 400.0).epsilon(1e-12));
  CHECK(g.ap_user == doctest::Approx(1e-3 * std::pow(10400.0, -1.5)).epsilon(1e-12));
}

TEST_CASE("precondition checks") {
  CHECK_THROWS(SystemDims{0, 4}.validate());
  CHECK_THROWS(SystemDims{2, -1}.validate());
  Geometry g;
  g.user = g.irs;
  CHECK_THROWS(g.validate());
  FadingParams f;
  f.reference_loss = 0.0;
  CHECK_THROWS(f.validate());
  f = {};
  f.rician_k = -1.0;
  CHECK_THROWS(f.validate());
  CHECK_THROWS(ErrorStats<double>{-0.1, 0.0, 0.0}.validate());
}

TEST_CASE("Rician limit recovers the line-of-sight component") {
  const SystemDims dims{4, 8};
  const Geometry geo;
  FadingParams fading;
  fading.rician_k = 1e9;
  const auto est = draw_channels<double>(dims, geo, fading, 99);
  const LinkGains gains = link_gains(geo, fading);
  const CMatrix<double> los_g = std::sqrt(gains.ap_irs) * los_ap_irs<double>(dims, geo);
  const CVector<double> los_r = std::sqrt(gains.irs_user) * los_irs_user<double>(dims, geo);
  CHECK((est.G - los_g).norm() / los_g.norm() < 1e-4);
  CHECK((est.h_r - los_r).norm() / los_r.norm() < 1e-4);
  // LoS entries are unit modulus before path loss.
  CHECK(los_ap_irs<double>(dims, geo).cwiseAbs().minCoeff() == doctest::Approx(1.0));
}

TEST_CASE("Rayleigh surface link has per-entry power L(d)") {
  const SystemDims dims{1, 1};
  const Geometry geo;
  FadingParams fading;
  fading.rician_k = 0.0;
  const double expected = link_gains(geo, fading).irs_user;
  const int draws = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < draws; ++t) {
    const double p = std::norm(draw_channels<double>(dims, geo, fading, 1000 + t).h_r(0));
    sum += p;
    sum_sq += p * p;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("every link has average entry power L(link) at the default K") {
  const SystemDims dims{1, 1};
  const Geometry geo;
  const FadingParams fading;
  const LinkGains gains = link_gains(geo, fading);
  const int draws = 100000;
  double s[3] = {0, 0, 0}, s2[3] = {0, 0, 0};
  for (int t = 0; t < draws; ++t) {
    const auto est = draw_channels<double>(dims, geo, fading, derive_seed(5, {std::uint64_t(t)}));
    const double p[3] = {std::norm(est.G(0, 0)), std::norm(est.h_r(0)), std::norm(est.h_d(0))};
    for (int k = 0; k < 3; ++k) {
      s[k] += p[k];
      s2[k] += p[k] * p[k];
    }
  }
  const double expected[3] = {gains.ap_irs, gains.irs_user, gains.ap_user};
  for (int k = 0; k < 3; ++k) {
    const double mean = s[k] / draws;
    const double se = std::sqrt((s2[k] / draws - mean * mean) / draws);
    CAPTURE(k);
    CHECK(std::abs(mean - expected[k]) < 3.0 * se);
  }
}

TEST_CASE("scattered part of the Rician link is zero-mean with unit power") {
  const SystemDims dims{2, 3};
  const Geometry geo;
  const FadingParams fading;
  const LinkGains gains = link_gains(geo, fading);
  const double k = fading.rician_k;
  const CMatrix<double> los = los_ap_irs<double>(dims, geo);
  const int draws = 20000;
  Complex<double> mean(0.0);
  double power = 0.0;
  for (int t = 0; t < draws; ++t) {
    const auto est = draw_channels<double>(dims, geo, fading, 7000 + t);
    const CMatrix<double> scatter =
        (est.G / std::sqrt(gains.ap_irs) - std::sqrt(k / (k + 1)) * los) * std::sqrt(k + 1);
    mean += scatter.mean();
    power += scatter.cwiseAbs2().mean();
  }
  mean /= double(draws);
  power /= double(draws);
  // 6 entries per draw; SE of the entry mean is 1/sqrt(6 * draws).
  CHECK(std::abs(mean) < 3.0 / std::sqrt(6.0 * draws));
  CHECK(power == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("channel draws are deterministic per seed") {
  const SystemDims dims{4, 16};
  const auto a = draw_channels<double>(dims, Geometry{}, FadingParams{}, 12345);
  const auto b = draw_channels<double>(dims, Geometry{}, FadingParams{}, 12345);
  const auto c = draw_channels<double>(dims, Geometry{}, FadingParams{}, 12346);
  CHECK(a.G == b.G);
  CHECK(a.h_r == b.h_r);
  CHECK(a.h_d == b.h_d);
  CHECK(a.h_d != c.h_d);
  CHECK_NOTHROW(a.check(dims));
}

TEST_CASE("a smaller surface is the leading block of a larger one") {
  const auto small = draw_channels<double>({4, 10}, Geometry{}, FadingParams{}, 3);
  const auto large = draw_channels<double>({4, 60}, Geometry{}, FadingParams{}, 3);
  CHECK(small.G == large.G.topRows(10));
  CHECK(small.h_r == large.h_r.head(10));
  CHECK(small.h_d == large.h_d);
  const auto none = draw_channels<double>({4, 0}, Geometry{}, FadingParams{}, 3);
  CHECK(none.h_d == large.h_d);
  CHECK(none.G.size() == 0);
}

TEST_CASE("zero error variances draw all-zero errors") {
  const auto e = draw_errors<double>({4, 8}, ErrorStats<double>{}, LinkGains{}, 1);
  CHECK(e.dG.isZero(0.0));
  CHECK(e.dh_r.isZero(0.0));
  CHECK(e.dh_d.isZero(0.0));
}

TEST_CASE("error variance matches sigma^2 times link gain") {
  SUBCASE("unit gain, 10^6 entries") {
    const auto e = draw_errors<double>({1000, 1000}, ErrorStats<double>{0.05, 0.0, 0.0}, LinkGains{}, 8);
    const double var = e.dG.cwiseAbs2().mean();
    CHECK(var > 0.05 * 0.99);
    CHECK(var < 0.05 * 1.01);
    CHECK(std::abs(e.dG.mean()) < 3.0 * std::sqrt(0.05 / 1e6));
  }
  SUBCASE("relative convention scales by L(link)") {
    const LinkGains gains{1e-7, 2.5e-6, 1e-9};
    const auto e = draw_errors<double>({200, 500}, ErrorStats<double>::uniform(0.05), gains, 9);
    CHECK(e.dG.cwiseAbs2().mean() == doctest::Approx(0.05 * 1e-7).epsilon(0.01));
    const auto abs = absolute_error_stats(ErrorStats<double>::uniform(0.05), gains);
    CHECK(abs.sigma_r2 == doctest::Approx(0.05 * 2.5e-6));
    CHECK(abs.sigma_d2 == doctest::Approx(0.05 * 1e-9));
  }
}

TEST_CASE("errors on different links are uncorrelated") {
  const int draws = 100000;
  Complex<double> sum(0.0);
  double sum_sq = 0.0;
  for (int t = 0; t < draws; ++t) {
    const auto e = draw_errors<double>({2, 2}, ErrorStats<double>::uniform(1.0), LinkGains{},
                                       derive_seed(17, {std::uint64_t(t)}));
    const Complex<double> x = e.dG(0, 0) * std::conj(e.dh_d(0));
    sum += x;
    sum_sq += std::norm(x);
  }
  const Complex<double> mean = sum / double(draws);
  const double se = std::sqrt((sum_sq / draws - std::norm(mean)) / draws);
  CHECK(std::abs(mean) < 3.0 * se);
}

TEST_CASE("substream seeds depend on every key") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(2, {2, 3}));
  CHECK(derive_seed(1, {2}) != derive_seed(1, {2, 0}));
}
