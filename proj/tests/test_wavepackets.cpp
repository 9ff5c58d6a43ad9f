#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "photon_dimer/wavepackets.hpp"

using namespace photon_dimer;

TEST_CASE("all three profiles are normalized on the module quadrature") {
  for (auto shape : {PulseShape::gaussian, PulseShape::lorentzian, PulseShape::rising}) {
    auto p = make_profile(shape, 0.5, 0.005);
    CHECK(profile_norm(p) == Catch::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("momentum amplitude values") {
  const double sigma = 0.005;
  auto g = make_profile(PulseShape::gaussian, 1.0, sigma);
  CHECK(momentum_amplitude(g, 1.0).real() ==
        Catch::Approx(std::pow(2 * pi * sigma * sigma, -0.25)).epsilon(1e-13));
  CHECK(std::abs(momentum_amplitude(g, 1.0 + 6 * sigma)) ==
        Catch::Approx(std::exp(-9.0) * std::pow(2 * pi * sigma * sigma, -0.25)).epsilon(1e-12));

  auto r = make_profile(PulseShape::rising, 0.0, sigma);
  CHECK(momentum_amplitude(r, 0.0).real() ==
        Catch::Approx(std::sqrt(2 / (pi * sigma))).epsilon(1e-13));

  CHECK_THROWS_AS(make_profile(PulseShape::gaussian, 0, 0.0), std::domain_error);
}

TEST_CASE("overlap normalization M2") {
  const double sigma = 0.005;
  auto a = make_profile(PulseShape::gaussian, 0.3, sigma);
  CHECK(make_two_photon_input(a, a).m2 == Catch::Approx(2.0).epsilon(1e-12));

  auto far = make_profile(PulseShape::gaussian, 0.3 + 20 * sigma, sigma);
  CHECK(make_two_photon_input(a, far).m2 == Catch::Approx(1.0).margin(1e-10));

  // overlap^2 = 1/2 at dk = 2 sigma sqrt(ln 2)
  auto half = make_profile(PulseShape::gaussian, 0.3 + 2 * sigma * std::sqrt(std::log(2.0)), sigma);
  CHECK(make_two_photon_input(a, half).m2 == Catch::Approx(1.5).epsilon(1e-10));

  // analytic gaussian overlap exp(-dk^2 / 8 sigma^2)
  for (double n : {1.0, 3.0, 6.0}) {
    auto b = make_profile(PulseShape::gaussian, 0.3 + n * sigma, sigma);
    auto in = make_two_photon_input(a, b);
    CHECK(std::abs(in.overlap) == Catch::Approx(std::exp(-n * n / 8)).epsilon(1e-10));
  }
}

TEST_CASE("position amplitudes match the numeric transform") {
  const double sigma = 0.01;
  // truncating the heavy momentum tails limits the oscillatory transforms
  auto tol = [](PulseShape s) {
    return s == PulseShape::gaussian ? 1e-6 : (s == PulseShape::lorentzian ? 1e-5 : 1e-3);
  };
  for (auto shape : {PulseShape::gaussian, PulseShape::lorentzian, PulseShape::rising}) {
    auto p = make_profile(shape, 0.7, sigma);
    for (double x : {-40.0, 15.0, 90.0}) {
      auto num = integrate_profile(p, [&](double k) {
        return momentum_amplitude(p, k) * std::exp(complex_t(0, k * x)) / std::sqrt(2 * pi);
      }, {}, {}, /*tails=*/false);
      CHECK(std::abs(num.value - position_amplitude(p, x)) < tol(shape));
    }
  }
}

TEST_CASE("initial correlations") {
  const double sigma = 0.005;
  auto mk = [&](double dk) {
    return make_two_photon_input(make_profile(PulseShape::gaussian, 0.5 * dk, sigma),
                                 make_profile(PulseShape::gaussian, -0.5 * dk, sigma));
  };
  CHECK(initial_g2(mk(0.0), 0, 0) == Catch::Approx(0.5).epsilon(1e-10));
  double far = initial_g2(mk(20 * sigma), 0, 0);
  CHECK(far >= 0.99);
  CHECK(far <= 1.0 + 1e-12);

  // monotone decreasing in M2, and matching the closed form M2/(1+sqrt(M2-1))^2
  double prev_g2 = 2, prev_m2 = 0;
  for (int i = 0; i < 50; ++i) {
    double dk = (8.0 * (49 - i) / 49 + 0.01) * sigma;  // decreasing dk -> increasing M2
    auto in = mk(dk);
    double g2 = initial_g2(in, 0, 0);
    CHECK(in.m2 >= prev_m2);
    CHECK(g2 <= prev_g2 + 1e-12);
    CHECK(g2 == Catch::Approx(in.m2 / std::pow(1 + std::sqrt(in.m2 - 1), 2)).epsilon(1e-8));
    prev_g2 = g2;
    prev_m2 = in.m2;
  }
}
