#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <tuple>

#include "photon_dimer/observables.hpp"

using namespace photon_dimer;

namespace {

DimerParams symmetric(double u, double v2 = 0.04) {
  DimerParams p;
  p.u1 = p.u2 = u;
  p.v1 = p.v2 = std::sqrt(v2);
  return validate(p);
}

TwoPhotonInput gauss_input(double k1, double k2, double sigma = 0.005) {
  return make_two_photon_input(make_profile(PulseShape::gaussian, k1, sigma),
                               make_profile(PulseShape::gaussian, k2, sigma));
}

// Reference denominator: explicit x-grid Simpson integration of
// |Phi_LR(x,0)|^2 + 2 |Phi_RR(x,0)|^2 with the same shell kernel, independent
// of the closed-form half-line reduction used in production.
double denominator_flux_grid(const DimerParams& p, const TwoPhotonInput& in,
                             const QuadPolicy& pol = {}) {
  QuadDiagnostics diag;
  QuadOptions opt{pol.rel_tol, pol.abs_tol};
  auto ker = build_shell_kernel(p, in, pol, &diag);
  const double s2 = std::sqrt(2.0);
  const complex_t f1t = smear_coeff0(p, in.xi1, Coef::trans, &diag, opt);
  const complex_t f2t = smear_coeff0(p, in.xi2, Coef::trans, &diag, opt);

  struct Table {
    std::vector<complex_t> val;   // w * xi(k) * coef(k)
    std::vector<complex_t> rot;   // e^{i k h}, incremental phase per step
    std::vector<complex_t> cur;   // e^{i k x} at the current grid point
  };
  const double gate0 = feature_scale_hint(p, 1.0);
  const double sigma0 = std::max(in.xi1.sigma, in.xi2.sigma);
  const double x_max = 4.0 / sigma0 + 15.0 / gate0;
  const double h = 1.0 / 48;
  auto make_table = [&](const PulseProfile& xi, Coef c) {
    FixedGrid g;
    const int nodes = std::max(320, static_cast<int>(xi.central_radius() * x_max) + 64);
    g.append_gl(xi.k0 - xi.central_radius(), xi.k0 + xi.central_radius(), nodes);
    Table t;
    for (std::size_t i = 0; i < g.size(); ++i) {
      t.val.push_back(g.w[i] * momentum_amplitude(xi, g.x[i]) * coef_value(p, c, g.x[i]));
      t.rot.push_back(std::exp(complex_t(0, g.x[i] * h)));
      t.cur.push_back(std::exp(complex_t(0, g.x[i] * -x_max)));
    }
    return t;
  };
  Table w1r = make_table(in.xi1, Coef::refl), w2r = make_table(in.xi2, Coef::refl);
  Table w1t = make_table(in.xi1, Coef::trans), w2t = make_table(in.xi2, Coef::trans);
  auto eval = [](Table& t) {
    complex_t s = 0;
    for (std::size_t i = 0; i < t.val.size(); ++i) s += t.val[i] * t.cur[i];
    return s;
  };
  auto advance = [](Table& t) {
    for (std::size_t i = 0; i < t.val.size(); ++i) t.cur[i] *= t.rot[i];
  };
  // incremental phases for the E-grid of the bound kernels
  std::vector<complex_t> erot(ker.e.size()), ecur(ker.e.size());
  for (std::size_t m = 0; m < ker.e.size(); ++m) {
    erot[m] = std::exp(complex_t(0, ker.e.x[m] * h));
    ecur[m] = std::exp(complex_t(0, ker.e.x[m] * -x_max));
  }
  complex_t il_lr1_m = 0, il_lr1_p = 0, il_rr_m = 0, il_rr_p = 0;
  for (std::size_t m = 0; m < ker.e.size(); ++m) {
    il_lr1_m += ker.e.w[m] * ker.b_lr1_m[m];
    il_lr1_p += ker.e.w[m] * ker.b_lr1_p[m];
    il_rr_m += ker.e.w[m] * ker.b_rr_m[m];
    il_rr_p += ker.e.w[m] * ker.b_rr_p[m];
  }
  auto bnd = [&](complex_t il_m, complex_t il_p, const std::vector<complex_t>& br_m,
                 const std::vector<complex_t>& br_p, double x) {
    if (x < 0)
      return il_m * std::exp(complex_t(0, 1) * ker.mu_m * x) +
             il_p * std::exp(complex_t(0, 1) * ker.mu_p * x);
    complex_t bm = 0, bp = 0;
    for (std::size_t m = 0; m < ker.e.size(); ++m) {
      bm += ker.e.w[m] * br_m[m] * ecur[m];
      bp += ker.e.w[m] * br_p[m] * ecur[m];
    }
    return bm * std::exp(complex_t(0, -1) * ker.mu_m * x) +
           bp * std::exp(complex_t(0, -1) * ker.mu_p * x);
  };

  std::size_t n = static_cast<std::size_t>(2 * x_max / h);
  if (n % 2 == 1) ++n;
  double acc = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = -x_max + i * h;
    complex_t phi_lr = (f1t * eval(w2r) + f2t * eval(w1r) +
                        bnd(il_lr1_m, il_lr1_p, ker.b_lr2_m, ker.b_lr2_p, x)) /
                       (2 * pi);
    complex_t phi_rr = (f1t * eval(w2t) + f2t * eval(w1t) +
                        bnd(il_rr_m, il_rr_p, ker.b_rr_m, ker.b_rr_p, x)) /
                       (s2 * 2 * pi);
    double integrand = std::norm(phi_lr) + 2 * std::norm(phi_rr);
    double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    acc += w * integrand;
    advance(w1r);
    advance(w2r);
    advance(w1t);
    advance(w2t);
    for (std::size_t m = 0; m < ker.e.size(); ++m) ecur[m] *= erot[m];
  }
  return acc * h / 3;
}

}  // namespace

TEST_CASE("linear limit: probabilities factorize and conserve flux") {
  auto p0 = symmetric(0.0);
  auto in = gauss_input(3.0, -1.0);
  auto r = scattering_probabilities(p0, in);
  CHECK(r.flux_total == Catch::Approx(1.0).epsilon(1e-6));
  double t1 = smear_pair(p0, in.xi1, Coef::trans, in.xi1, Coef::trans).real();
  double t2 = smear_pair(p0, in.xi2, Coef::trans, in.xi2, Coef::trans).real();
  double r1 = smear_pair(p0, in.xi1, Coef::refl, in.xi1, Coef::refl).real();
  double r2 = smear_pair(p0, in.xi2, Coef::refl, in.xi2, Coef::refl).real();
  CHECK(r.p_rr == Catch::Approx(t1 * t2).margin(1e-8));
  CHECK(r.p_ll == Catch::Approx(r1 * r2).epsilon(1e-6));
  CHECK(r.p_lr == Catch::Approx(r1 * t2 + r2 * t1).epsilon(1e-6));
}

TEST_CASE("interacting probabilities: frozen references and conservation") {
  auto p1 = symmetric(1.0);
  struct Case {
    double k1, k2, ll, lr, rr;
  };
  // frozen against an independent quadrature stack
  for (auto c : {Case{3.0, -1.0, 0.078024, 0.891890, 0.030086},
                 Case{1.0, 1.0, 0.057412, 0.416968, 0.525621},
                 Case{0.37, -1.0, 0.053678, 0.944087, 0.002234}}) {
    auto r = scattering_probabilities(p1, gauss_input(c.k1, c.k2));
    CHECK(r.flux_total == Catch::Approx(1.0).epsilon(2e-4));
    CHECK(r.p_ll == Catch::Approx(c.ll).margin(2.5e-4));
    CHECK(r.p_lr == Catch::Approx(c.lr).margin(5e-4));
    CHECK(r.p_rr == Catch::Approx(c.rr).margin(2.5e-4));
  }
}

TEST_CASE("flux conservation over random parameter draws") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> du(0.0, 6.0), dd(-3.0, 6.0);
  for (int i = 0; i < 10; ++i) {
    auto p = symmetric(du(rng));
    double delta = dd(rng);
    double dk = (i % 2) ? 0.0 : fully_resonant_dk(p, delta);
    auto r = scattering_probabilities(p, gauss_input(0.5 * (delta + dk), 0.5 * (delta - dk)));
    CHECK(r.flux_total == Catch::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("output amplitude in the linear limit") {
  auto p0 = symmetric(0.0);
  auto in = gauss_input(1.0, -1.0);
  const double p1 = 1.002, p2 = -1.003;
  auto a = output_amplitude_momentum(p0, in, Channel::RR, p1, p2);
  complex_t expect = scatter1(p0, p1).t * scatter1(p0, p2).t *
                     (momentum_amplitude(in.xi1, p1) * momentum_amplitude(in.xi2, p2) +
                      momentum_amplitude(in.xi1, p2) * momentum_amplitude(in.xi2, p1)) /
                     std::sqrt(in.m2);
  CHECK(std::abs(a - expect) < 1e-10 * std::abs(expect) + 1e-14);

  auto s12 = output_amplitude_momentum(p0, in, Channel::RR, p1, p2);
  auto s21 = output_amplitude_momentum(p0, in, Channel::RR, p2, p1);
  CHECK(std::abs(s12 - s21) < 1e-13);
  // total energy far outside the input support
  auto far = output_amplitude_momentum(p0, in, Channel::RR, 1.2, -0.8);
  CHECK(std::abs(far) < 1e-8 * std::abs(a));
}

TEST_CASE("g2 anchors in the linear limit") {
  auto p0 = symmetric(0.0);
  for (double delta : {-2.0, 0.6, 2.0}) {
    auto r = g2_transmitted(p0, gauss_input(0.5 * delta, 0.5 * delta));
    CHECK(r.g2 == Catch::Approx(0.5).epsilon(1e-7));
  }
  auto res = g2_transmitted(p0, gauss_input(1.0, -1.0));
  CHECK(res.g2 == Catch::Approx(1.0).epsilon(1e-6));
  auto off = g2_transmitted(p0, gauss_input(0.6, -0.6));
  CHECK(off.g2 == Catch::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("g2 interacting: frozen references") {
  auto p1 = symmetric(1.0);
  CHECK(g2_transmitted(p1, gauss_input(1.0, 1.0)).g2 == Catch::Approx(0.773814).epsilon(2e-3));
  CHECK(g2_transmitted(p1, gauss_input(3.0, -1.0)).g2 == Catch::Approx(0.963421).epsilon(2e-3));
  auto p5 = symmetric(5.0);
  CHECK(g2_transmitted(p5, gauss_input(5.0, 5.0)).g2 == Catch::Approx(153770.0).epsilon(2e-2));
  CHECK(g2_transmitted(p5, gauss_input(11.0, -1.0)).g2 == Catch::Approx(0.956003).epsilon(2e-3));
}

TEST_CASE("closed-form denominator equals the x-grid oracle") {
  for (auto [u, k1, k2] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{1.0, 3.0, -1.0},
                           std::tuple{0.0, 0.25, 0.25}}) {
    auto p = symmetric(u);
    auto in = gauss_input(k1, k2);
    auto spectral = g2_transmitted(p, in);
    double grid = denominator_flux_grid(p, in);
    CHECK(spectral.denominator_flux == Catch::Approx(grid).epsilon(5e-4));
  }
  // heavy spectral tails exercise the tail panels of the shell kernel
  auto p = symmetric(1.0);
  auto in = make_two_photon_input(make_profile(PulseShape::lorentzian, 0.0, 0.005),
                                  make_profile(PulseShape::lorentzian, -1.0, 0.005));
  QuadPolicy dense;
  dense.e_nodes = 128;
  dense.e_tail_nodes = 96;
  auto spectral = g2_transmitted(p, in, dense);
  double grid = denominator_flux_grid(p, in, dense);
  CHECK(spectral.denominator_flux == Catch::Approx(grid).epsilon(2e-3));
}

TEST_CASE("g2_coherent matches the weak-drive references") {
  auto p1 = symmetric(1.0);
  auto coh = [](double delta) {
    return make_coherent_input(0.0002, make_profile(PulseShape::gaussian, 0.5 * delta, 0.005));
  };
  CHECK(g2_coherent(p1, coh(0.5)).g2 == Catch::Approx(0.069661).epsilon(3e-3));
  CHECK(g2_coherent(p1, coh(4.0)).g2 == Catch::Approx(20.2125).epsilon(3e-3));
  CHECK(g2_coherent(p1, coh(2.0)).g2 == Catch::Approx(1.0010).epsilon(3e-3));

  // linear cavities leave coherent statistics untouched
  auto p0 = symmetric(0.0);
  for (double delta : {-1.0, 0.8, 2.0})
    CHECK(g2_coherent(p0, coh(delta)).g2 == Catch::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("stationary position smear honors the piecewise structure") {
  auto p0 = symmetric(0.0);
  auto in = gauss_input(0.8, -0.3, 0.01);
  CHECK(smeared_wavefunction_position(p0, in, Channel::RR, -5.0, -1.0) == complex_t(0));
  CHECK(smeared_wavefunction_position(p0, in, Channel::RR, -5.0, 2.0) == complex_t(0));

  auto phi = smeared_wavefunction_position(p0, in, Channel::LL, -20.0, -35.0);
  complex_t expect = (position_amplitude(in.xi1, -20.0) * position_amplitude(in.xi2, -35.0) +
                      position_amplitude(in.xi1, -35.0) * position_amplitude(in.xi2, -20.0)) /
                     std::sqrt(2.0);
  CHECK(std::abs(phi - expect) < 1e-8);

  auto rr = smeared_wavefunction_position(p0, in, Channel::RR, 0.0, 0.0);
  complex_t f1t = smear_coeff0(p0, in.xi1, Coef::trans);
  complex_t f2t = smear_coeff0(p0, in.xi2, Coef::trans);
  CHECK(std::abs(rr - 2.0 * f1t * f2t / (std::sqrt(2.0) * 2 * pi)) < 1e-10);
}

TEST_CASE("bound term peaks on the one-photon resonance condition") {
  // at delta = 0 the |S_RR|^2 landscape is maximal where both the input and
  // output relative momenta satisfy |dk| = |dp| = 2J
  auto p = symmetric(5.0, 0.25);
  const double delta = 0.0;
  auto srr2 = [&](double dk, double dp) {
    auto d = bound_state_data(p, 0.5 * (delta + dk), 0.5 * (delta - dk));
    return std::norm(s_bound_from(d, 0.5 * (delta + dp), 0.5 * (delta - dp)).s_rr);
  };
  const double on = srr2(2.0, 2.0);
  for (double dk : {0.5, 0.9, 1.7, 3.1})
    for (double dp : {0.5, 1.2, 2.8, 4.0}) CHECK(on > 10 * srr2(dk, dp));
  // strong contrast along the output ridge once the input is resonant
  CHECK(on > 30 * srr2(2.0, 1.2));
  CHECK(on > 30 * srr2(2.0, 2.8));
  CHECK(srr2(1.7, -2.0) == Catch::Approx(srr2(1.7, 2.0)).epsilon(1e-12));
}

TEST_CASE("channel dominance at the characteristic inputs") {
  // one photon pinned on the lower one-photon line: reflected-transmitted
  // pairs dominate over most of the interacting regime
  auto p5 = symmetric(5.0);
  auto es = two_excitation_eigensystem(p5);
  auto res = scattering_probabilities(
      p5, gauss_input(0.5 * (es.eps2_minus + fully_resonant_dk(p5, es.eps2_minus)),
                      0.5 * (es.eps2_minus - fully_resonant_dk(p5, es.eps2_minus))));
  CHECK(res.p_lr > 0.5);
  CHECK(res.p_lr > res.p_ll);
  CHECK(res.p_lr > res.p_rr);

  // identical photons far from every resonance: nearly full reflection
  auto off = scattering_probabilities(p5, gauss_input(2.5, 2.5));
  CHECK(off.p_ll > 0.9);
}

TEST_CASE("pinned-resonance inputs excite the two-photon states more strongly") {
  // |e12| at delta = eps2_minus, comparing the pinned-photon splitting with
  // identical photons, across the interacting range
  int larger = 0, total = 0;
  for (double u : {1.0, 2.0, 5.0, 10.0, 20.0}) {
    auto p = symmetric(u);
    auto es = two_excitation_eigensystem(p);
    auto a = excitation_amplitudes(p, es.eps2_minus, fully_resonant_dk(p, es.eps2_minus));
    auto b = excitation_amplitudes(p, es.eps2_minus, 0.0);
    ++total;
    if (a.abs_e12 > b.abs_e12) ++larger;
  }
  CHECK(larger >= total - 1);
}

TEST_CASE("bound weight vanishes in the linear limit") {
  CHECK(bound_weight(symmetric(0.0), 1.0) == Catch::Approx(0.0).margin(1e-20));
}

TEST_CASE("excitation amplitudes: symmetry and saturation") {
  auto p5 = symmetric(5.0);
  auto a = excitation_amplitudes(p5, 10.0, 3.0);
  auto b = excitation_amplitudes(p5, 10.0, -3.0);
  CHECK(a.abs_e11 == Catch::Approx(b.abs_e11).epsilon(1e-12));
  CHECK(a.abs_e12 == Catch::Approx(b.abs_e12).epsilon(1e-12));

  auto big = excitation_amplitudes(symmetric(1000.0), 0.0, 2.0);
  CHECK(big.abs_e11 < 1e-2 * big.abs_e12);
  CHECK(big.abs_e22 < 1e-2 * big.abs_e12);
}

TEST_CASE("vanishing transmission is reported, not divided by") {
  auto p0 = symmetric(0.0);
  auto coh = make_coherent_input(0.0002,
                                 make_profile(PulseShape::gaussian, 1e5, 0.005));
  CHECK_THROWS_WITH(g2_coherent(p0, coh), Catch::Matchers::ContainsSubstring("no transmitted flux"));
}

TEST_CASE("loss removes flux") {
  auto p = apply_bath_loss(symmetric(1.0), 0.04);
  auto r = scattering_probabilities(p, gauss_input(3.0, -1.0));
  CHECK(r.flux_total < 0.999);
  CHECK(r.diag.warning == false);
}

TEST_CASE("denser quadrature policy moves results only within tolerance") {
  auto p1 = symmetric(1.0);
  auto in = gauss_input(3.0, -1.0);
  QuadPolicy dense;
  dense.e_nodes = 192;
  dense.rel_tol = 1e-10;
  auto a = scattering_probabilities(p1, in);
  auto b = scattering_probabilities(p1, in, dense);
  CHECK(std::abs(a.p_rr - b.p_rr) < 1e-4 * std::max(1.0, std::abs(b.p_rr)));
  auto ga = g2_transmitted(p1, in);
  auto gb = g2_transmitted(p1, in, dense);
  CHECK(std::abs(ga.g2 - gb.g2) < 1e-4 * std::abs(gb.g2));
}
