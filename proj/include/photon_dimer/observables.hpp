#pragma once

// Wavepacket-smeared two-photon observables: output amplitudes in momentum
// space, channel-resolved scattering probabilities, the transmitted-light
// intensity correlation for Fock and weak-coherent inputs, the integrated
// bound weight, and eigenstate-excitation diagnostics.
//
// The 2D input smearing collapses onto 1D "shell kernels"
//   b_c(E) = \int dk xi1(k) xi2(E-k) B_c(k, E-k)
// because the bound poles lambda_-+ depend on the momenta only through the
// total energy E. All position-space integrals then reduce to half-line
// integrals of exponentials times wavepacket transforms and are evaluated in
// closed form: Parseval identities for the direct parts, Cauchy transforms
// for the direct-bound cross terms, pole sums for the bound-bound parts.

#include <array>
#include <cmath>
#include <vector>

#include "photon_dimer/model.hpp"
#include "photon_dimer/single_photon.hpp"
#include "photon_dimer/two_photon.hpp"
#include "photon_dimer/wavepackets.hpp"

namespace photon_dimer {

struct QuadPolicy {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  int e_nodes = 96;            // E-grid nodes on the central conv window
  double e_window_factor = 14; // central E half-window in units sigma*sqrt(2)
  int e_tail_panels = 6;       // geometric panels per side for heavy tails
  int e_tail_nodes = 24;       // nodes per tail panel
  double dp_margin = 40;       // Delta-p integration margin beyond features
  double flux_floor = 1e-30;
};

struct QuadDiagnostics {
  bool warning = false;
  double worst_rel_err = 0;
  void note(const QuadResult<complex_t>& r) {
    double scale = std::max(std::abs(r.value), 1e-300);
    worst_rel_err = std::max(worst_rel_err, r.error / scale);
    if (!r.converged) warning = true;
  }
  void note(const QuadResult<double>& r) {
    double scale = std::max(std::abs(r.value), 1e-300);
    worst_rel_err = std::max(worst_rel_err, r.error / scale);
    if (!r.converged) warning = true;
  }
  void merge(const QuadDiagnostics& o) {
    warning = warning || o.warning;
    worst_rel_err = std::max(worst_rel_err, o.worst_rel_err);
  }
};

enum class Coef { unit, refl, trans };

// width of the narrowest spectral feature: pulse bandwidth or dressed-mode
// linewidth, used to seed the segment refinement near breakpoints
inline double feature_scale_hint(const DimerParams& p, double sigma) {
  double gate = 0.25 * (p.v1 * p.v1 + p.v2 * p.v2) -
                0.5 * (p.omega1.imag() + p.omega2.imag());
  return std::min(sigma, gate);
}

inline complex_t coef_value(const DimerParams& p, Coef c, double k) {
  if (c == Coef::unit) return 1.0;
  auto s = scatter1(p, k);
  return c == Coef::refl ? s.r : s.t;
}

// single-photon resonance positions, used as quadrature breakpoints
inline std::vector<double> resonance_breaks(const DimerParams& p) {
  double w1 = p.omega1.real(), w2 = p.omega2.real();
  double mid = 0.5 * (w1 + w2);
  double rad = std::sqrt(p.j_hop * p.j_hop + 0.25 * (w1 - w2) * (w1 - w2));
  return {mid - rad, mid + rad};
}

// ---- 1D profile smears against single-photon coefficients ----

// \int dk xi(k) c_k
inline complex_t smear_coeff0(const DimerParams& p, const PulseProfile& xi, Coef c,
                              QuadDiagnostics* diag = nullptr, QuadOptions opt = {}) {
  if (opt.feature_scale == 0) opt.feature_scale = feature_scale_hint(p, xi.sigma);
  auto r = integrate_profile(xi, [&](double k) { return momentum_amplitude(xi, k) * coef_value(p, c, k); },
                             resonance_breaks(p), opt);
  if (diag) diag->note(r);
  return r.value;
}

// \int dk xi_a(k) c_k conj(xi_b(k) d_k)
inline complex_t smear_pair(const DimerParams& p, const PulseProfile& xa, Coef ca,
                            const PulseProfile& xb, Coef cb, QuadDiagnostics* diag = nullptr,
                            QuadOptions opt = {}) {
  if (opt.feature_scale == 0)
    opt.feature_scale = feature_scale_hint(p, std::min(xa.sigma, xb.sigma));
  PulseProfile wide = xa.central_radius() > xb.central_radius() ? xa : xb;
  auto breaks = resonance_breaks(p);
  breaks.push_back(xa.k0);
  breaks.push_back(xb.k0);
  auto r = integrate_profile(wide,
                             [&](double k) {
                               return momentum_amplitude(xa, k) * coef_value(p, ca, k) *
                                      std::conj(momentum_amplitude(xb, k) * coef_value(p, cb, k));
                             },
                             breaks, opt);
  if (diag) diag->note(r);
  return r.value;
}

// \int dk conj(xi(k) c_k) / (k - s), Im s != 0
inline complex_t smear_cauchy(const DimerParams& p, const PulseProfile& xi, Coef c, complex_t s,
                              QuadDiagnostics* diag = nullptr, QuadOptions opt = {}) {
  if (opt.feature_scale == 0)
    opt.feature_scale = std::min(feature_scale_hint(p, xi.sigma), std::abs(s.imag()));
  auto breaks = resonance_breaks(p);
  breaks.push_back(s.real());
  auto r = integrate_profile(xi,
                             [&](double k) {
                               return std::conj(momentum_amplitude(xi, k) * coef_value(p, c, k)) /
                                      (k - s);
                             },
                             breaks, opt);
  if (diag) diag->note(r);
  return r.value;
}

// ---- shell kernels b_c(E) ----

struct ShellKernel {
  FixedGrid e;  // E nodes/weights over the pair-energy support
  std::vector<complex_t> b_ll_m, b_ll_p, b_lr1_m, b_lr1_p, b_lr2_m, b_lr2_p, b_rr_m, b_rr_p;
  complex_t mu_m, mu_p;  // E + lambda_-+(E), independent of E
  complex_t i_ll_m, i_ll_p, i_lr1_m, i_lr1_p, i_lr2_m, i_lr2_p, i_rr_m, i_rr_p;

  complex_t lambda_m(double e_val) const { return mu_m - e_val; }
  complex_t lambda_p(double e_val) const { return mu_p - e_val; }
};

// small vector of the eight bound coefficients, integrable as one unit
struct ShellBValues {
  std::array<complex_t, 8> v{};  // ll_m, ll_p, lr1_m, lr1_p, lr2_m, lr2_p, rr_m, rr_p
  complex_t ll_m() const { return v[0]; }
  complex_t ll_p() const { return v[1]; }
  complex_t lr1_m() const { return v[2]; }
  complex_t lr1_p() const { return v[3]; }
  complex_t lr2_m() const { return v[4]; }
  complex_t lr2_p() const { return v[5]; }
  complex_t rr_m() const { return v[6]; }
  complex_t rr_p() const { return v[7]; }
  ShellBValues& operator+=(const ShellBValues& o) {
    for (int i = 0; i < 8; ++i) v[i] += o.v[i];
    return *this;
  }
  friend ShellBValues operator+(ShellBValues a, const ShellBValues& b) { return a += b; }
  friend ShellBValues operator-(ShellBValues a, const ShellBValues& b) {
    for (int i = 0; i < 8; ++i) a.v[i] -= b.v[i];
    return a;
  }
  friend ShellBValues operator*(double s, ShellBValues a) {
    for (int i = 0; i < 8; ++i) a.v[i] *= s;
    return a;
  }
};

inline double abs_of(const ShellBValues& x) {
  double m = 0;
  for (const auto& c : x.v) m = std::max(m, std::abs(c));
  return m;
}

// b_c(E) for one energy: one adaptive k-integral of the pulse pair against
// all eight bound coefficients at once
inline ShellBValues shell_b_at(const DimerParams& p, const TwoPhotonInput& in, double e_val,
                               QuadDiagnostics* diag = nullptr, const QuadOptions& opt = {}) {
  const double r1 = in.xi1.central_radius(), r2 = in.xi2.central_radius();
  const double lo = std::max(in.xi1.k0 - r1, e_val - in.xi2.k0 - r2);
  const double hi = std::min(in.xi1.k0 + r1, e_val - in.xi2.k0 + r2);
  ShellBValues out{};
  if (!(hi > lo)) return out;
  auto breaks = resonance_breaks(p);
  for (double b : resonance_breaks(p)) breaks.push_back(e_val - b);
  breaks.push_back(in.xi1.k0);
  breaks.push_back(e_val - in.xi2.k0);

  auto f = [&](double k) {
    auto d = bound_state_data(p, k, e_val - k);
    const complex_t w = momentum_amplitude(in.xi1, k) * momentum_amplitude(in.xi2, e_val - k);
    ShellBValues s;
    s.v = {w * d.b_ll_minus,  w * d.b_ll_plus,  w * d.b_lr1_minus, w * d.b_lr1_plus,
           w * d.b_lr2_minus, w * d.b_lr2_plus, w * d.b_rr_minus,  w * d.b_rr_plus};
    return s;
  };
  QuadOptions o2 = opt;
  if (o2.feature_scale == 0)
    o2.feature_scale = feature_scale_hint(p, std::min(in.xi1.sigma, in.xi2.sigma));
  auto r = integrate_segmented<ShellBValues>(f, lo, hi, breaks, o2);
  if (diag) {
    QuadDiagnostics tmp;
    tmp.worst_rel_err = r.error / std::max(abs_of(r.value), 1e-300);
    tmp.warning = !r.converged;
    diag->merge(tmp);
  }
  return r.value;
}

inline ShellKernel build_shell_kernel(const DimerParams& p, const TwoPhotonInput& in,
                                      const QuadPolicy& pol = {},
                                      QuadDiagnostics* diag = nullptr) {
  ShellKernel k;
  const double delta = in.xi1.k0 + in.xi2.k0;
  const double s_eff = std::max(in.xi1.sigma, in.xi2.sigma);
  const double wc = pol.e_window_factor * s_eff * std::sqrt(2.0);
  k.e.append_gl(delta - wc, delta + wc, pol.e_nodes);
  if (in.xi1.heavy_tails() || in.xi2.heavy_tails()) {
    const double rr = in.xi1.central_radius() + in.xi2.central_radius();
    double a = wc;
    for (int i = 0; i < pol.e_tail_panels && a < rr; ++i) {
      double b = std::min(2.5 * a, rr);
      k.e.append_gl(delta + a, delta + b, pol.e_tail_nodes);
      k.e.append_gl(delta - b, delta - a, pol.e_tail_nodes);
      a = b;
    }
  }
  const std::size_t n = k.e.size();
  k.b_ll_m.resize(n); k.b_ll_p.resize(n);
  k.b_lr1_m.resize(n); k.b_lr1_p.resize(n);
  k.b_lr2_m.resize(n); k.b_lr2_p.resize(n);
  k.b_rr_m.resize(n); k.b_rr_p.resize(n);
  QuadOptions opt{pol.rel_tol, pol.abs_tol};
  for (std::size_t m = 0; m < n; ++m) {
    auto v = shell_b_at(p, in, k.e.x[m], diag, opt);
    k.b_ll_m[m] = v.ll_m(); k.b_ll_p[m] = v.ll_p();
    k.b_lr1_m[m] = v.lr1_m(); k.b_lr1_p[m] = v.lr1_p();
    k.b_lr2_m[m] = v.lr2_m(); k.b_lr2_p[m] = v.lr2_p();
    k.b_rr_m[m] = v.rr_m(); k.b_rr_p[m] = v.rr_p();
  }
  {
    auto d = bound_state_data(p, in.xi1.k0, in.xi2.k0);
    k.mu_m = d.e2 + d.lambda_minus;
    k.mu_p = d.e2 + d.lambda_plus;
  }
  auto dot = [&](const std::vector<complex_t>& b) {
    complex_t s = 0;
    for (std::size_t m = 0; m < n; ++m) s += k.e.w[m] * b[m];
    return s;
  };
  k.i_ll_m = dot(k.b_ll_m); k.i_ll_p = dot(k.b_ll_p);
  k.i_lr1_m = dot(k.b_lr1_m); k.i_lr1_p = dot(k.b_lr1_p);
  k.i_lr2_m = dot(k.b_lr2_m); k.i_lr2_p = dot(k.b_lr2_p);
  k.i_rr_m = dot(k.b_rr_m); k.i_rr_p = dot(k.b_rr_p);
  return k;
}

// ---- momentum-space output amplitude and channel probabilities ----

// <p1,p2|out>_channel for the smeared input; p1 + p2 selects the shell.
inline complex_t output_amplitude_momentum(const DimerParams& p, const TwoPhotonInput& in,
                                           Channel ch, double p1, double p2,
                                           QuadDiagnostics* diag = nullptr,
                                           const QuadOptions& opt = {}) {
  const complex_t i(0, 1);
  const double e_val = p1 + p2;
  auto s1 = scatter1(p, p1), s2 = scatter1(p, p2);
  const complex_t x11 = momentum_amplitude(in.xi1, p1) * momentum_amplitude(in.xi2, p2);
  const complex_t x21 = momentum_amplitude(in.xi1, p2) * momentum_amplitude(in.xi2, p1);
  auto b = shell_b_at(p, in, e_val, diag, opt);
  auto d0 = bound_state_data(p, in.xi1.k0, in.xi2.k0);
  const complex_t lm = d0.e2 + d0.lambda_minus - e_val;  // lambda_-(E) on this shell
  const complex_t lp = d0.e2 + d0.lambda_plus - e_val;
  const double c = 1.0 / (2 * pi);
  complex_t dir, bnd;
  switch (ch) {
    case Channel::LL:
      dir = s1.r * s2.r * (x11 + x21);
      bnd = c * (b.ll_m() * (-i / (lm + p2) - i / (lm + p1)) +
                 b.ll_p() * (-i / (lp + p2) - i / (lp + p1)));
      break;
    case Channel::LR:
      dir = s1.r * s2.t * (x11 + x21);
      bnd = c * (b.lr1_m() * (-i / (lm + p2)) + b.lr1_p() * (-i / (lp + p2)) +
                 b.lr2_m() * (-i / (lm + p1)) + b.lr2_p() * (-i / (lp + p1)));
      break;
    case Channel::RR:
      dir = s1.t * s2.t * (x11 + x21);
      bnd = c * (b.rr_m() * (-i / (lm + p2) - i / (lm + p1)) +
                 b.rr_p() * (-i / (lp + p2) - i / (lp + p1)));
      break;
  }
  return (dir + bnd) / std::sqrt(in.m2);
}

struct ChannelProbabilities {
  double p_ll = 0, p_lr = 0, p_rr = 0;
  double flux_total = 0;
  QuadDiagnostics diag;
};

inline ChannelProbabilities scattering_probabilities(const DimerParams& p,
                                                     const TwoPhotonInput& in,
                                                     const QuadPolicy& pol = {}) {
  ChannelProbabilities out;
  QuadDiagnostics* diag = &out.diag;
  const complex_t i(0, 1);
  const double delta = in.xi1.k0 + in.xi2.k0;
  const double dk0 = in.xi1.k0 - in.xi2.k0;
  const double s_eff = std::max(in.xi1.sigma, in.xi2.sigma);

  // outer grid over the total-energy support
  FixedGrid pg;
  {
    const double wc = pol.e_window_factor * s_eff * std::sqrt(2.0);
    pg.append_gl(delta - wc, delta + wc, pol.e_nodes);
    if (in.xi1.heavy_tails() || in.xi2.heavy_tails()) {
      const double rr = in.xi1.central_radius() + in.xi2.central_radius();
      double a = wc;
      for (int t = 0; t < pol.e_tail_panels && a < rr; ++t) {
        double b = std::min(2.5 * a, rr);
        pg.append_gl(delta + a, delta + b, 24);
        pg.append_gl(delta - b, delta - a, 24);
        a = b;
      }
    }
  }
  QuadOptions opt{pol.rel_tol, pol.abs_tol};
  opt.feature_scale = feature_scale_hint(p, std::min(in.xi1.sigma, in.xi2.sigma));
  auto d0 = bound_state_data(p, in.xi1.k0, in.xi2.k0);
  const complex_t mu_m = d0.e2 + d0.lambda_minus, mu_p = d0.e2 + d0.lambda_plus;

  double acc_ll = 0, acc_lr = 0, acc_rr = 0;
  for (std::size_t m = 0; m < pg.size(); ++m) {
    const double pv = pg.x[m], pw = pg.w[m];
    auto b = shell_b_at(p, in, pv, diag, opt);
    const complex_t lm = mu_m - pv, lp = mu_p - pv;

    auto amp = [&](Channel ch, double dp) {
      const double p1 = 0.5 * (pv + dp), p2 = 0.5 * (pv - dp);
      auto s1 = scatter1(p, p1), s2 = scatter1(p, p2);
      const complex_t x11 = momentum_amplitude(in.xi1, p1) * momentum_amplitude(in.xi2, p2);
      const complex_t x21 = momentum_amplitude(in.xi1, p2) * momentum_amplitude(in.xi2, p1);
      const double c = 1.0 / (2 * pi);
      complex_t dir, bnd;
      switch (ch) {
        case Channel::LL:
          dir = s1.r * s2.r * (x11 + x21);
          bnd = c * (b.ll_m() * (-i / (lm + p2) - i / (lm + p1)) +
                     b.ll_p() * (-i / (lp + p2) - i / (lp + p1)));
          break;
        case Channel::LR:
          dir = s1.r * s2.t * (x11 + x21);
          bnd = c * (b.lr1_m() * (-i / (lm + p2)) + b.lr1_p() * (-i / (lp + p2)) +
                     b.lr2_m() * (-i / (lm + p1)) + b.lr2_p() * (-i / (lp + p1)));
          break;
        case Channel::RR:
          dir = s1.t * s2.t * (x11 + x21);
          bnd = c * (b.rr_m() * (-i / (lm + p2) - i / (lm + p1)) +
                     b.rr_p() * (-i / (lp + p2) - i / (lp + p1)));
          break;
      }
      return (dir + bnd) / std::sqrt(in.m2);
    };

    std::vector<double> breaks = {0.0, dk0, -dk0};
    for (complex_t lam : {lm, lp}) {
      double ppole = -lam.real();  // other photon resonant
      breaks.push_back(2 * ppole - pv);
      breaks.push_back(pv - 2 * ppole);
    }
    double dp_max = pol.dp_margin;
    for (double b2 : breaks) dp_max = std::max(dp_max, std::abs(b2) + pol.dp_margin);

    for (Channel ch : {Channel::LL, Channel::LR, Channel::RR}) {
      auto f = [&](double dp) { return std::norm(amp(ch, dp)); };
      auto r = integrate_segmented<double>(f, -dp_max, dp_max, breaks, opt);
      auto tail_u = integrate_tail_up<double>(f, dp_max, opt);
      auto tail_d = integrate_tail_down<double>(f, -dp_max, opt);
      double val = r.value + tail_u.value + tail_d.value;
      double spin = (ch == Channel::LR) ? 1.0 : 0.5;
      double contrib = spin * 0.5 * pw * val;  // 1/2 jacobian of (P, dp)
      if (ch == Channel::LL) acc_ll += contrib;
      else if (ch == Channel::LR) acc_lr += contrib;
      else acc_rr += contrib;
      QuadDiagnostics tmp;
      tmp.note(r);
      diag->merge(tmp);
    }
  }
  out.p_ll = acc_ll;
  out.p_lr = acc_lr;
  out.p_rr = acc_rr;
  out.flux_total = acc_ll + acc_lr + acc_rr;
  return out;
}

// ---- position-space smears ----

// stationary smeared two-photon amplitude at a pulse-center snapshot;
// honors the incoming/outgoing piecewise structure of the eigenstates
inline complex_t smeared_wavefunction_position(const DimerParams& p, const TwoPhotonInput& in,
                                               Channel ch, double z1, double z2,
                                               const QuadPolicy& pol = {},
                                               QuadDiagnostics* diag = nullptr) {
  QuadOptions opt{pol.rel_tol, pol.abs_tol};
  const double s2 = std::sqrt(2.0);
  auto smear_at = [&](const PulseProfile& xi, Coef c, double z) {
    auto r = integrate_profile(xi,
                               [&](double k) {
                                 return momentum_amplitude(xi, k) * coef_value(p, c, k) *
                                        std::exp(complex_t(0, k * z));
                               },
                               resonance_breaks(p), opt, /*tails=*/z == 0);
    if (diag) diag->note(r);
    return r.value;
  };
  auto bound_sum = [&](const ShellKernel& ker, const std::vector<complex_t>& bm,
                       const std::vector<complex_t>& bp, double zmin, double zmax) {
    complex_t acc = 0;
    for (std::size_t m = 0; m < ker.e.size(); ++m) {
      complex_t lm = ker.lambda_m(ker.e.x[m]), lp = ker.lambda_p(ker.e.x[m]);
      complex_t ph = std::exp(complex_t(0, ker.e.x[m] * zmin));
      acc += ker.e.w[m] * ph *
             (bm[m] * std::exp(complex_t(0, 1) * lm * (zmin - zmax)) +
              bp[m] * std::exp(complex_t(0, 1) * lp * (zmin - zmax)));
    }
    return acc;
  };

  switch (ch) {
    case Channel::LL: {
      if (z1 < 0 && z2 < 0)
        return (smear_at(in.xi1, Coef::unit, z1) * smear_at(in.xi2, Coef::unit, z2) +
                smear_at(in.xi1, Coef::unit, z2) * smear_at(in.xi2, Coef::unit, z1)) /
               (s2 * 2 * pi);
      if (z1 < 0 || z2 < 0) {
        double zin = std::min(z1, z2), zout = std::max(z1, z2);
        return (smear_at(in.xi1, Coef::unit, zin) * smear_at(in.xi2, Coef::refl, zout) +
                smear_at(in.xi2, Coef::unit, zin) * smear_at(in.xi1, Coef::refl, zout)) /
               (s2 * 2 * pi);
      }
      auto ker = build_shell_kernel(p, in, pol, diag);
      complex_t dir = smear_at(in.xi1, Coef::refl, z2) * smear_at(in.xi2, Coef::refl, z1) +
                      smear_at(in.xi1, Coef::refl, z1) * smear_at(in.xi2, Coef::refl, z2);
      complex_t bnd = bound_sum(ker, ker.b_ll_m, ker.b_ll_p, std::min(z1, z2), std::max(z1, z2));
      return (dir + bnd) / (s2 * 2 * pi);
    }
    case Channel::LR: {
      const double x = z1, y = z2;
      if (y < 0) return 0;  // phi_LR vanishes for the R photon on the incoming side
      if (x < 0)
        return (smear_at(in.xi1, Coef::unit, x) * smear_at(in.xi2, Coef::trans, y) +
                smear_at(in.xi2, Coef::unit, x) * smear_at(in.xi1, Coef::trans, y)) /
               (2 * pi);
      auto ker = build_shell_kernel(p, in, pol, diag);
      complex_t dir = smear_at(in.xi1, Coef::trans, y) * smear_at(in.xi2, Coef::refl, x) +
                      smear_at(in.xi2, Coef::trans, y) * smear_at(in.xi1, Coef::refl, x);
      complex_t bnd;
      if (x < y)
        bnd = bound_sum(ker, ker.b_lr1_m, ker.b_lr1_p, x, y);
      else
        bnd = bound_sum(ker, ker.b_lr2_m, ker.b_lr2_p, y, x);
      return (dir + bnd) / (2 * pi);
    }
    case Channel::RR: {
      if (z1 < 0 || z2 < 0) return 0;
      auto ker = build_shell_kernel(p, in, pol, diag);
      complex_t dir = smear_at(in.xi1, Coef::trans, z2) * smear_at(in.xi2, Coef::trans, z1) +
                      smear_at(in.xi1, Coef::trans, z1) * smear_at(in.xi2, Coef::trans, z2);
      complex_t bnd = bound_sum(ker, ker.b_rr_m, ker.b_rr_p, std::min(z1, z2), std::max(z1, z2));
      return (dir + bnd) / (s2 * 2 * pi);
    }
  }
  return 0;
}

// ---- transmitted-light g2 ----

namespace detail {

// D(0) = \int dx ( |Phi_LR(x,0)|^2 + 2 |Phi_RR(x,0)|^2 ) with the output
// envelopes fully emerged (comoving coordinates), reduced to closed-form
// half-line integrals; see header comment.
struct DenominatorParts {
  double parseval = 0, cross = 0, bound2 = 0;
  double total() const { return parseval + cross + bound2; }
};

struct ChannelSpec {
  // dir(x) = pref * ( fa * W_{xa,ca}(x) + fb * W_{xb,cb}(x) )
  complex_t fa, fb;
  const PulseProfile *xa, *xb;
  Coef ca, cb;
  // bnd(x<0) = pref * sum_br I_left[br] e^{i mu x};
  // bnd(x>0) = pref * sum_br e^{-i mu x} \int dE b_right(E) e^{iEx}
  complex_t i_left_m, i_left_p;
  const std::vector<complex_t> *b_right_m, *b_right_p;
  double pref2 = 1;  // squared prefactor, (1/2pi)^2 or (1/(sqrt2 2pi))^2
};

inline DenominatorParts denominator_channel(const DimerParams& p, const ShellKernel& ker,
                                            const ChannelSpec& cs, QuadDiagnostics* diag,
                                            const QuadOptions& opt) {
  const complex_t i(0, 1);
  DenominatorParts out;
  // Parseval of the direct part
  complex_t paa = smear_pair(p, *cs.xa, cs.ca, *cs.xa, cs.ca, diag, opt);
  complex_t pbb = smear_pair(p, *cs.xb, cs.cb, *cs.xb, cs.cb, diag, opt);
  complex_t pab = smear_pair(p, *cs.xa, cs.ca, *cs.xb, cs.cb, diag, opt);
  out.parseval = cs.pref2 * 2 * pi *
                 (std::norm(cs.fa) * paa.real() + std::norm(cs.fb) * pbb.real() +
                  2 * (cs.fa * std::conj(cs.fb) * pab).real());

  const std::size_t n = ker.e.size();
  const complex_t mus[2] = {ker.mu_m, ker.mu_p};
  const complex_t i_left[2] = {cs.i_left_m, cs.i_left_p};
  const std::vector<complex_t>* b_right[2] = {cs.b_right_m, cs.b_right_p};

  // cross term: 2 Re \int dx conj(dir) bnd
  complex_t cross = 0;
  for (int br = 0; br < 2; ++br) {
    const complex_t mu = mus[br];
    // x < 0 piece
    complex_t ca_mu = smear_cauchy(p, *cs.xa, cs.ca, mu, diag, opt);
    complex_t cb_mu = smear_cauchy(p, *cs.xb, cs.cb, mu, diag, opt);
    cross += i_left[br] * i * (std::conj(cs.fa) * ca_mu + std::conj(cs.fb) * cb_mu);
    // x > 0 piece
    for (std::size_t m = 0; m < n; ++m) {
      const complex_t s = ker.e.x[m] - mu;
      const complex_t w = ker.e.w[m] * (*b_right[br])[m];
      if (std::abs(w) < 1e-300) continue;
      cross += w * (-i) *
               (std::conj(cs.fa) * smear_cauchy(p, *cs.xa, cs.ca, s, diag, opt) +
                std::conj(cs.fb) * smear_cauchy(p, *cs.xb, cs.cb, s, diag, opt));
    }
  }
  out.cross = cs.pref2 * 2 * cross.real();

  // |bnd|^2
  complex_t b2 = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      b2 += i_left[a] * std::conj(i_left[b]) / (i * (mus[a] - std::conj(mus[b])));
      for (std::size_t m = 0; m < n; ++m) {
        if (std::abs((*b_right[a])[m]) < 1e-300) continue;
        for (std::size_t l = 0; l < n; ++l) {
          complex_t den = ker.e.x[m] - ker.e.x[l] - mus[a] + std::conj(mus[b]);
          b2 += ker.e.w[m] * ker.e.w[l] * (*b_right[a])[m] * std::conj((*b_right[b])[l]) * i / den;
        }
      }
    }
  out.bound2 = cs.pref2 * b2.real();
  return out;
}

}  // namespace detail

struct G2Result {
  double g2 = 0;
  double numerator = 0;
  double denominator_flux = 0;  // D(0)
  QuadDiagnostics diag;
};

// zero-delay intensity correlation of the transmitted light for the
// two-photon Fock input (exact denominator)
inline G2Result g2_transmitted(const DimerParams& p, const TwoPhotonInput& in,
                               const QuadPolicy& pol = {}) {
  G2Result res;
  QuadOptions opt{pol.rel_tol, pol.abs_tol};
  auto ker = build_shell_kernel(p, in, pol, &res.diag);
  const double s2 = std::sqrt(2.0);
  const complex_t f1t = smear_coeff0(p, in.xi1, Coef::trans, &res.diag, opt);
  const complex_t f2t = smear_coeff0(p, in.xi2, Coef::trans, &res.diag, opt);

  const complex_t phi_rr00 = (2.0 * f1t * f2t + ker.i_rr_m + ker.i_rr_p) / (s2 * 2 * pi);
  res.numerator = 2 * std::norm(phi_rr00);

  detail::ChannelSpec lr;
  lr.fa = f1t; lr.fb = f2t;
  lr.xa = &in.xi2; lr.ca = Coef::refl;  // F1t pairs with W_{2,r}
  lr.xb = &in.xi1; lr.cb = Coef::refl;
  lr.i_left_m = ker.i_lr1_m; lr.i_left_p = ker.i_lr1_p;
  lr.b_right_m = &ker.b_lr2_m; lr.b_right_p = &ker.b_lr2_p;
  lr.pref2 = 1.0 / (4 * pi * pi);
  auto d_lr = detail::denominator_channel(p, ker, lr, &res.diag, opt);

  detail::ChannelSpec rr;
  rr.fa = f1t; rr.fb = f2t;
  rr.xa = &in.xi2; rr.ca = Coef::trans;
  rr.xb = &in.xi1; rr.cb = Coef::trans;
  rr.i_left_m = ker.i_rr_m; rr.i_left_p = ker.i_rr_p;
  rr.b_right_m = &ker.b_rr_m; rr.b_right_p = &ker.b_rr_p;
  rr.pref2 = 1.0 / (2 * 4 * pi * pi);
  auto d_rr = detail::denominator_channel(p, ker, rr, &res.diag, opt);

  const double d0 = d_lr.total() + 2 * d_rr.total();
  res.denominator_flux = d0;
  if (d0 * d0 < pol.flux_floor) throw std::domain_error("g2_transmitted: no transmitted flux");
  res.g2 = res.numerator * in.m2 / (d0 * d0);
  return res;
}

// weak coherent drive; alpha(k) = sqrt(nbar) xi(k) enters both smearing slots
inline G2Result g2_coherent(const DimerParams& p, const CoherentInput& coh,
                            const QuadPolicy& pol = {}) {
  G2Result res;
  QuadOptions opt{pol.rel_tol, pol.abs_tol};
  TwoPhotonInput in{coh.profile, coh.profile, 1.0, 2.0};
  auto ker = build_shell_kernel(p, in, pol, &res.diag);
  const double s2 = std::sqrt(2.0);
  const complex_t ft = smear_coeff0(p, coh.profile, Coef::trans, &res.diag, opt);
  const complex_t phi_rr00 = (2.0 * ft * ft + ker.i_rr_m + ker.i_rr_p) / (s2 * 2 * pi);
  res.numerator = std::norm(phi_rr00);
  const double ft4 = std::norm(ft) * std::norm(ft);
  res.denominator_flux = ft4;
  if (ft4 < pol.flux_floor) throw std::domain_error("g2_coherent: no transmitted flux");
  res.g2 = 0.5 * std::pow(2 * pi, 2) * res.numerator / (std::exp(-coh.nbar) * ft4);
  return res;
}

// ---- bound weight and excitation diagnostics ----

// integrated bound term \int d(dk) d(dp) |S_RR|^2 over the given box
inline double bound_weight(const DimerParams& p, double delta, double box = 8.0,
                           const QuadPolicy& pol = {}, QuadDiagnostics* diag = nullptr) {
  QuadOptions opt{std::max(pol.rel_tol, 1e-7), pol.abs_tol};
  opt.feature_scale = feature_scale_hint(p, box);
  auto e1 = resonance_breaks(p);
  std::vector<double> feats = {0.0};
  for (double e : e1) {
    feats.push_back(2 * e - delta);
    feats.push_back(delta - 2 * e);
  }
  auto outer = [&](double dk) {
    auto d = bound_state_data(p, 0.5 * (delta + dk), 0.5 * (delta - dk));
    auto f = [&](double dp) {
      auto s = s_bound_from(d, 0.5 * (delta + dp), 0.5 * (delta - dp));
      return std::norm(s.s_rr);
    };
    auto r = integrate_segmented<double>(f, -box, box, feats, opt);
    if (diag) {
      QuadDiagnostics tmp;
      tmp.note(r);
      diag->merge(tmp);
    }
    return r.value;
  };
  auto r = integrate_segmented<double>(outer, -box, box, feats, opt);
  if (diag) {
    QuadDiagnostics tmp;
    tmp.note(r);
    diag->merge(tmp);
  }
  return r.value;
}

struct ExcitationAmplitudes {
  double abs_e11 = 0, abs_e12 = 0, abs_e22 = 0;
};

inline ExcitationAmplitudes excitation_amplitudes(const DimerParams& p, double delta, double dk) {
  auto d = bound_state_data(p, 0.5 * (delta + dk), 0.5 * (delta - dk));
  return {std::abs(d.e11), std::abs(d.e12), std::abs(d.e22)};
}

}  // namespace photon_dimer
