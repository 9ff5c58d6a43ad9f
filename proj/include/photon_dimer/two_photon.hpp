#pragma once

// Two-photon scattering eigenstates of the waveguide-coupled dimer: the
// interaction-induced ("bound") coefficients, the energy-shell S-matrix
// terms S_LL/S_LR/S_RR, and the real-space two-photon wavefunctions.
//
// Everything is a closed-form function of the two input momenta; complex
// detunings (loss) pass through unchanged. The "-" / "+" branch labels come
// from the principal square root in Theta; the contract is that both bound
// exponentials decay with photon separation (Im lambda < 0), not the labels.

#include <cmath>
#include <stdexcept>

#include "photon_dimer/model.hpp"
#include "photon_dimer/single_photon.hpp"

namespace photon_dimer {

enum class Channel { LL, LR, RR };

struct BoundStateData {
  double k1 = 0, k2 = 0;  // input momenta (detunings)
  complex_t e2;           // total energy k1 + k2

  complex_t big_a, m_minus, m_plus;        // structure constants
  complex_t lambda_minus, lambda_plus;     // bound-state pole parameters
  complex_t chi_l1_k1, chi_l1_k2;          // waveguide-cavity expansion
  complex_t chi_l2_k1, chi_l2_k2;
  complex_t phi_l1_in0, phi_l2_in0;        // phi_{L1,L2}(0-)
  complex_t e11, e12, e22;                 // two-photon cavity amplitudes
  complex_t phi_l1_out0, phi_l2_out0;      // phi(0+) just past the couplers
  complex_t phi_r1_out0, phi_r2_out0;
  complex_t c_l_minus, c_l_plus;           // outgoing-branch constants
  complex_t c_r_minus, c_r_plus;
  complex_t b_ll_minus, b_ll_plus;         // bound coefficients per channel
  complex_t b_lr1_minus, b_lr1_plus;
  complex_t b_lr2_minus, b_lr2_plus;
  complex_t b_rr_minus, b_rr_plus;
  complex_t r_k1, r_k2, t_k1, t_k2;        // single-photon r/t at k1, k2

  double eta_condition = 0;  // max |term| / |eta| in the e-coefficient solve
};

inline BoundStateData bound_state_data(const DimerParams& p, double k1, double k2) {
  const complex_t i(0, 1);
  const double j = p.j_hop, v1 = p.v1, v2 = p.v2;
  const complex_t w1 = p.omega1, w2 = p.omega2;
  const double u1 = p.u1, u2 = p.u2;
  const double s2 = std::sqrt(2.0);

  BoundStateData d;
  d.k1 = k1;
  d.k2 = k2;
  const complex_t e = k1 + k2;
  d.e2 = e;

  const complex_t theta =
      std::sqrt(16 * j * j - std::pow(v1 * v1 - v2 * v2 + 2.0 * i * (w1 - w2), 2));
  d.big_a = 2 * s2 * v1 * j / theta;
  d.m_minus = (-i * v1 * v1 + i * v2 * v2 + 2.0 * (w1 - w2) - theta) / (4 * j);
  d.m_plus = (-i * v1 * v1 + i * v2 * v2 + 2.0 * (w1 - w2) + theta) / (4 * j);
  d.lambda_minus = (-i * v1 * v1 - i * v2 * v2 - 4.0 * e + 2.0 * (w1 + w2) - theta) / 4.0;
  d.lambda_plus = (-i * v1 * v1 - i * v2 * v2 - 4.0 * e + 2.0 * (w1 + w2) + theta) / 4.0;
  const complex_t lm = d.lambda_minus, lp = d.lambda_plus;

  d.chi_l1_k1 = d.big_a * (d.m_minus / (k2 + lm) - d.m_plus / (k2 + lp));
  d.chi_l1_k2 = d.big_a * (d.m_minus / (k1 + lm) - d.m_plus / (k1 + lp));
  d.chi_l2_k1 = d.big_a * (1.0 / (k2 + lm) - 1.0 / (k2 + lp));
  d.chi_l2_k2 = d.big_a * (1.0 / (k1 + lm) - 1.0 / (k1 + lp));

  const double pref = 1.0 / (s2 * 2 * pi);
  d.phi_l1_in0 = pref * (d.chi_l1_k1 + d.chi_l1_k2);
  d.phi_l2_in0 = pref * (d.chi_l2_k1 + d.chi_l2_k2);

  // e-coefficients; eta is the determinant of the dressed two-excitation block
  const complex_t g1 = 2.0 * u1 - e + 2.0 * w1 - i * v1 * v1;
  const complex_t g2 = 2.0 * u2 - e + 2.0 * w2 - i * v2 * v2;
  const complex_t w = v1 * v1 + v2 * v2 - 2.0 * i * (e - w1 - w2);
  const complex_t eta = i * g1 * w * g2 + 4.0 * j * j * (g1 + g2);
  {
    double scale = std::max(std::abs(i * g1 * w * g2), std::abs(4.0 * j * j * (g1 + g2)));
    if (std::abs(eta) < 1e-14 * std::max(scale, 1.0))
      throw std::domain_error("parameter degeneracy: eta vanishes");
    d.eta_condition = scale / std::abs(eta);
  }
  // overall sign of e11 pinned by the linear-limit factorization
  d.e11 = -s2 * v1 *
          (4 * j * j * d.phi_l1_in0 + d.phi_l1_in0 * w * (i * g2) + 2 * j * d.phi_l2_in0 * g2) /
          eta;
  d.e12 = 2 * v1 * (2 * j * d.phi_l1_in0 + d.phi_l2_in0 * (-g1)) * (-g2) / eta;
  d.e22 = 2 * s2 * j * v1 * (2 * j * d.phi_l1_in0 + d.phi_l2_in0 * (-g1)) / eta;

  d.phi_l1_out0 = d.phi_l1_in0 - i * v1 * d.e11 * s2;
  d.phi_l2_out0 = d.phi_l2_in0 - i * v1 * d.e12;
  d.phi_r1_out0 = -i * v2 * d.e12;
  d.phi_r2_out0 = -i * v2 * d.e22 * s2;

  d.r_k1 = 1.0 - i * (v1 / s2) * d.chi_l1_k1;
  d.r_k2 = 1.0 - i * (v1 / s2) * d.chi_l1_k2;
  d.t_k1 = -i * (v2 / s2) * d.chi_l2_k1;
  d.t_k2 = -i * (v2 / s2) * d.chi_l2_k2;

  const double c0 = 2 * pi / v1;
  d.c_l_minus = d.big_a * (c0 * (d.m_plus * d.phi_l2_out0 - d.phi_l1_out0) -
                           d.r_k1 / (k1 + lm) - d.r_k2 / (k2 + lm));
  d.c_l_plus = -d.big_a * (c0 * (d.m_minus * d.phi_l2_out0 - d.phi_l1_out0) -
                           d.r_k1 / (k1 + lp) - d.r_k2 / (k2 + lp));
  d.c_r_minus = d.big_a * (c0 * (d.m_plus * d.phi_r2_out0 - d.phi_r1_out0) -
                           d.t_k1 / (k1 + lm) - d.t_k2 / (k2 + lm));
  d.c_r_plus = -d.big_a * (c0 * (d.m_minus * d.phi_r2_out0 - d.phi_r1_out0) -
                           d.t_k1 / (k1 + lp) - d.t_k2 / (k2 + lp));

  d.b_ll_minus = -i * (v1 / s2) * d.m_minus * d.c_l_minus;
  d.b_ll_plus = -i * (v1 / s2) * d.m_plus * d.c_l_plus;
  d.b_lr1_minus = -i * (v1 / s2) * d.m_minus * d.c_r_minus;
  d.b_lr1_plus = -i * (v1 / s2) * d.m_plus * d.c_r_plus;
  d.b_lr2_minus = -i * (v2 / s2) * d.c_l_minus;
  d.b_lr2_plus = -i * (v2 / s2) * d.c_l_plus;
  d.b_rr_minus = -i * (v2 / s2) * d.c_r_minus;
  d.b_rr_plus = -i * (v2 / s2) * d.c_r_plus;
  return d;
}

struct BoundTriple {
  complex_t s_ll, s_rr, s_lr;
};

// Smooth prefactors of delta(k1+k2-p1-p2) in the S-matrix elements, for
// output momenta already on the energy shell.
inline BoundTriple s_bound_from(const BoundStateData& d, double p1, double p2) {
  const complex_t i(0, 1);
  const complex_t lm = d.lambda_minus, lp = d.lambda_plus;
  const double c = 1.0 / (2 * pi);
  BoundTriple s;
  s.s_ll = c * (d.b_ll_minus * (-i / (lm + p2) - i / (lm + p1)) +
                d.b_ll_plus * (-i / (lp + p2) - i / (lp + p1)));
  s.s_rr = c * (d.b_rr_minus * (-i / (lm + p2) - i / (lm + p1)) +
                d.b_rr_plus * (-i / (lp + p2) - i / (lp + p1)));
  s.s_lr = c * (d.b_lr1_minus * (-i / (lm + p2)) + d.b_lr1_plus * (-i / (lp + p2)) +
                d.b_lr2_minus * (-i / (lm + p1)) + d.b_lr2_plus * (-i / (lp + p1)));
  return s;
}

inline BoundTriple s_bound(const DimerParams& p, double k1, double k2, double p1, double p2,
                           double shell_tol = 1e-9) {
  const double scale = std::max({1.0, std::abs(k1), std::abs(k2)});
  if (std::abs(k1 + k2 - p1 - p2) > shell_tol * scale)
    throw std::invalid_argument("s_bound: output momenta off the energy shell");
  return s_bound_from(bound_state_data(p, k1, k2), p1, p2);
}

// Distributional decomposition of one S-matrix element: two delta-pairing
// coefficients plus the bound prefactor of delta(sum k - sum p).
struct SMatrixElement {
  Channel channel;
  complex_t direct1;  // coefficient of delta(k1-p1) delta(k2-p2)
  complex_t direct2;  // coefficient of delta(k1-p2) delta(k2-p1)
  complex_t bound;    // prefactor of delta(k1+k2-p1-p2) at (p1, p2)
};

inline SMatrixElement smatrix_element(const DimerParams& p, Channel ch, double k1, double k2,
                                      double p1, double p2) {
  const auto d = bound_state_data(p, k1, k2);
  const auto b = s_bound_from(d, p1, p2);
  SMatrixElement m;
  m.channel = ch;
  switch (ch) {
    case Channel::LL:
      m.direct1 = d.r_k1 * d.r_k2;
      m.direct2 = d.r_k2 * d.r_k1;
      m.bound = b.s_ll;
      break;
    case Channel::LR:
      m.direct1 = d.r_k1 * d.t_k2;
      m.direct2 = d.r_k2 * d.t_k1;
      m.bound = b.s_lr;
      break;
    case Channel::RR:
      m.direct1 = d.t_k1 * d.t_k2;
      m.direct2 = d.t_k2 * d.t_k1;
      m.bound = b.s_rr;
      break;
  }
  return m;
}

// One-photon-in-waveguide amplitudes of the two-photon eigenstate,
// phi_{L1}, phi_{L2} (x) and phi_{R1}, phi_{R2} (y), both sides of x = 0.
enum class CavityChannel { L1, L2, R1, R2 };

inline complex_t cavity_photon_amplitude(const BoundStateData& d, CavityChannel ch, double x) {
  const complex_t i(0, 1);
  const double pref = 1.0 / (std::sqrt(2.0) * 2 * pi);
  const complex_t ex1 = std::exp(i * complex_t(d.k1 * x, 0));
  const complex_t ex2 = std::exp(i * complex_t(d.k2 * x, 0));
  if (x < 0) {
    switch (ch) {
      case CavityChannel::L1:
        return pref * (d.chi_l1_k2 * ex1 + d.chi_l1_k1 * ex2);
      case CavityChannel::L2:
        return pref * (d.chi_l2_k2 * ex1 + d.chi_l2_k1 * ex2);
      default:
        return 0;  // phi_{R1,R2}(y<0) = 0
    }
  }
  const complex_t bm = std::exp(-i * d.lambda_minus * x);
  const complex_t bp = std::exp(-i * d.lambda_plus * x);
  switch (ch) {
    case CavityChannel::L1:
      return pref * (d.r_k1 * d.chi_l1_k2 * ex1 + d.r_k2 * d.chi_l1_k1 * ex2 +
                     d.m_minus * d.c_l_minus * bm + d.m_plus * d.c_l_plus * bp);
    case CavityChannel::L2:
      return pref * (d.r_k1 * d.chi_l2_k2 * ex1 + d.r_k2 * d.chi_l2_k1 * ex2 +
                     d.c_l_minus * bm + d.c_l_plus * bp);
    case CavityChannel::R1:
      return pref * (d.t_k1 * d.chi_l1_k2 * ex1 + d.t_k2 * d.chi_l1_k1 * ex2 +
                     d.m_minus * d.c_r_minus * bm + d.m_plus * d.c_r_plus * bp);
    case CavityChannel::R2:
      return pref * (d.t_k1 * d.chi_l2_k2 * ex1 + d.t_k2 * d.chi_l2_k1 * ex2 +
                     d.c_r_minus * bm + d.c_r_plus * bp);
  }
  return 0;
}

// Full piecewise two-photon wavefunction of the scattering eigenstate,
// evaluated from the assembled coefficients. Coordinates on the boundary
// (z = 0, or z1 = z2 for the LR kink) take the outgoing-side limit.
inline complex_t wavefunction2(const BoundStateData& d, Channel ch, double z1, double z2) {
  const complex_t i(0, 1);
  const double s2 = std::sqrt(2.0);
  const double k1 = d.k1, k2 = d.k2;
  auto pw = [&](double ka, double za, double kb, double zb) {
    return std::exp(i * complex_t(ka * za + kb * zb, 0));
  };
  const complex_t e = d.e2;

  switch (ch) {
    case Channel::LL: {
      if (z1 < 0 && z2 < 0)
        return (pw(k1, z1, k2, z2) + pw(k2, z1, k1, z2)) / (s2 * 2 * pi);
      if (z1 < 0 || z2 < 0) {
        double zin = std::min(z1, z2), zout = std::max(z1, z2);  // phi_LL symmetric
        return (d.r_k2 * pw(k1, zin, k2, zout) + d.r_k1 * pw(k2, zin, k1, zout)) / (s2 * 2 * pi);
      }
      double zmin = std::min(z1, z2), zmax = std::max(z1, z2);
      complex_t direct = d.r_k1 * d.r_k2 * (pw(k2, z1, k1, z2) + pw(k1, z1, k2, z2));
      complex_t bound = std::exp(i * e * zmin) *
                        (d.b_ll_minus * std::exp(i * d.lambda_minus * (zmin - zmax)) +
                         d.b_ll_plus * std::exp(i * d.lambda_plus * (zmin - zmax)));
      return (direct + bound) / (s2 * 2 * pi);
    }
    case Channel::LR: {
      const double x = z1, y = z2;
      if (x < 0 && y < 0) return 0;
      if (x < 0 && y >= 0)
        return (d.t_k2 * pw(k1, x, k2, y) + d.t_k1 * pw(k2, x, k1, y)) / (2 * pi);
      if (x >= 0 && y < 0) return 0;
      complex_t direct = d.t_k1 * d.r_k2 * pw(k2, x, k1, y) + d.t_k2 * d.r_k1 * pw(k1, x, k2, y);
      complex_t bound;
      if (x < y)
        bound = std::exp(i * e * x) * (d.b_lr1_minus * std::exp(i * d.lambda_minus * (x - y)) +
                                       d.b_lr1_plus * std::exp(i * d.lambda_plus * (x - y)));
      else
        bound = std::exp(i * e * y) * (d.b_lr2_minus * std::exp(i * d.lambda_minus * (y - x)) +
                                       d.b_lr2_plus * std::exp(i * d.lambda_plus * (y - x)));
      return (direct + bound) / (2 * pi);
    }
    case Channel::RR: {
      if (z1 < 0 || z2 < 0) return 0;
      double zmin = std::min(z1, z2), zmax = std::max(z1, z2);
      complex_t direct = d.t_k1 * d.t_k2 * (pw(k2, z1, k1, z2) + pw(k1, z1, k2, z2));
      complex_t bound = std::exp(i * e * zmin) *
                        (d.b_rr_minus * std::exp(i * d.lambda_minus * (zmin - zmax)) +
                         d.b_rr_plus * std::exp(i * d.lambda_plus * (zmin - zmax)));
      return (direct + bound) / (s2 * 2 * pi);
    }
  }
  return 0;
}

inline complex_t wavefunction2(const DimerParams& p, Channel ch, double z1, double z2, double k1,
                               double k2) {
  return wavefunction2(bound_state_data(p, k1, k2), ch, z1, z2);
}

}  // namespace photon_dimer
