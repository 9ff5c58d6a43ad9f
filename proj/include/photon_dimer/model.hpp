#pragma once

// System parameters of the two-site Bose-Hubbard dimer coupled to two
// waveguides, its one- and two-excitation eigensystem, resonance positions,
// and the non-Hermitian substitution for Markovian cavity loss.
//
// All energies are detunings from the bare cavity frequency omega0 (the real
// part of the first cavity frequency is subtracted at validation), expressed
// in units of the hopping rate J. Group velocity and hbar are set to 1.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "photon_dimer/quadrature.hpp"

namespace photon_dimer {

struct DimerParams {
  complex_t omega1{0.0, 0.0};  // cavity detunings; imag part < 0 encodes loss
  complex_t omega2{0.0, 0.0};
  double u1 = 0;  // Kerr nonlinearities
  double u2 = 0;
  double j_hop = 1;  // hopping rate, the unit scale
  double v1 = 0.2;   // waveguide-cavity couplings
  double v2 = 0.2;
  double gamma_bath = 0;  // extra loss rate folded into imag(omega)

  bool symmetric() const {
    return omega1 == omega2 && u1 == u2 && v1 == v2;
  }
};

// Frame-shifts (subtracts real(omega1) from both cavities), folds gamma_bath
// into the imaginary parts, and checks signs. Throws std::domain_error naming
// the offending field.
inline DimerParams validate(DimerParams p) {
  if (!(p.j_hop > 0)) throw std::domain_error("j_hop must be positive");
  if (!(p.v1 > 0)) throw std::domain_error("v1 must be positive");
  if (!(p.v2 > 0)) throw std::domain_error("v2 must be positive");
  if (p.gamma_bath < 0) throw std::domain_error("gamma_bath must be non-negative");
  double omega0 = p.omega1.real();
  p.omega1 -= omega0;
  p.omega2 -= omega0;
  p.omega1 -= complex_t(0, 0.5 * p.gamma_bath);
  p.omega2 -= complex_t(0, 0.5 * p.gamma_bath);
  return p;
}

// Replaces the bath loss rate: omega_j -> omega_j - i*gamma/2 relative to the
// zero-loss baseline of the given (already validated) parameter set.
inline DimerParams apply_bath_loss(DimerParams p, double gamma) {
  if (gamma < 0) throw std::domain_error("gamma_bath must be non-negative");
  complex_t shift(0, 0.5 * (p.gamma_bath - gamma));
  p.omega1 += shift;
  p.omega2 += shift;
  p.gamma_bath = gamma;
  return p;
}

struct EigenSystem2Site {
  double eps1_minus = 0, eps1_plus = 0;              // single-excitation energies
  double eps2_zero = 0, eps2_minus = 0, eps2_plus = 0;  // two-excitation energies
  // normalized eigenvectors over the basis (|20>, |11>, |02>)
  std::array<double, 3> vec2_zero{}, vec2_minus{}, vec2_plus{};
};

// Direct diagonalization of the two-excitation block
//   <{20,11,02}| H_cc |{20,11,02}>  with sqrt(2) J off-diagonal couplings.
// Real parts of the detunings are used; for the symmetric lossless case the
// energies are 2U and U -+ sqrt(4J^2+U^2).
inline EigenSystem2Site two_excitation_eigensystem(const DimerParams& p) {
  const double w1 = p.omega1.real(), w2 = p.omega2.real();
  const double s2j = std::sqrt(2.0) * p.j_hop;
  Eigen::Matrix3d h;
  h << 2 * w1 + 2 * p.u1, s2j, 0,
       s2j, w1 + w2, s2j,
       0, s2j, 2 * w2 + 2 * p.u2;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
  const auto& ev = es.eigenvalues();
  const auto& vec = es.eigenvectors();

  // one-excitation block [[w1, J], [J, w2]]
  double mid = 0.5 * (w1 + w2);
  double rad = std::sqrt(p.j_hop * p.j_hop + 0.25 * (w1 - w2) * (w1 - w2));

  EigenSystem2Site out;
  out.eps1_minus = mid - rad;
  out.eps1_plus = mid + rad;
  // label: among sorted eigenpairs, the one with the smallest |11| weight is
  // |2_0> (it has none in the symmetric case); of the rest, lower = minus.
  int zero_idx = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(vec(1, i)) < std::abs(vec(1, zero_idx))) zero_idx = i;
  std::vector<int> rest;
  for (int i = 0; i < 3; ++i)
    if (i != zero_idx) rest.push_back(i);
  out.eps2_zero = ev(zero_idx);
  out.eps2_minus = ev(rest[0]);
  out.eps2_plus = ev(rest[1]);
  for (int r = 0; r < 3; ++r) {
    out.vec2_zero[r] = vec(r, zero_idx);
    out.vec2_minus[r] = vec(r, rest[0]);
    out.vec2_plus[r] = vec(r, rest[1]);
  }
  return out;
}

// Bound-term resonance positions {0, 2*eps1_pm, eps2_(0,pm)} for symmetric
// lossless parameters, ascending and deduplicated.
inline std::vector<double> resonant_delta_list(const DimerParams& p, double tol = 1e-9) {
  if (!p.symmetric())
    throw std::domain_error("resonant_delta_list expects symmetric parameters");
  const double j = p.j_hop, u = p.u1;
  const double root = std::sqrt(4 * j * j + u * u);
  std::vector<double> d{0.0, 2 * j, -2 * j, 2 * u, u + root, u - root};
  std::sort(d.begin(), d.end());
  std::vector<double> out;
  for (double x : d)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  return out;
}

// Fully-resonant relative momentum: one photon pinned at eps1_minus = -J,
// i.e. dk = delta - 2*eps1_minus = delta + 2J.
inline double fully_resonant_dk(const DimerParams& p, double delta) {
  return delta + 2 * p.j_hop;
}

}  // namespace photon_dimer
