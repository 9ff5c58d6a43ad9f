#pragma once

// Closed-form single-photon scattering off the dimer: cavity amplitudes,
// reflection/transmission, and the stationary output wavefunction. The
// nonlinearities never enter here.

#include <cmath>
#include <utility>

#include "photon_dimer/model.hpp"

namespace photon_dimer {

struct ScatterCoefficients1 {
  complex_t energy;  // detuning from omega0
  complex_t e1, e2;  // cavity amplitudes
  complex_t r, t;    // reflection / transmission
};

inline ScatterCoefficients1 scatter1(const DimerParams& p, complex_t energy) {
  const double j = p.j_hop, v1 = p.v1, v2 = p.v2;
  const complex_t i(0, 1);
  const complex_t d1 = v1 * v1 - 2.0 * i * (energy - p.omega1);
  const complex_t d2 = v2 * v2 - 2.0 * i * (energy - p.omega2);
  const complex_t den = 4 * j * j + d1 * d2;
  ScatterCoefficients1 s;
  s.energy = energy;
  s.r = (4 * j * j - (v1 * v1 + 2.0 * i * (energy - p.omega1)) * d2) / den;
  s.t = 4.0 * i * j * v1 * v2 / den;
  s.e1 = std::sqrt(2.0 / pi) * v1 * (-i * v2 * v2 - 2.0 * (energy - p.omega2)) / den;
  s.e2 = -2.0 * j * std::sqrt(2.0 / pi) * v1 / den;
  return s;
}

inline ScatterCoefficients1 scatter1(const DimerParams& p, double energy) {
  return scatter1(p, complex_t(energy, 0));
}

// Stationary scattering wavefunction for a photon injected from the left:
//   phi_L(x) = (theta(-x) + r theta(x)) e^{ikx} / sqrt(2 pi)
//   phi_R(y) = t theta(y) e^{iky} / sqrt(2 pi)
// At x = 0 the midpoint regularization (phi(0+)+phi(0-))/2 is used.
inline std::pair<complex_t, complex_t> output_wavefunction1(const DimerParams& p, double energy,
                                                            double x) {
  const ScatterCoefficients1 s = scatter1(p, energy);
  const complex_t plane = std::exp(complex_t(0, energy * x)) / std::sqrt(2 * pi);
  complex_t phi_l, phi_r;
  if (x < 0) {
    phi_l = plane;
    phi_r = 0;
  } else if (x > 0) {
    phi_l = s.r * plane;
    phi_r = s.t * plane;
  } else {
    phi_l = 0.5 * (1.0 + s.r) * plane;
    phi_r = 0.5 * s.t * plane;
  }
  return {phi_l, phi_r};
}

}  // namespace photon_dimer
