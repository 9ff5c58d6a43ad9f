#pragma once

// Momentum-space input envelopes (Gaussian / Lorentzian / rising edge), their
// position-space transforms, the two-photon overlap normalization M2, weak
// coherent amplitudes, and the initial-state intensity correlation.

#include <cmath>
#include <stdexcept>

#include "photon_dimer/quadrature.hpp"

namespace photon_dimer {

enum class PulseShape { gaussian, lorentzian, rising };

struct PulseProfile {
  PulseShape shape = PulseShape::gaussian;
  double k0 = 0;     // center detuning
  double sigma = 0;  // bandwidth > 0

  // half-width of the momentum window holding all but O(1e-8) of the
  // amplitude mass; heavy-tailed shapes get wide windows
  double central_radius() const {
    switch (shape) {
      case PulseShape::gaussian: return 12 * sigma;
      case PulseShape::lorentzian: return 400 * sigma;
      case PulseShape::rising: return 400 * sigma;
    }
    return 12 * sigma;
  }
  bool heavy_tails() const { return shape != PulseShape::gaussian; }
};

inline PulseProfile make_profile(PulseShape shape, double k0, double sigma) {
  if (!(sigma > 0)) throw std::domain_error("sigma must be positive");
  return {shape, k0, sigma};
}

inline complex_t momentum_amplitude(const PulseProfile& p, double k) {
  const double d = k - p.k0, s = p.sigma;
  switch (p.shape) {
    case PulseShape::gaussian:
      return std::exp(-d * d / (4 * s * s)) / std::pow(2 * pi * s * s, 0.25);
    case PulseShape::lorentzian:
      return std::sqrt(2 / pi) * std::pow(s, 1.5) / (d * d + s * s);
    case PulseShape::rising:
      return std::sqrt(2 / pi) * std::sqrt(s) / complex_t(s, 2 * d);
  }
  return 0;
}

// (1/sqrt(2 pi)) \int dk xi(k) e^{ikx}, in closed form
inline complex_t position_amplitude(const PulseProfile& p, double x) {
  const double s = p.sigma;
  const complex_t carrier = std::exp(complex_t(0, p.k0 * x));
  switch (p.shape) {
    case PulseShape::gaussian:
      return std::pow(2 * s * s / pi, 0.25) * std::exp(-s * s * x * x) * carrier;
    case PulseShape::lorentzian:
      return std::sqrt(s) * std::exp(-s * std::abs(x)) * carrier;
    case PulseShape::rising:
      return x >= 0 ? std::sqrt(s) * std::exp(-0.5 * s * x) * carrier : complex_t(0);
  }
  return 0;
}

// \int dk f(k) over the profile's support, tails mapped to infinity for the
// heavy-tailed shapes. f is complex-valued; breakpoints are optional interior
// split positions (resonances of the integrand's other factors).
// tails: map the heavy-tail remainders to infinity (valid only for
// non-oscillatory integrands; pass false when f carries an e^{ikx} factor)
template <class F>
QuadResult<complex_t> integrate_profile(const PulseProfile& p, F&& f,
                                        std::vector<double> breaks = {},
                                        const QuadOptions& opt = {}, bool tails = true) {
  const double lo = p.k0 - p.central_radius(), hi = p.k0 + p.central_radius();
  breaks.push_back(p.k0);
  QuadResult<complex_t> r = integrate_segmented<complex_t>(f, lo, hi, breaks, opt);
  if (tails && p.heavy_tails()) {
    if (hi > 0) r += integrate_tail_up<complex_t>(f, hi, opt);
    else r += integrate<complex_t>(f, hi, 1.0, opt), r += integrate_tail_up<complex_t>(f, 1.0, opt);
    if (lo < 0) r += integrate_tail_down<complex_t>(f, lo, opt);
    else r += integrate<complex_t>(f, -1.0, lo, opt), r += integrate_tail_down<complex_t>(f, -1.0, opt);
  }
  return r;
}

inline double profile_norm(const PulseProfile& p) {
  auto r = integrate_profile(p, [&](double k) {
    return complex_t(std::norm(momentum_amplitude(p, k)), 0);
  });
  return r.value.real();
}

// <xi1|xi2> = \int dk conj(xi1) xi2
inline complex_t profile_overlap(const PulseProfile& a, const PulseProfile& b) {
  PulseProfile wide = a.central_radius() > b.central_radius() ? a : b;
  auto r = integrate_profile(wide, [&](double k) {
    return std::conj(momentum_amplitude(a, k)) * momentum_amplitude(b, k);
  }, {a.k0, b.k0});
  return r.value;
}

struct TwoPhotonInput {
  PulseProfile xi1, xi2;
  complex_t overlap;  // <xi1|xi2>
  double m2 = 1;      // 1 + |overlap|^2, in [1, 2]
};

inline TwoPhotonInput make_two_photon_input(const PulseProfile& xi1, const PulseProfile& xi2) {
  TwoPhotonInput in{xi1, xi2, 0, 1};
  in.overlap = profile_overlap(xi1, xi2);
  in.m2 = 1 + std::norm(in.overlap);
  return in;
}

struct CoherentInput {
  double nbar = 0;       // mean photon number << 1
  PulseProfile profile;  // alpha(k) = sqrt(nbar) * xi(k)
};

inline CoherentInput make_coherent_input(double nbar, const PulseProfile& xi) {
  if (!(nbar > 0)) throw std::domain_error("nbar must be positive");
  return {nbar, xi};
}

// Zero-delay-capable initial correlation of the two-photon input,
//   g2(x1,x2) = |g1(x1) g2(x2) + g1(x2) g2(x1)|^2 / ((1/M2) g3(x1) g3(x2)),
//   g3 = |g1|^2 + |g2|^2 + sqrt(M2-1) (g1 conj(g2) + g2 conj(g1)).
inline double initial_g2(const TwoPhotonInput& in, double x1, double x2) {
  const complex_t g1a = position_amplitude(in.xi1, x1), g1b = position_amplitude(in.xi1, x2);
  const complex_t g2a = position_amplitude(in.xi2, x1), g2b = position_amplitude(in.xi2, x2);
  const double num = std::norm(g1a * g2b + g1b * g2a);
  const double s = std::sqrt(in.m2 - 1);
  const double g3a = std::norm(g1a) + std::norm(g2a) + s * 2 * (g1a * std::conj(g2a)).real();
  const double g3b = std::norm(g1b) + std::norm(g2b) + s * 2 * (g1b * std::conj(g2b)).real();
  const double den = g3a * g3b / in.m2;
  if (den < 1e-300) throw std::domain_error("initial_g2: vanishing intensity at detector");
  return num / den;
}

}  // namespace photon_dimer
