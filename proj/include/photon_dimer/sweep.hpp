#pragma once

// Sweep orchestration: maps a declarative sweep description onto the
// observable modules, runs the points (optionally in parallel), and returns
// an ordered table ready for CSV emission. Re-running a spec reproduces the
// table byte for byte: fixed grids, no randomness, ordered reduction.

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "photon_dimer/lindblad.hpp"
#include "photon_dimer/model.hpp"
#include "photon_dimer/observables.hpp"

namespace photon_dimer {

enum class Observable { probs, g2, sbar, smap, lindblad, initg2, scan1, loss };
enum class SweepVar { delta, u, dk, gamma };
enum class DkMode { resonant, zero, fixed };
enum class DeltaAt { fixed, eps2_minus, eps2_zero, eps2_plus };

struct SweepSpec {
  Observable observable = Observable::probs;
  SweepVar sweep_var = SweepVar::delta;
  double min = -4, max = 4;
  int n = 241;
  bool log_grid = false;  // logarithmic grid (u sweeps)

  DkMode dk_mode = DkMode::resonant;
  double dk_fixed = 0;
  DeltaAt delta_at = DeltaAt::fixed;
  double delta = 0;

  DimerParams params;  // validated
  PulseShape shape = PulseShape::gaussian;
  double sigma = 0.005;

  std::vector<double> u_list;      // series for probs / g2 (empty: params.u)
  std::vector<double> gamma_list;  // series for loss
  double box = 8.0;                // sbar / smap integration box
  int map_n = 161;                 // smap grid points per axis

  // lindblad
  double omega_drive = 0.0002;
  double gamma = 0.04;
  int n_max = 4;

  QuadPolicy policy;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  bool quad_warning = false;
};

namespace sweep_detail {

inline std::vector<double> grid(double lo, double hi, int n, bool log_grid) {
  if (n < 2) throw std::domain_error("sweep needs n >= 2");
  if (!(lo < hi)) throw std::domain_error("sweep needs min < max");
  std::vector<double> g(n);
  if (log_grid) {
    if (!(lo > 0)) throw std::domain_error("log grid needs min > 0");
    double l0 = std::log(lo), l1 = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(l0 + (l1 - l0) * i / (n - 1));
  } else {
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  }
  return g;
}

inline int thread_budget(std::size_t points) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("PHOTON_DIMER_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return static_cast<int>(std::min<std::size_t>(hw, points));
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
  int nthreads = thread_budget(n);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

inline double resolve_delta(const SweepSpec& s, const DimerParams& p) {
  if (s.delta_at == DeltaAt::fixed) return s.delta;
  auto es = two_excitation_eigensystem(p);
  switch (s.delta_at) {
    case DeltaAt::eps2_minus: return es.eps2_minus;
    case DeltaAt::eps2_zero: return es.eps2_zero;
    case DeltaAt::eps2_plus: return es.eps2_plus;
    default: return s.delta;
  }
}

inline double resolve_dk(const SweepSpec& s, const DimerParams& p, double delta) {
  switch (s.dk_mode) {
    case DkMode::resonant: return fully_resonant_dk(p, delta);
    case DkMode::zero: return 0;
    case DkMode::fixed: return s.dk_fixed;
  }
  return 0;
}

inline TwoPhotonInput input_for(const SweepSpec& s, double delta, double dk) {
  auto xi1 = make_profile(s.shape, 0.5 * (delta + dk), s.sigma);
  auto xi2 = make_profile(s.shape, 0.5 * (delta - dk), s.sigma);
  return make_two_photon_input(xi1, xi2);
}

}  // namespace sweep_detail

inline Table run(const SweepSpec& spec) {
  using namespace sweep_detail;
  Table tab;
  const DimerParams& base = spec.params;
  std::atomic<bool> warned{false};

  auto vary_u = [&](double u) {
    DimerParams p = base;
    p.u1 = p.u2 = u;
    return p;
  };

  switch (spec.observable) {
    case Observable::scan1: {
      tab.columns = {"E", "re_r", "im_r", "re_t", "im_t", "abs_t2", "abs_r2", "flux"};
      auto g = grid(spec.min, spec.max, spec.n, false);
      tab.rows.resize(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto s = scatter1(base, g[i]);
        double t2 = std::norm(s.t), r2 = std::norm(s.r);
        tab.rows[i] = {g[i], s.r.real(), s.r.imag(), s.t.real(), s.t.imag(), t2, r2, t2 + r2};
      }
      break;
    }

    case Observable::smap: {
      tab.columns = {"dk", "dp", "abs_srr2"};
      auto g = grid(-spec.box, spec.box, spec.map_n, false);
      const double delta = spec.delta;
      tab.rows.resize(g.size() * g.size());
      parallel_for(g.size(), [&](std::size_t i) {
        auto d = bound_state_data(base, 0.5 * (delta + g[i]), 0.5 * (delta - g[i]));
        for (std::size_t j = 0; j < g.size(); ++j) {
          auto s = s_bound_from(d, 0.5 * (delta + g[j]), 0.5 * (delta - g[j]));
          tab.rows[i * g.size() + j] = {g[i], g[j], std::norm(s.s_rr)};
        }
      });
      break;
    }

    case Observable::sbar: {
      tab.columns = {"delta", "u", "gamma_bath", "sbar_rr"};
      auto g = grid(spec.min, spec.max, spec.n, false);
      tab.rows.resize(g.size());
      parallel_for(g.size(), [&](std::size_t i) {
        QuadDiagnostics diag;
        double v = bound_weight(base, g[i], spec.box, spec.policy, &diag);
        if (diag.warning) warned = true;
        tab.rows[i] = {g[i], base.u1, base.gamma_bath, v};
      });
      break;
    }

    case Observable::probs:
    case Observable::g2: {
      const bool is_probs = spec.observable == Observable::probs;
      tab.columns = is_probs
          ? std::vector<std::string>{"delta", "dk", "u", "gamma_bath", "p_ll", "p_lr", "p_rr", "flux"}
          : std::vector<std::string>{"delta", "dk", "u", "gamma_bath", "g2_rr"};
      std::vector<double> us = spec.u_list.empty() ? std::vector<double>{base.u1} : spec.u_list;
      auto g = grid(spec.min, spec.max, spec.n, spec.log_grid && spec.sweep_var == SweepVar::u);

      struct Point {
        DimerParams p;
        double delta, dk, u;
      };
      std::vector<Point> pts;
      for (double u : us) {
        DimerParams p = vary_u(u);
        for (double x : g) {
          double delta, dk;
          if (spec.sweep_var == SweepVar::delta) {
            delta = x;
          } else if (spec.sweep_var == SweepVar::u) {
            p = vary_u(x);
            delta = resolve_delta(spec, p);
          } else {
            throw std::domain_error("probs/g2 sweep variable must be delta or u");
          }
          dk = resolve_dk(spec, p, delta);
          pts.push_back({p, delta, dk, p.u1});
        }
        if (spec.sweep_var == SweepVar::u) break;  // u grid already covers the series
      }
      tab.rows.resize(pts.size());
      parallel_for(pts.size(), [&](std::size_t i) {
        const auto& pt = pts[i];
        auto in = input_for(spec, pt.delta, pt.dk);
        if (is_probs) {
          auto r = scattering_probabilities(pt.p, in, spec.policy);
          if (r.diag.warning) warned = true;
          tab.rows[i] = {pt.delta, pt.dk, pt.u, pt.p.gamma_bath,
                         r.p_ll, r.p_lr, r.p_rr, r.flux_total};
        } else {
          auto r = g2_transmitted(pt.p, in, spec.policy);
          if (r.diag.warning) warned = true;
          tab.rows[i] = {pt.delta, pt.dk, pt.u, pt.p.gamma_bath, r.g2};
        }
      });
      break;
    }

    case Observable::loss: {
      tab.columns = {"delta", "dk", "u", "gamma_bath", "p_rr", "g2_rr"};
      std::vector<double> gammas = spec.gamma_list.empty() ? std::vector<double>{base.gamma_bath}
                                                           : spec.gamma_list;
      auto g = grid(spec.min, spec.max, spec.n, false);
      struct Point {
        DimerParams p;
        double delta, dk;
      };
      std::vector<Point> pts;
      for (double gam : gammas) {
        DimerParams p = apply_bath_loss(base, gam);
        for (double delta : g) pts.push_back({p, delta, resolve_dk(spec, p, delta)});
      }
      tab.rows.resize(pts.size());
      parallel_for(pts.size(), [&](std::size_t i) {
        const auto& pt = pts[i];
        auto in = input_for(spec, pt.delta, pt.dk);
        auto pr = scattering_probabilities(pt.p, in, spec.policy);
        auto g2 = g2_transmitted(pt.p, in, spec.policy);
        if (pr.diag.warning || g2.diag.warning) warned = true;
        tab.rows[i] = {pt.delta, pt.dk, pt.p.u1, pt.p.gamma_bath, pr.p_rr, g2.g2};
      });
      break;
    }

    case Observable::lindblad: {
      tab.columns = {"delta", "n2_occupation", "g2_ss", "residual"};
      auto g = grid(spec.min, spec.max, spec.n, false);
      tab.rows.resize(g.size());
      parallel_for(g.size(), [&](std::size_t i) {
        auto basis = make_fock_basis(spec.n_max);
        auto L = build_liouvillian(base, g[i], spec.omega_drive, spec.gamma, basis);
        auto ss = steady_state(L, basis);
        auto obs = g2_steady(ss.rho, basis);
        tab.rows[i] = {g[i], obs.n2_occupation, obs.g2_ss, ss.residual};
      });
      break;
    }

    case Observable::initg2: {
      tab.columns = {"dk", "m2", "g2_initial"};
      auto g = grid(spec.min, spec.max, spec.n, false);
      const double delta = spec.delta;
      tab.rows.resize(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto in = input_for(spec, delta, g[i]);
        tab.rows[i] = {g[i], in.m2, initial_g2(in, 0, 0)};
      }
      break;
    }
  }
  tab.quad_warning = warned;
  return tab;
}

}  // namespace photon_dimer
