// photon-dimer: command-line front end for the dimer scattering calculators.
// Emits CSV (header row, '.' decimal, deterministic row order); exit code 0,
// or 2 when any sweep point carried a quadrature warning.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "photon_dimer/config.hpp"
#include "photon_dimer/sweep.hpp"

namespace pd = photon_dimer;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::string shape = "gaussian";
  double sigma = 0.005;
  double u = std::nan("");        // sets u1 = u2
  double v2 = std::nan("");       // sets v1 = v2 = sqrt(v2)
  double gamma_bath = std::nan("");
};

void add_common(CLI::App* cmd, CommonArgs& c) {
  cmd->add_option("--config", c.config_path, "parameter file (key = value lines)");
  cmd->add_option("--set", c.overrides, "override a config key, e.g. --set u1=5")
      ->take_all();
  cmd->add_option("--out", c.out_path, "output CSV file (default: stdout)");
  cmd->add_option("--shape", c.shape, "pulse shape: gaussian|lorentzian|rising");
  cmd->add_option("--sigma", c.sigma, "pulse bandwidth sigma/J");
  cmd->add_option("--v2", c.v2, "waveguide coupling V^2/J for both ports");
  cmd->add_option("--gamma-bath", c.gamma_bath, "extra cavity loss rate");
  for (const char* key : {"omega1", "omega2", "u1", "u2", "j", "v1"})
    cmd->add_option_function<double>(
        std::string("--") + key,
        [&c, key](double v) { c.overrides.push_back(std::string(key) + "=" + pd::format_number(v)); },
        std::string("parameter key ") + key);
}

pd::ConfigMap merged_config(const CommonArgs& c) {
  pd::ConfigMap m;
  if (!c.config_path.empty()) m = pd::parse_config_file(c.config_path);
  for (const auto& kv : c.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::runtime_error("--set expects key=value: " + kv);
    m[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (!std::isnan(c.u)) m["u1"] = m["u2"] = pd::format_number(c.u);
  if (!std::isnan(c.v2)) m["v1"] = m["v2"] = pd::format_number(std::sqrt(c.v2));
  if (!std::isnan(c.gamma_bath)) m["gamma_bath"] = pd::format_number(c.gamma_bath);
  return m;
}

void finish(const pd::Table& tab, const CommonArgs& c, int& exit_code) {
  if (c.out_path.empty()) {
    pd::write_csv(std::cout, tab);
  } else {
    std::ofstream f(c.out_path);
    if (!f) throw std::runtime_error("cannot open output file: " + c.out_path);
    pd::write_csv(f, tab);
  }
  if (tab.quad_warning) exit_code = 2;
}

pd::DkMode parse_dk_mode(const std::string& s, double& fixed) {
  if (s == "resonant") return pd::DkMode::resonant;
  if (s == "zero") return pd::DkMode::zero;
  if (s.rfind("fixed:", 0) == 0) {
    fixed = std::stod(s.substr(6));
    return pd::DkMode::fixed;
  }
  throw std::runtime_error("unknown dk mode: " + s + " (resonant|zero|fixed:<value>)");
}

pd::DeltaAt parse_delta_at(const std::string& s, double& fixed) {
  if (s == "eps2_minus") return pd::DeltaAt::eps2_minus;
  if (s == "eps2_zero") return pd::DeltaAt::eps2_zero;
  if (s == "eps2_plus") return pd::DeltaAt::eps2_plus;
  fixed = std::stod(s);
  return pd::DeltaAt::fixed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"few-photon transport through a waveguide-coupled Bose-Hubbard dimer"};
  app.require_subcommand(1);

  CommonArgs c;
  pd::SweepSpec spec;
  double emin = -10, emax = 10;
  int npts_scan = 2001, npts = 241;  // default grids: fine for r/t, 241 per sweep
  std::string dk_mode = "resonant", sweep_var = "delta", delta_at = "0";
  std::vector<double> u_list, gamma_list;

  auto* scan1 = app.add_subcommand("scan1", "single-photon r/t over an energy window");
  scan1->add_option("--emin", emin);
  scan1->add_option("--emax", emax);
  scan1->add_option("--n", npts_scan);
  add_common(scan1, c);

  auto* smap = app.add_subcommand("smap", "|S_RR|^2 over the (dk, dp) plane at fixed delta");
  smap->add_option("--delta", spec.delta);
  smap->add_option("--box", spec.box);
  smap->add_option("--n", spec.map_n);
  smap->add_option("--u", c.u, "interaction strength for both cavities");
  add_common(smap, c);

  auto* sbar = app.add_subcommand("sbar", "integrated bound weight over a delta sweep");
  sbar->add_option("--min", emin);
  sbar->add_option("--max", emax);
  sbar->add_option("--n", npts);
  sbar->add_option("--box", spec.box);
  sbar->add_option("--u", c.u, "interaction strength for both cavities");
  add_common(sbar, c);

  auto* probs = app.add_subcommand("probs", "scattering probabilities over a sweep");
  probs->add_option("--sweep", sweep_var, "delta|u");
  probs->add_option("--min", emin);
  probs->add_option("--max", emax);
  probs->add_option("--n", npts);
  probs->add_option("--dk-mode", dk_mode, "resonant|zero|fixed:<v>");
  probs->add_option("--delta-at", delta_at, "eps2_minus|eps2_zero|eps2_plus|<value> (u sweeps)");
  probs->add_option("--u", u_list, "one or more interaction strengths")->take_all();
  probs->add_flag("--log-grid", spec.log_grid, "logarithmic sweep grid");
  add_common(probs, c);

  auto* g2 = app.add_subcommand("g2", "transmitted-light g2 over a sweep");
  g2->add_option("--sweep", sweep_var, "delta|u");
  g2->add_option("--min", emin);
  g2->add_option("--max", emax);
  g2->add_option("--n", npts);
  g2->add_option("--dk-mode", dk_mode, "resonant|zero|fixed:<v>");
  g2->add_option("--delta-at", delta_at, "eps2_minus|eps2_zero|eps2_plus|<value> (u sweeps)");
  g2->add_option("--u", u_list, "one or more interaction strengths")->take_all();
  g2->add_flag("--log-grid", spec.log_grid, "logarithmic sweep grid");
  add_common(g2, c);

  auto* loss = app.add_subcommand("loss", "P_RR and g2 vs delta for a list of bath rates");
  loss->add_option("--min", emin);
  loss->add_option("--max", emax);
  loss->add_option("--n", npts);
  loss->add_option("--dk-mode", dk_mode);
  loss->add_option("--gamma-list", gamma_list, "bath loss rates")->take_all();
  add_common(loss, c);

  auto* lind = app.add_subcommand("lindblad", "driven-dissipative steady-state g2 vs delta");
  lind->add_option("--min", emin);
  lind->add_option("--max", emax);
  lind->add_option("--n", npts);
  lind->add_option("--omega", spec.omega_drive);
  lind->add_option("--gamma", spec.gamma);
  lind->add_option("--nmax", spec.n_max);
  lind->add_option("--u", c.u, "interaction strength for both cavities");
  add_common(lind, c);

  auto* initg2 = app.add_subcommand("initg2", "initial two-photon correlation vs dk");
  initg2->add_option("--dk-min", emin);
  initg2->add_option("--dk-max", emax);
  initg2->add_option("--n", npts);
  initg2->add_option("--delta", spec.delta);
  add_common(initg2, c);

  CLI11_PARSE(app, argc, argv);

  int exit_code = 0;
  try {
    auto cfg = merged_config(c);
    spec.params = pd::params_from_config(cfg);
    spec.shape = pd::parse_shape(cfg.count("shape") ? cfg.at("shape") : c.shape);
    spec.sigma = pd::config_number(cfg, "sigma_over_j", c.sigma);
    spec.min = emin;
    spec.max = emax;
    spec.n = npts;
    spec.dk_mode = parse_dk_mode(dk_mode, spec.dk_fixed);
    spec.delta_at = parse_delta_at(delta_at, spec.delta);
    if (delta_at != "0" && spec.delta_at == pd::DeltaAt::fixed) spec.delta = std::stod(delta_at);
    spec.sweep_var = sweep_var == "u" ? pd::SweepVar::u : pd::SweepVar::delta;
    spec.u_list = u_list;
    spec.gamma_list = gamma_list;

    if (scan1->parsed()) {
      spec.observable = pd::Observable::scan1;
      spec.n = npts_scan;
    }
    else if (smap->parsed()) spec.observable = pd::Observable::smap;
    else if (sbar->parsed()) spec.observable = pd::Observable::sbar;
    else if (probs->parsed()) spec.observable = pd::Observable::probs;
    else if (g2->parsed()) spec.observable = pd::Observable::g2;
    else if (loss->parsed()) spec.observable = pd::Observable::loss;
    else if (lind->parsed()) spec.observable = pd::Observable::lindblad;
    else if (initg2->parsed()) spec.observable = pd::Observable::initg2;

    auto tab = pd::run(spec);
    finish(tab, c, exit_code);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
