#pragma once

// Flat key-value configuration files ("key = value", '#' comments) carrying
// the physical parameters and pulse settings, plus locale-independent CSV
// emission of sweep tables.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "photon_dimer/model.hpp"
#include "photon_dimer/sweep.hpp"

namespace photon_dimer {

using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap parse_config_text(std::istream& is, const std::string& origin = "<config>") {
  ConfigMap m;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    auto b = std::find_if(line.begin(), line.end(), notspace);
    auto e = std::find_if(line.rbegin(), line.rend(), notspace).base();
    if (b >= e) continue;
    std::string trimmed(b, e);
    auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected key=value");
    auto strip = [&](std::string s) {
      auto b2 = std::find_if(s.begin(), s.end(), notspace);
      auto e2 = std::find_if(s.rbegin(), s.rend(), notspace).base();
      return b2 < e2 ? std::string(b2, e2) : std::string();
    };
    std::string key = strip(trimmed.substr(0, eq)), val = strip(trimmed.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    m[key] = val;
  }
  return m;
}

inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  return parse_config_text(f, path);
}

inline double config_number(const ConfigMap& m, const std::string& key, double fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': not a number: " + it->second);
  }
}

inline PulseShape parse_shape(const std::string& s) {
  if (s == "gaussian") return PulseShape::gaussian;
  if (s == "lorentzian") return PulseShape::lorentzian;
  if (s == "rising") return PulseShape::rising;
  throw std::runtime_error("unknown pulse shape: " + s);
}

// keys: omega1 omega2 u1 u2 j v1 v2 gamma_bath (energies in units of J),
// plus pulse settings: shape, k0_over_j, sigma_over_j
inline DimerParams params_from_config(const ConfigMap& m) {
  DimerParams raw;
  raw.omega1 = config_number(m, "omega1", 0.0);
  raw.omega2 = config_number(m, "omega2", raw.omega1.real());
  raw.u1 = config_number(m, "u1", 0.0);
  raw.u2 = config_number(m, "u2", raw.u1);
  raw.j_hop = config_number(m, "j", 1.0);
  raw.v1 = config_number(m, "v1", 0.2);
  raw.v2 = config_number(m, "v2", raw.v1);
  raw.gamma_bath = config_number(m, "gamma_bath", 0.0);
  return validate(raw);
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const Table& tab) {
  for (std::size_t c = 0; c < tab.columns.size(); ++c)
    os << (c ? "," : "") << tab.columns[c];
  os << "\n";
  for (const auto& row : tab.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? "," : "") << format_number(row[c]);
    os << "\n";
  }
}

}  // namespace photon_dimer
