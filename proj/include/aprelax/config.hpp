#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aprelax/study.hpp"

namespace aprelax {

/// Resolved run settings: the study parameters plus the self-check knobs.
struct Settings {
  StudyConfig study;
  std::uint64_t seed = 20140101;
  std::size_t cases = 1000;
  std::string out = "out";
};

class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw config_error(key + ": expected a real number, got '" + text + "'");
  return v;
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw config_error(key + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

inline std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& values, F&& format) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ',';
    out += format(values[k]);
  }
  return out;
}

}  // namespace detail

inline ModelName parse_model_name(const std::string& s) {
  if (s == "psystem") return ModelName::PSystem;
  if (s == "gt") return ModelName::GoldsteinTaylor;
  if (s == "euler") return ModelName::IsentropicEuler;
  if (s == "visco") return ModelName::ViscoElastic;
  throw config_error("model: unknown model '" + s + "' (psystem|gt|euler|visco)");
}

inline std::string to_string(ModelName m) {
  switch (m) {
    case ModelName::PSystem: return "psystem";
    case ModelName::GoldsteinTaylor: return "gt";
    case ModelName::IsentropicEuler: return "euler";
    case ModelName::ViscoElastic: return "visco";
  }
  return "?";
}

inline InitialKind parse_ic(const std::string& s) {
  if (s == "discontinuous") return InitialKind::Discontinuous;
  if (s == "smooth") return InitialKind::Smooth;
  throw config_error("ic: unknown initial data '" + s + "' (discontinuous|smooth)");
}

inline BoundaryMode parse_boundary(const std::string& s) {
  if (s == "zeroflux") return BoundaryMode::ZeroFlux;
  if (s == "periodic") return BoundaryMode::Periodic;
  throw config_error("boundary: unknown boundary '" + s + "' (zeroflux|periodic)");
}

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "model", "ic",    "n",        "eps",      "sigma",    "gamma",
      "mu",    "tau_star", "t_final", "cfl",    "boundary", "domain_a",
      "domain_b", "diffusion_number", "phi_floor", "seed", "cases", "out"};
  return keys;
}

/// Applies one key = value assignment; unknown keys are rejected.
inline void apply_setting(Settings& s, const std::string& key, const std::string& value) {
  auto& c = s.study;
  if (key == "model") {
    c.models.clear();
    if (value == "all") {
      c.models = StudyConfig{}.models;
    } else {
      for (const auto& item : detail::split_list(value)) c.models.push_back(parse_model_name(item));
    }
  } else if (key == "ic") {
    c.ics.clear();
    if (value == "all") {
      c.ics = StudyConfig{}.ics;
    } else {
      for (const auto& item : detail::split_list(value)) c.ics.push_back(parse_ic(item));
    }
  } else if (key == "n") {
    c.n_list.clear();
    for (const auto& item : detail::split_list(value))
      c.n_list.push_back(static_cast<std::size_t>(detail::parse_unsigned(key, item)));
  } else if (key == "eps") {
    c.eps_list.clear();
    for (const auto& item : detail::split_list(value))
      c.eps_list.push_back(detail::parse_real(key, item));
  } else if (key == "sigma") {
    c.sigma = detail::parse_real(key, value);
  } else if (key == "gamma") {
    c.gamma = detail::parse_real(key, value);
  } else if (key == "mu") {
    c.mu = detail::parse_real(key, value);
  } else if (key == "tau_star") {
    c.tau_star = detail::parse_real(key, value);
  } else if (key == "t_final") {
    c.t_final = detail::parse_real(key, value);
  } else if (key == "cfl") {
    c.cfl = detail::parse_real(key, value);
  } else if (key == "boundary") {
    c.boundary = parse_boundary(value);
  } else if (key == "domain_a") {
    c.domain_a = detail::parse_real(key, value);
  } else if (key == "domain_b") {
    c.domain_b = detail::parse_real(key, value);
  } else if (key == "diffusion_number") {
    c.diffusion_number = detail::parse_real(key, value);
  } else if (key == "phi_floor") {
    c.phi_floor = detail::parse_real(key, value);
  } else if (key == "seed") {
    s.seed = detail::parse_unsigned(key, value);
  } else if (key == "cases") {
    s.cases = static_cast<std::size_t>(detail::parse_unsigned(key, value));
  } else if (key == "out") {
    s.out = value;
  } else {
    throw config_error("unknown configuration key '" + key + "'");
  }
}

/// Flat `key = value` text, one pair per line, `#` starts a comment.
inline void apply_config_text(Settings& s, std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(s, detail::trim(body.substr(0, eq)), detail::trim(body.substr(eq + 1)));
  }
}

inline void apply_config_file(Settings& s, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("config: cannot read '" + path + "'");
  std::ostringstream text;
  text << is.rdbuf();
  apply_config_text(s, text.str());
}

/// Every key with its resolved value; reading it back reproduces `s`.
inline std::string dump_config(const Settings& s) {
  const auto& c = s.study;
  std::ostringstream os;
  os << "model = " << detail::join(c.models, [](ModelName m) { return to_string(m); }) << '\n';
  os << "ic = " << detail::join(c.ics, [](InitialKind k) { return std::string(to_string(k)); })
     << '\n';
  os << "n = " << detail::join(c.n_list, [](std::size_t n) { return std::to_string(n); }) << '\n';
  os << "eps = " << detail::join(c.eps_list, detail::format_exact) << '\n';
  os << "sigma = " << detail::format_exact(c.sigma) << '\n';
  os << "gamma = " << detail::format_exact(c.gamma) << '\n';
  os << "mu = " << detail::format_exact(c.mu) << '\n';
  os << "tau_star = " << detail::format_exact(c.tau_star) << '\n';
  os << "t_final = " << detail::format_exact(c.t_final) << '\n';
  os << "cfl = " << detail::format_exact(c.cfl) << '\n';
  os << "boundary = " << to_string(c.boundary) << '\n';
  os << "domain_a = " << detail::format_exact(c.domain_a) << '\n';
  os << "domain_b = " << detail::format_exact(c.domain_b) << '\n';
  os << "diffusion_number = " << detail::format_exact(c.diffusion_number) << '\n';
  os << "phi_floor = " << detail::format_exact(c.phi_floor) << '\n';
  os << "seed = " << s.seed << '\n';
  os << "cases = " << s.cases << '\n';
  os << "out = " << s.out << '\n';
  return os.str();
}

}  // namespace aprelax
