#include "sharpib/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "sharpib/errors.hpp"

namespace sharpib {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::StaticRing: return "static_ring";
    case Scenario::InflatingRing: return "inflating_ring";
    case Scenario::CompressedBlock: return "compressed_block";
  }
  return "?";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::Original: return "original";
    case Method::SharpSteady: return "sharp_steady";
    case Method::SharpDiffusion: return "sharp_diffusion";
  }
  return "?";
}

const char* to_string(BlockLoad l) { return l == BlockLoad::Smooth ? "smooth" : "discontinuous"; }

Scenario scenario_from_string(const std::string& name) {
  if (name == "static_ring") return Scenario::StaticRing;
  if (name == "inflating_ring") return Scenario::InflatingRing;
  if (name == "compressed_block") return Scenario::CompressedBlock;
  throw ConfigError("unknown scenario '" + name + "'");
}

Method method_from_string(const std::string& name) {
  if (name == "original") return Method::Original;
  if (name == "sharp_steady" || name == "sharp-steady") return Method::SharpSteady;
  if (name == "sharp_diffusion" || name == "sharp-diffusion") return Method::SharpDiffusion;
  throw ConfigError("unknown method '" + name + "'");
}

BlockLoad block_load_from_string(const std::string& name) {
  if (name == "smooth") return BlockLoad::Smooth;
  if (name == "discontinuous") return BlockLoad::Discontinuous;
  throw ConfigError("unknown block load '" + name + "'");
}

SimulationConfig SimulationConfig::defaults(Scenario scenario) {
  SimulationConfig c;
  c.scenario = scenario;
  switch (scenario) {
    case Scenario::StaticRing:
      break;
    case Scenario::InflatingRing:
      c.mu_e = 1e4;
      c.dt_factor = 0.0125;
      c.mesh_factor = 1.0;
      c.final_time = 1.0;
      break;
    case Scenario::CompressedBlock:
      c.N = 16;
      c.mu = 0.16;
      c.mu_e = 80.194;
      c.dt_factor = 0.005;
      c.mesh_factor = 1.0;
      c.final_time = 50.0;
      c.kernel_clip_to_grid = true;
      break;
  }
  return c;
}

void SimulationConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (N < 16 || (N & (N - 1)) != 0) fail("N must be a power of two >= 16, got " + std::to_string(N));
  if (!(dt_factor > 0.0) || !std::isfinite(dt_factor)) fail("dt_factor must be positive");
  if (!(mesh_factor > 0.0) || !std::isfinite(mesh_factor)) fail("mesh_factor must be positive");
  if (!(final_time > 0.0) || !std::isfinite(final_time)) fail("final_time_s must be positive");
  if (!gamma_is_h && !(gamma > 0.0)) fail("gamma must be positive or 'h'");
  if (quadrature_order < 1 || quadrature_order > 24) fail("quadrature_order must lie in [1, 24]");
  if (!(rho > 0.0)) fail("density must be positive");
  if (!(mu > 0.0)) fail("viscosity must be positive");
  if (!(mu_e >= 0.0)) fail("shear modulus must be non-negative");
  if (!(sample_radius > 0.0) || !(source_radius > 0.0)) fail("kernel radii must be positive");
  if (!(steady_factor >= 0.0)) fail("steady_factor must be non-negative");
  switch (scenario) {
    case Scenario::StaticRing:
      if (!(ring_radius > 0.0) || !(ring_width > 0.0)) fail("ring radius and width must be positive");
      if (ring_radius + ring_width >= 0.5) fail("ring does not fit in the unit square");
      break;
    case Scenario::InflatingRing:
      if (!(inner_radius > 0.0) || !(outer_radius > inner_radius)) fail("need 0 < inner_radius < outer_radius");
      if (!(added_area >= 0.0)) fail("added_area must be non-negative");
      if (!(injection_time > 0.0)) fail("injection_time must be positive");
      if (std::sqrt(outer_radius * outer_radius + added_area / std::numbers::pi) >= 1.0) fail("inflated ring leaves the domain");
      break;
    case Scenario::CompressedBlock:
      if (!(nu >= 0.0 && nu < 0.5)) fail("poisson_ratio must lie in [0, 0.5)");
      if (!(load_time > 0.0)) fail("load_time must be positive");
      if (!(load_a < load_b)) fail("load interval must satisfy load_start < load_end");
      if (!(tether_factor >= 0.0)) fail("tether_factor must be non-negative");
      break;
  }
}

double SimulationConfig::domain_length() const {
  switch (scenario) {
    case Scenario::StaticRing: return 1.0;
    case Scenario::InflatingRing: return 2.0;
    case Scenario::CompressedBlock: return 30.0;
  }
  return 1.0;
}

int SimulationConfig::cells_per_axis() const { return scenario == Scenario::InflatingRing ? 2 * N : N; }

double SimulationConfig::h() const { return domain_length() / cells_per_axis(); }

int SimulationConfig::num_steps() const {
  return std::max(1, static_cast<int>(std::ceil(final_time / (dt_factor * h()) - 1e-9)));
}

double SimulationConfig::dt() const { return dt_factor * h(); }

double SimulationConfig::step_size(int n) const {
  if (n < num_steps() - 1) return dt();
  return final_time - (num_steps() - 1) * dt();
}

double SimulationConfig::resolved_gamma() const { return gamma_is_h ? h() : gamma; }

double SimulationConfig::tether_stiffness() const {
  const double d = dt_factor * h();
  return tether_factor * h() / (d * d);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
  return x;
}

long parse_int(const std::string& key, const std::string& v) {
  long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + v + "'");
}

struct Entry {
  const char* key;
  std::function<void(SimulationConfig&, const std::string&)> set;
  std::function<nlohmann::ordered_json(const SimulationConfig&)> get;
};

template <class T>
Entry number(const char* key, T SimulationConfig::*field) {
  return {key,
          [key, field](SimulationConfig& c, const std::string& v) {
            if constexpr (std::is_same_v<T, double>)
              c.*field = parse_double(key, v);
            else
              c.*field = static_cast<T>(parse_int(key, v));
          },
          [field](const SimulationConfig& c) { return nlohmann::ordered_json(c.*field); }};
}

Entry flag(const char* key, bool SimulationConfig::*field) {
  return {key, [key, field](SimulationConfig& c, const std::string& v) { c.*field = parse_bool(key, v); },
          [field](const SimulationConfig& c) { return nlohmann::ordered_json(c.*field); }};
}

const std::vector<Entry>& entries() {
  using C = SimulationConfig;
  static const std::vector<Entry> table = {
      {"scenario", [](C& c, const std::string& v) { c.scenario = scenario_from_string(v); },
       [](const C& c) { return nlohmann::ordered_json(to_string(c.scenario)); }},
      {"method", [](C& c, const std::string& v) { c.method = method_from_string(v); },
       [](const C& c) { return nlohmann::ordered_json(to_string(c.method)); }},
      {"gamma_mm2_per_s",
       [](C& c, const std::string& v) {
         c.gamma_is_h = v == "h";
         if (!c.gamma_is_h) c.gamma = parse_double("gamma_mm2_per_s", v);
       },
       [](const C& c) { return c.gamma_is_h ? nlohmann::ordered_json("h") : nlohmann::ordered_json(c.gamma); }},
      number("N", &C::N),
      number("dt_factor", &C::dt_factor),
      number("mesh_factor", &C::mesh_factor),
      number("final_time_s", &C::final_time),
      {"kernel", [](C& c, const std::string& v) { c.kernel = kernel_from_string(v); },
       [](const C& c) { return nlohmann::ordered_json(to_string(c.kernel)); }},
      flag("kernel_clip_to_grid", &C::kernel_clip_to_grid),
      {"advection", [](C& c, const std::string& v) { c.advection = advection_from_string(v); },
       [](const C& c) { return nlohmann::ordered_json(to_string(c.advection)); }},
      flag("lumped_mass", &C::lumped_mass),
      number("quadrature_order", &C::quadrature_order),
      {"output_dir", [](C& c, const std::string& v) { c.output_dir = v; },
       [](const C& c) { return nlohmann::ordered_json(c.output_dir); }},
      number("seed", &C::seed),
      flag("write_fields", &C::write_fields),
      number("density_kg_per_mm3", &C::rho),
      number("viscosity_N_s_per_mm2", &C::mu),
      number("shear_modulus_N_per_mm", &C::mu_e),
      number("ring_radius_mm", &C::ring_radius),
      number("ring_width_mm", &C::ring_width),
      number("inner_radius_mm", &C::inner_radius),
      number("outer_radius_mm", &C::outer_radius),
      number("added_area_mm2", &C::added_area),
      number("injection_time_s", &C::injection_time),
      number("source_radius_mm", &C::source_radius),
      number("sample_radius_mm", &C::sample_radius),
      {"block_load", [](C& c, const std::string& v) { c.block_load = block_load_from_string(v); },
       [](const C& c) { return nlohmann::ordered_json(to_string(c.block_load)); }},
      number("poisson_ratio", &C::nu),
      number("load_max_N_per_mm2", &C::load_max),
      number("load_time_s", &C::load_time),
      number("load_start_mm", &C::load_a),
      number("load_end_mm", &C::load_b),
      number("tether_factor", &C::tether_factor),
      number("steady_factor", &C::steady_factor),
  };
  return table;
}

}  // namespace

nlohmann::ordered_json SimulationConfig::to_json() const {
  nlohmann::ordered_json j;
  for (const Entry& e : entries()) j[e.key] = e.get(*this);
  j["resolved"] = {{"h_mm", h()},
                   {"dt_s", dt()},
                   {"steps", num_steps()},
                   {"cells_per_axis", cells_per_axis()},
                   {"gamma_mm2_per_s", resolved_gamma()}};
  if (scenario == Scenario::CompressedBlock) j["resolved"]["tether_stiffness"] = tether_stiffness();
  return j;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return kv;
}

void apply_settings(SimulationConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    const Entry* match = nullptr;
    for (const Entry& e : entries())
      if (key == e.key) match = &e;
    if (!match) throw ConfigError("unknown key '" + key + "'");
    try {
      match->set(cfg, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ConfigError("'" + key + "': " + ex.what());
    }
  }
}

SimulationConfig config_from_string(const std::string& text) {
  auto kv = parse_key_values(text);
  Scenario scenario = Scenario::StaticRing;
  if (auto it = kv.find("scenario"); it != kv.end()) scenario = scenario_from_string(it->second);
  SimulationConfig cfg = SimulationConfig::defaults(scenario);
  apply_settings(cfg, kv);
  cfg.validate();
  return cfg;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_string(ss.str());
}

}  // namespace sharpib
