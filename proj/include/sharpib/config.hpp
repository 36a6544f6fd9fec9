#pragma once

/// Run configuration. Files are flat `key = value` text with `#` comments;
/// physical quantities carry their unit in the key name, e.g.
///
///   scenario = static_ring
///   method = sharp_steady
///   N = 64
///   final_time_s = 0.01
///   ring_radius_mm = 0.25

#include <map>
#include <string>

#include <json.hpp>

#include "sharpib/coupling.hpp"
#include "sharpib/fluid_solver.hpp"

namespace sharpib {

enum class Scenario { StaticRing, InflatingRing, CompressedBlock };
enum class Method { Original, SharpSteady, SharpDiffusion };
enum class BlockLoad { Smooth, Discontinuous };

const char* to_string(Scenario s);
const char* to_string(Method m);
const char* to_string(BlockLoad l);
Scenario scenario_from_string(const std::string& name);
Method method_from_string(const std::string& name);
BlockLoad block_load_from_string(const std::string& name);

struct SimulationConfig {
  Scenario scenario = Scenario::StaticRing;
  Method method = Method::Original;
  /// Diffusion coefficient for SharpDiffusion; gamma_is_h selects gamma = h.
  double gamma = 1.0;
  bool gamma_is_h = false;

  int N = 32;
  double dt_factor = 0.25;
  double mesh_factor = 2.0;
  double final_time = 0.01;
  KernelType kernel = KernelType::IB4;
  /// Clip kernel stencils at the grid edge instead of failing.
  bool kernel_clip_to_grid = false;
  Advection advection = Advection::Centered;
  bool lumped_mass = false;
  int quadrature_order = 2;
  std::string output_dir;
  unsigned seed = 0;
  bool write_fields = true;

  double rho = 1.0;
  double mu = 1.0;
  double mu_e = 1.0;

  // static ring
  double ring_radius = 0.25;
  double ring_width = 0.0625;

  // inflating ring
  double inner_radius = 0.25;
  double outer_radius = 0.3125;
  double added_area = 0.05;
  double injection_time = 0.1;
  double source_radius = 0.1;
  double sample_radius = 0.1;

  // compressed block
  BlockLoad block_load = BlockLoad::Smooth;
  double nu = 0.0;
  double load_max = 200.0;
  double load_time = 10.0;
  double load_a = 4.0;
  double load_b = 16.0;
  double tether_factor = 0.1;
  /// Early exit once max|u| < steady_factor * L / T (0 disables).
  double steady_factor = 1e-6;

  /// Paper-scale defaults for each scenario.
  static SimulationConfig defaults(Scenario scenario);

  void validate() const;

  double domain_length() const;
  int cells_per_axis() const;
  double h() const;
  /// Nominal step dt_factor * h; the last of num_steps() steps is shortened
  /// so the run ends exactly at final_time.
  double dt() const;
  int num_steps() const;
  double step_size(int n) const;
  double resolved_gamma() const;
  double tether_stiffness() const;

  /// Every setting with its config-file key.
  nlohmann::ordered_json to_json() const;
};

/// Parses `key = value` text into a map; duplicate keys are an error.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies key/value overrides on top of cfg; unknown keys and malformed
/// values throw ConfigError.
void apply_settings(SimulationConfig& cfg, const std::map<std::string, std::string>& kv);

/// Reads a config file. The scenario key (if present) selects the defaults
/// that the remaining keys override.
SimulationConfig load_config(const std::string& path);
SimulationConfig config_from_string(const std::string& text);

}  // namespace sharpib
