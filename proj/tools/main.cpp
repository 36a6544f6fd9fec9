#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sharpib/config.hpp"
#include "sharpib/errors.hpp"
#include "sharpib/simulation.hpp"
#include "sharpib/verification.hpp"

namespace {

constexpr int kSolverFailure = 2;
constexpr int kConfigError = 3;

std::vector<int> parse_resolutions(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw sharpib::ConfigError("bad resolution '" + item + "'");
    }
  }
  return out;
}

void print_errors(const std::vector<sharpib::ErrorReport>& errors) {
  for (const auto& e : errors)
    std::printf("  %-16s N=%-4d L1=%.6e L2=%.6e Linf=%.6e\n", e.field.c_str(), e.N, e.l1, e.l2, e.linf);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Immersed-boundary fluid-structure simulator"};
  app.require_subcommand(1);

  std::string config_path, method, out_dir, resolutions = "32,64,128";
  int N = 0;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--method", method, "original | sharp_steady | sharp_diffusion");
  run->add_option("--N", N, "Grid resolution");
  run->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over resolutions");
  sweep->add_option("--config", config_path, "Config file")->required();
  sweep->add_option("--resolutions", resolutions, "Comma-separated N list");
  sweep->add_option("--method", method, "original | sharp_steady | sharp_diffusion");
  sweep->add_option("--out", out_dir, "Output directory");

  auto* verify = app.add_subcommand("verify", "Run the oracle and property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (verify->parsed()) {
      bool all = true;
      for (const auto& r : sharpib::run_property_suite()) {
        std::printf("[%s] %s: %.6e %s %.3e\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.value,
                    r.comparison.c_str(), r.threshold);
        all = all && r.passed;
      }
      return all ? 0 : 1;
    }

    sharpib::SimulationConfig cfg = sharpib::load_config(config_path);
    if (!method.empty()) cfg.method = sharpib::method_from_string(method);
    if (N > 0) cfg.N = N;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.validate();

    if (run->parsed()) {
      const sharpib::RunResult r = sharpib::run_scenario(cfg);
      std::printf("%s %s N=%d: %d steps to t=%.6g in %.2f s%s\n", sharpib::to_string(cfg.scenario),
                  sharpib::to_string(cfg.method), cfg.N, r.steps, r.time, r.wall_seconds,
                  r.steady_exit ? " (steady)" : "");
      print_errors(r.errors);
      return 0;
    }

    const sharpib::SweepResult s = sharpib::run_convergence_sweep(cfg, parse_resolutions(resolutions));
    bool failed = false;
    for (const auto& r : s.runs) {
      if (!r.ok) {
        std::fprintf(stderr, "N=%d failed: %s\n", r.config.N, r.failure.c_str());
        failed = true;
      }
    }
    for (const auto& e : s.rates)
      if (e.fit) std::printf("  %-16s %-5s rate=%.3f\n", e.field.c_str(), e.norm.c_str(), e.fit->series.rate);
    return failed ? kSolverFailure : 0;
  } catch (const sharpib::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const sharpib::Error& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kSolverFailure;
  }
}
