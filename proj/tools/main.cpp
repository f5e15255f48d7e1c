#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rotary/config.hpp"
#include "rotary/errors.hpp"
#include "rotary/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDynamics = 2;
constexpr int kExitUsage = 64;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotary coverage swarm simulator"};

  std::string config_path;
  std::string out_dir = "./out";
  std::optional<std::uint64_t> seed;
  std::optional<double> t_final;
  std::optional<double> dt;
  std::optional<int> emit_every;
  bool check_only = false;

  app.add_option("--config", config_path, "Path to the JSON run configuration")
      ->required();
  app.add_option("--out", out_dir, "Output directory (created if missing)");
  app.add_option("--seed", seed, "Override the RNG seed from the config");
  app.add_option("--t-final", t_final, "Override the final simulation time");
  app.add_option("--dt", dt, "Override the integrator time step");
  app.add_option("--emit-every", emit_every,
                 "Override the sampling cadence (in steps)");
  app.add_flag("--check", check_only,
               "Run numerical self-checks against the config instead of simulating");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    rotary::SimConfig cfg = rotary::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (t_final) cfg.integrator.t_final = *t_final;
    if (dt) cfg.integrator.dt = *dt;
    if (emit_every) cfg.emit_every = *emit_every;
    rotary::validate_config(cfg);

    if (check_only) {
      return rotary::invariant_checks(cfg, std::cout) == 0 ? kExitOk : kExitConfig;
    }
    const int rc = rotary::run(cfg, out_dir);
    if (rc != 0) {
      std::cerr << "simulation stopped early; partial outputs and meta.json "
                   "written to "
                << out_dir << "\n";
      return kExitDynamics;
    }
    return kExitOk;
  } catch (const rotary::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rotary::SimError& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitDynamics;
  }
}
