#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rotary/config.hpp"
#include "rotary/metrics.hpp"
#include "rotary/rng.hpp"

namespace rotary {

/// Seeded initial state: positions, then references, rejection-sampled
/// uniformly inside the region; then phases, sampled uniformly on [0, 2*pi)
/// and sorted ascending. The draw order is part of the reproducibility
/// contract.
SwarmState initial_state(const SimConfig& cfg, const RegionBoundary& region);

/// Fixed-step loop shared by the file-writing run and in-memory runs.
/// `on_sample` fires at step 0, every emit_every steps, and at the final
/// step. `steps_done` (optional) tracks progress even when a step throws.
void run_loop(const SimConfig& cfg, const RegionBoundary& region,
              const DensityField& density, SwarmState& state,
              const std::function<void(const SwarmState&, long)>& on_sample,
              std::vector<SimEvent>& events, long* steps_done = nullptr);

/// Full simulation to files: timeseries.csv, globals.csv, snapshots.jsonl,
/// meta.json under out_dir (created if missing). Returns the process exit
/// code: 0 done, 2 a dynamics error stopped the run early (partial outputs
/// are kept and the event is recorded in meta.json).
int run(const SimConfig& cfg, const std::string& out_dir);

/// In-memory variant: metric records at the emit cadence, nothing written.
std::vector<MetricsRecord> simulate_metrics(const SimConfig& cfg);

/// Property checks against the config's region/density (ray-boundary
/// residuals, density positivity, gradient-vs-finite-difference, partition
/// conservation). Prints one PASS/FAIL line per check to `log`; returns 0
/// when everything passed, 1 otherwise.
int invariant_checks(const SimConfig& cfg, std::ostream& log);

}  // namespace rotary
