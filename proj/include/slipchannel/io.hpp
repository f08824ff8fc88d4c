#pragma once
#include <string>

#include "slipchannel/coupling.hpp"

namespace slipchannel {

// All writers emit deterministic text (%.17g, '\n' line ends).
void write_timeseries(const std::string& path, const std::vector<SeriesRow>& rows);
void write_energy_csv(const std::string& path, const std::vector<EnergyRecord>& recs);
void write_summary_json(const std::string& path, const SimulationConfig& cfg,
                        const RunResult& res);
// Columnar snapshot of the mapped fields at cell centers: x y u1 u2 p.
void write_snapshot(const std::string& path, const FluidState& fs, const AleMap& m,
                    const Grid& g);

// Run directory layout: config.txt, timeseries.csv, energy.csv, summary.json,
// states/NNNNNN.txt (+ index.txt).
void write_run_dir(const std::string& dir, const SimulationConfig& cfg, const RunResult& res);

struct LoadedRun {
  SimulationConfig cfg;
  std::vector<StoredState> states;
};
LoadedRun load_run_dir(const std::string& dir);

}  // namespace slipchannel
