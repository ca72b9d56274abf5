// runner.hpp: executes run configurations and figure presets

#pragma once

#include "eplab/config.hpp"
#include "eplab/presets.hpp"
#include "eplab/scattering.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eplab {

struct RunOptions {
    std::optional<std::string> output_dir;  // ep-find writes a file only when set
    std::optional<Format> format;           // overrides the config
    std::optional<int> steps;               // overrides the sweep step count
    bool plot{false};                       // also write a matplotlib script
};

struct RunResult {
    std::vector<std::string> files;  // paths written, in order
    std::string report;              // ep-find candidate table
    std::string summary;             // one line, no trailing newline
};

RunResult run(RunConfig config, const RunOptions& options = {});

// All panels when panel is empty.
RunResult run_figure(int figure_id, std::optional<Panel> panel, const RunOptions& options = {});

// Union of the default energy windows of every y in the plan, `points` wide.
std::vector<double> surface_energy_grid(const SweepPlan& plan, int points = 801);

// Analytic (constant-coupling mode) candidates followed by scan candidates.
std::vector<EPCandidate> find_eps(const RunConfig& config);

}  // namespace eplab
