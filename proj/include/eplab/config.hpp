// config.hpp: run configuration files
//
// INI-style text, one `key = value` per line, `#` starts a comment:
//
//   [levels]
//   1.curve = linear 1 -0.5        # linear c0 c1 | sqrt c | tabulated a:e a:e ...
//   1.gamma_half = -0.5
//   2.curve = sqrt 1
//   2.gamma_half = -0.5
//
//   [coupling]
//   mode = gaussian                # constant | gaussian | y-param
//   omega = 0 0.05                 # re im (constant, gaussian)
//   omega0 = 0.4                   # y-param
//   y = 1                          # y-param
//   topology = pair                # optional; pair for N = 2, star otherwise
//
//   [sweep]
//   param = a                      # a | y
//   start = 0.01
//   stop = 2
//   steps = 1000
//   fixed = 0.8                    # a of a y-sweep; y of an a-sweep (defaults to coupling.y)
//
//   [xsec]
//   a = 0.8                        # cross-section point; y comes from coupling.y
//   e_start = -1                   # optional energy window, both or neither
//   e_stop = 2
//   points = 801
//
//   [epfind]
//   a_start = 0.01                 # defaults to the a-sweep range, else [0.01, 2]
//   a_stop = 2
//   y_start = 0                    # y-param only; defaults to [0, 1]
//   y_stop = 1
//   scan_y = true
//   points = 400
//
//   [output]
//   action = sweep                 # sweep | ep-find | cross-section | surface
//   format = csv                   # csv | json
//   name = trajectories            # output file stem
//
// Unknown sections and keys are rejected.

#pragma once

#include "eplab/epfinder.hpp"
#include "eplab/model.hpp"
#include "eplab/sweep.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace eplab {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& what, int line_no, std::string field_path)
        : std::runtime_error(what), line(line_no), field(std::move(field_path)) {}
    int line;           // 0 for semantic errors
    std::string field;  // dotted path, empty for syntax errors
};

enum class Action { sweep, ep_find, cross_section, surface, figure };
enum class Format { csv, json };

std::string to_string(Action a);
std::string to_string(Format f);
Format parse_format(const std::string& s);

struct EnergyGridSpec {
    std::optional<double> start;
    std::optional<double> stop;
    int points{801};
    bool operator==(const EnergyGridSpec&) const = default;
};

struct EpFindSpec {
    std::optional<Range> a;
    std::optional<Range> y;
    bool scan_y{true};
    int points{400};
    bool operator==(const EpFindSpec&) const = default;
};

struct RunConfig {
    SweepPlan plan;                 // plan.config is the system
    Action action{Action::sweep};
    std::optional<double> xsec_a;   // cross-section evaluation point
    EnergyGridSpec energies;
    EpFindSpec epfind;
    Format format{Format::csv};
    std::string name{"trajectories"};
    std::string output_dir{"."};
    int figure_id{0};

    const SystemConfig& system() const noexcept { return plan.config; }
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Inverse of parse_config; numbers printed with 17 significant digits.
std::string serialize_config(const RunConfig& config);

// Field-by-field equality of everything serialize_config writes.
bool equivalent(const RunConfig& lhs, const RunConfig& rhs);

}  // namespace eplab
