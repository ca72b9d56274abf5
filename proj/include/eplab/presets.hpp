// presets.hpp: the nine figure parameter sets
//
// Panels are named left / middle / right throughout. Lettered panels map as
//   Fig. 6:     a,b,c -> left   d,e,f -> middle   g,h,i -> right
//   Figs. 7, 8: a,c,e,g -> left (a = a1, the EP)   b,d,f,h -> right (a = a0)
//   Fig. 9:     single
// Sweep ranges are not part of the captions: a in [0.01, 2] with 1000 steps,
// y in [0, 1] with 500 steps.

#pragma once

#include "eplab/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eplab {

enum class Panel { left, middle, right, single };

std::string to_string(Panel p);

// Accepts left|middle|right|single and, where the figure has them, panel letters.
Panel parse_panel(int figure_id, const std::string& s);

struct FigurePreset {
    int figure_id{0};
    Panel panel{Panel::single};
    RunConfig run;
    std::optional<double> caption_ep_a;  // Figs. 7, 8 left: caption a quoted as an EP
};

constexpr int figure_count = 9;

// Throws std::out_of_range for an unknown figure or a panel it does not have.
std::vector<Panel> figure_panels(int figure_id);
FigurePreset figure_preset(int figure_id, Panel panel);

// Output file stems of one panel, e.g. fig7_a, fig7_c, fig7_e, fig7_g.
std::vector<std::string> panel_files(int figure_id, Panel panel);

}  // namespace eplab
