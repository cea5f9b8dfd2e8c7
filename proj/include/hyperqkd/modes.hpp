// Standard mode registry for the whole apparatus: pump rail, crystal output
// paths, split paths, per-frequency analyzer paths and detector rails.

#pragma once

#include <array>
#include <memory>

#include "hyperqkd/state.hpp"

namespace hyperqkd {

struct StandardModes {
    std::shared_ptr<ModeRegistry> registry;

    ModeId pump_top, pump_bottom, pump_out;
    std::array<ModeId, 2> src_a, src_b;  // crystal emission paths a1,a2 / b1,b2
    std::array<ModeId, 4> a, b;          // split paths in grid order 11,12,21,22

    // Analyzer paths indexed [mode][photon-line index], lines ordered 1,2,4,8.
    std::array<std::array<ModeId, 4>, 4> a_path, b_path;
    ModeId a_up, a_down, b_up, b_down;  // analyzer detector rails
};

StandardModes standard_modes();

}  // namespace hyperqkd
