#include "hyperqkd/modes.hpp"

#include <string>

namespace hyperqkd {

StandardModes standard_modes() {
    StandardModes m;
    m.registry = std::make_shared<ModeRegistry>();
    auto& reg = *m.registry;

    m.pump_top = reg.add("p_top");
    m.pump_bottom = reg.add("p_bot");
    m.pump_out = reg.add("pump");

    m.src_a = {reg.add("a1"), reg.add("a2")};
    m.src_b = {reg.add("b1"), reg.add("b2")};

    const std::array<std::string, 4> grid{"11", "12", "21", "22"};
    for (size_t i = 0; i < 4; ++i) m.a[i] = reg.add("a" + grid[i]);
    for (size_t i = 0; i < 4; ++i) m.b[i] = reg.add("b" + grid[i]);

    for (size_t i = 0; i < 4; ++i)
        for (size_t f = 0; f < 4; ++f) {
            const std::string suffix = ":" + std::to_string(kPhotonLines[f]);
            m.a_path[i][f] = reg.add("a" + grid[i] + suffix);
            m.b_path[i][f] = reg.add("b" + grid[i] + suffix);
        }

    m.a_up = reg.add("a_up");
    m.a_down = reg.add("a_dn");
    m.b_up = reg.add("b_up");
    m.b_down = reg.add("b_dn");
    return m;
}

}  // namespace hyperqkd
