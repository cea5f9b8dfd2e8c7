// Source pipeline with verifiable checkpoints: pump synthesis, paired-crystal
// emission over two passes, path splitting and probe-compared post-selection
// onto the 2x4x4 hyperentangled target.

#pragma once

#include <string>
#include <vector>

#include "hyperqkd/modes.hpp"
#include "hyperqkd/reference_states.hpp"
#include "hyperqkd/state.hpp"

namespace hyperqkd {

struct PipelineCheckpoint {
    std::string stage;
    PureState state;
    PureState reference;
    double fidelity = 0.0;
};

struct GenerationResult {
    PureState state;
    double success_probability = 0.0;
    std::vector<PipelineCheckpoint> checkpoints;
};

// Splits the pump rail, doubles the upper branch twice and recombines:
// an equal superposition of frequencies 3 and 12 on one rail.
PureState build_pump(const StandardModes& m);

// Pump into the paired crystals, one emission per run; the reflected second
// pass contributes the mirrored paths with relative phase +1.
PureState generate_pair_state(const StandardModes& m);

// Splits each of the four paths in two. The diagonal phase correction that
// fixes the relative phases to +1 is explicit; under this port wiring its
// phases are all zero.
PureState split_spatial(const PureState& state, const StandardModes& m);

// Full pipeline including the probe comparison post-selection; reports the
// kept weight and a fidelity checkpoint per stage.
GenerationResult generate_hyper_state(const StandardModes& m);

}  // namespace hyperqkd
