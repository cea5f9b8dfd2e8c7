// Deterministic text output: state dumps and session transcripts. Identical
// inputs always produce byte-identical bytes, which is what the transcript
// reproducibility checks compare.

#pragma once

#include <ostream>
#include <string>

#include "hyperqkd/qkd.hpp"
#include "hyperqkd/state.hpp"

namespace hyperqkd {

// Shortest round-trip decimal with 17 significant digits.
std::string format_double(double value);

std::string polarization_name(Polarization pol);

// One line per basis label: polA,freqA,modeA,polB,freqB,modeB,re,im.
// Single-photon states leave the second photon's fields as "-".
void write_state_dump(std::ostream& os, const PureState& state);

std::string session_transcript(const SessionResult& result);

}  // namespace hyperqkd
