#include "hyperqkd/io.hpp"

#include <cstdio>
#include <sstream>

namespace hyperqkd {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string polarization_name(Polarization pol) {
    switch (pol) {
        case Polarization::H: return "H";
        case Polarization::V: return "V";
        case Polarization::None: return "-";
    }
    return "-";
}

namespace {

void write_photon_fields(std::ostream& os, const PhotonLabel& label, const ModeRegistry& reg,
                         bool present) {
    if (!present) {
        os << "-,-,-";
        return;
    }
    os << polarization_name(label.pol) << ',' << label.freq << ',' << reg.name(label.mode);
}

}  // namespace

void write_state_dump(std::ostream& os, const PureState& state) {
    const auto& reg = *state.registry();
    for (const auto& [key, amp] : state.terms()) {
        write_photon_fields(os, key.a, reg, true);
        os << ',';
        write_photon_fields(os, key.b, reg, state.arity() == 2);
        os << ',' << format_double(amp.real()) << ',' << format_double(amp.imag()) << '\n';
    }
}

std::string session_transcript(const SessionResult& result) {
    std::ostringstream os;
    os << "# hyperqkd qkd-session schema 1\n";
    os << "seed=" << result.config.seed << '\n';
    os << "rounds=" << result.config.rounds << '\n';
    os << "eve_probability=" << format_double(result.config.eve_probability) << '\n';
    os << "round\tk\tbitsDeterminate\taliceI\taliceJ\tbobI\tbobJ\tinferredK\terror\n";
    for (const RoundRecord& r : result.records) {
        os << r.round << '\t' << r.k << '\t' << r.determinate_bits << '\t' << r.alice.group
           << '\t' << r.alice.index << '\t' << r.bob.group << '\t' << r.bob.index << '\t'
           << r.inferred_k << '\t' << (r.error ? 1 : 0) << '\n';
    }
    os << "# summary\n";
    os << "rounds=" << result.stats.rounds << '\n';
    os << "errors=" << result.stats.errors << '\n';
    os << "error_rate=" << format_double(result.stats.error_rate) << '\n';
    os << "key_bits=" << result.stats.key_bits << '\n';
    os << "determinate_bits=" << result.stats.rounds * 4 << '\n';
    os << "random_bits=" << result.stats.rounds * 4 << '\n';
    os << "chi_square_random=" << format_double(result.stats.chi_square_random) << '\n';
    os << "k_counts=";
    for (int i = 0; i < 16; ++i) os << (i ? "," : "") << result.stats.k_counts[i];
    os << '\n';
    os << "random_value_counts=";
    for (int i = 0; i < 16; ++i) os << (i ? "," : "") << result.stats.random_value_counts[i];
    os << '\n';
    return std::move(os).str();
}

}  // namespace hyperqkd
