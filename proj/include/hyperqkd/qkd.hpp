// Key distribution over the frequency-spatial swapping resource: the 16
// local spatial operations with their 4-bit encodings, the round protocol
// with classical messaging and correlation-table inference, key accumulation
// and an intercept-resend adversary on the channel to Bob.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hyperqkd/discrimination.hpp"
#include "hyperqkd/modes.hpp"
#include "hyperqkd/reference_states.hpp"
#include "hyperqkd/rng.hpp"
#include "hyperqkd/state.hpp"

namespace hyperqkd {

// Raised when a round cannot be interpreted (malformed message or an
// outcome pair outside the correlation table): tampering or noise.
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One of the 16 local spatial operations, its matrix over the rail ordering
// (11,12,21,22) and its 4-bit encoding.
struct SigmaOp {
    int k = 0;
    CMatrix u;
    std::string bits;
};

// Factorization u(k) = (sign row n diagonal) * (cyclic rail shift^m) with
// k = 4m + n.
struct SigmaFactors {
    int shift = 0;     // m in 0..3
    int sign_row = 0;  // n in 1..4
};

std::string encoding(int k);      // k=1 -> "0000" ... k=16 -> "1111"
int decoding(std::string_view bits);

// Solves the operation's matrix from the signed-shift target it must map the
// plain paired spatial state onto; unique because that state is maximally
// entangled.
SigmaOp sigma_unitary(const StandardModes& m, int k);

SigmaFactors decompose_sigma(const StandardModes& m, int k);
CMatrix sigma_from_factors(int shift, int sign_row);

int outcome_to_index(const DiscriminationOutcome& o);        // (i-1)*4 + (j-1)
DiscriminationOutcome outcome_from_index(int index);
std::string outcome_bits(const DiscriminationOutcome& o);    // (i-1) || (j-1), two bits each

// Bob's projected outcome for every (operation, Alice outcome) pair, plus
// the inverse lookup used for inference. For each fixed Alice outcome the
// map k -> Bob outcome is injective, which is what makes inference unique.
class CorrelationTable {
  public:
    DiscriminationOutcome bob(int k, const DiscriminationOutcome& alice) const;
    std::optional<int> infer_k(const DiscriminationOutcome& alice,
                               const DiscriminationOutcome& bob) const;

  private:
    friend struct QkdSetup;
    std::array<std::array<uint8_t, 16>, 16> bob_of_{};  // [k-1][alice index]
    std::array<std::array<int8_t, 16>, 16> k_of_{};     // [alice index][bob index]
};

// Static data shared by every round: modes, analyzer geometries, the fresh
// resource state, the 16 operations, both basis families and the table.
struct QkdSetup {
    StandardModes modes;
    MeasurementSetup alice_setup, bob_setup, eve_setup;
    PureState fresh;
    std::array<SigmaOp, 16> sigmas;
    std::array<PureState, 16> alice_basis, bob_basis;
    CorrelationTable table;

    static QkdSetup make();
    const SigmaOp& sigma(int k) const;
};

// Coefficients of a frequency-spatial two-photon state on the 16 paired
// product basis states, indexed by outcome index; and the matching resum.
std::array<Cx, 16> swap_basis_coefficients(const QkdSetup& setup, const PureState& state);
PureState swap_basis_reconstruction(const QkdSetup& setup, std::span<const Cx, 16> coeffs);

struct ClassicalMessage {
    int round = 0;
    DiscriminationOutcome alice;
};

struct AliceRound {
    DiscriminationOutcome outcome;
    PureState photon_b;  // conditional state flying to Bob
    ClassicalMessage message;
};

// Applies the chosen operation to photon A's spatial modes of a fresh
// resource state and measures photon A with Alice's analyzer.
AliceRound alice_round(const QkdSetup& setup, RngStream& rng, int k, int round_id);

struct BobRound {
    DiscriminationOutcome outcome;
    int inferred_k = 0;
    std::string determinate_bits;
    std::string random_bits;
};

// Measures the incoming photon with Bob's analyzer and inverts the table at
// (Alice outcome -> Bob outcome).
BobRound bob_round(const QkdSetup& setup, const PureState& photon_b,
                   const ClassicalMessage& message, RngStream& rng);

// Measures the photon in flight with the published analyzer geometry (no
// conjugate-pair swap) and forwards the matching basis state.
PureState eve_intercept_resend(const QkdSetup& setup, const PureState& photon_b, RngStream& rng);

struct RoundRecord {
    int round = 0;
    int k = 0;
    DiscriminationOutcome alice, bob;
    int inferred_k = 0;
    std::string determinate_bits, random_bits;
    bool error = false;  // inferred_k != k
};

struct SessionConfig {
    uint64_t seed = 0;
    int rounds = 1;
    double eve_probability = 0.0;
};

struct SessionStats {
    int rounds = 0;
    int errors = 0;
    double error_rate = 0.0;
    long long key_bits = 0;  // 8 per round: 4 determinate + 4 random
    std::array<int, 16> k_counts{};
    std::array<int, 16> random_value_counts{};
    double chi_square_random = 0.0;
};

// Accumulated key material: the determinate half replays the chosen
// operation encodings, the random half the announced outcome indices.
struct KeyStream {
    std::string determinate;
    std::string random;
};

struct SessionResult {
    SessionConfig config;
    std::vector<RoundRecord> records;
    KeyStream key;
    SessionStats stats;
};

// Full key-distribution session, reproducible from the seed: every round
// draws its own substreams, so the transcript does not depend on evaluation
// order.
SessionResult run_session(const QkdSetup& setup, const SessionConfig& config);

double chi_square_uniform(std::span<const int> counts);

// 99th percentile of the chi-square distribution with 15 degrees of freedom.
inline constexpr double kChiSquare99Df15 = 30.57791416689249;

}  // namespace hyperqkd
