// Exact sparse state vectors for one or two photons carrying polarization,
// frequency and spatial-mode labels, plus the small set of linear-algebra
// operations every optical element is built from.

#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperqkd/rng.hpp"

namespace hyperqkd {

using Cx = std::complex<double>;

// Amplitudes below this magnitude are dropped after every operation so that
// post-selection supports stay exact instead of accumulating noise terms.
inline constexpr double kAmplitudeFloor = 1e-14;
inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kNormTol = 1e-9;

enum class Polarization : uint8_t { H = 0, V = 1, None = 2 };
enum class Photon : uint8_t { A = 0, B = 1 };
enum class Dof : uint8_t { Polarization, Frequency, SpatialMode };

// Frequencies are exact integers in units of the lowest photon line, which
// makes per-term energy bookkeeping exact. Photon lines are {1,2,4,8} (two
// conjugate pairs 1<->2 and 4<->8); pump-stage values are {3,6,12}. 0 marks
// an unused / erased frequency slot.
inline constexpr std::array<int, 4> kPhotonLines{1, 2, 4, 8};

bool frequency_is_valid(int f);
bool frequency_is_photon_line(int f);
int conjugate_frequency(int f);
int photon_line_index(int f);  // position of f within kPhotonLines

// Interned spatial-path label. Valid ids index into their ModeRegistry.
struct ModeId {
    uint16_t v = 0xFFFF;
    bool valid() const { return v != 0xFFFF; }
    auto operator<=>(const ModeId&) const = default;
};

// Append-only table of spatial-path names. States only ever reference
// registered labels; two states interoperate iff they share a registry.
class ModeRegistry {
  public:
    ModeId add(std::string name);
    std::optional<ModeId> find(std::string_view name) const;
    const std::string& name(ModeId id) const;
    size_t size() const { return names_.size(); }

  private:
    std::vector<std::string> names_;
    std::map<std::string, ModeId, std::less<>> index_;
};

struct PhotonLabel {
    Polarization pol = Polarization::None;
    int16_t freq = 0;
    ModeId mode{};
    auto operator<=>(const PhotonLabel&) const = default;
    static PhotonLabel none() { return {}; }
};

// Basis label of a term; single-photon states leave slot b at none().
struct BasisKey {
    PhotonLabel a;
    PhotonLabel b;
    auto operator<=>(const BasisKey&) const = default;
};

int dof_value(const PhotonLabel& label, Dof dof);
PhotonLabel with_dof_value(PhotonLabel label, Dof dof, int value);

// Sparse pure state: canonical form is sorted unique basis keys with all
// amplitudes at or above kAmplitudeFloor. Values are immutable after
// construction; every operation returns a fresh state.
class PureState {
  public:
    using Term = std::pair<BasisKey, Cx>;

    PureState() = default;

    static PureState zero(std::shared_ptr<ModeRegistry> registry, int arity);
    static PureState single(std::shared_ptr<ModeRegistry> registry, PhotonLabel label,
                            Cx amp = 1.0);
    static PureState pair(std::shared_ptr<ModeRegistry> registry, PhotonLabel a, PhotonLabel b,
                          Cx amp = 1.0);
    static PureState from_terms(std::shared_ptr<ModeRegistry> registry, int arity,
                                std::vector<Term> terms);

    int arity() const { return arity_; }
    const std::shared_ptr<ModeRegistry>& registry() const { return registry_; }
    std::span<const Term> terms() const { return terms_; }
    size_t support_size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    Cx amplitude(const BasisKey& key) const;
    double norm() const;
    bool is_normalized(double tol = kNormTol) const;

    PureState scaled(Cx factor) const;

  private:
    int arity_ = 0;
    std::shared_ptr<ModeRegistry> registry_;
    std::vector<Term> terms_;
};

// Small dense complex matrix used for element transforms.
class CMatrix {
  public:
    CMatrix() = default;
    explicit CMatrix(int n) : n_(n), m_(static_cast<size_t>(n) * n) {}
    static CMatrix identity(int n);

    int dim() const { return n_; }
    Cx& at(int r, int c) { return m_[static_cast<size_t>(r) * n_ + c]; }
    const Cx& at(int r, int c) const { return m_[static_cast<size_t>(r) * n_ + c]; }

    CMatrix adjoint() const;
    bool is_unitary(double tol = kUnitaryTol) const;
    friend CMatrix operator*(const CMatrix& x, const CMatrix& y);

  private:
    int n_ = 0;
    std::vector<Cx> m_;
};

// --- Core operations ---------------------------------------------------

// Product of two single-photon states into a two-photon state; amplitudes
// multiply, so norm(out) = norm(a) * norm(b).
PureState tensor(const PureState& a, const PureState& b);

// Superposition a + b (same arity and registry).
PureState superpose(const PureState& a, const PureState& b);

// <a|b>, conjugate-linear in the first argument.
Cx inner_product(const PureState& a, const PureState& b);

// |<a|b>|^2 for normalized inputs.
double fidelity(const PureState& a, const PureState& b);

// Rescales to unit norm; returns (normalized state, prior norm).
std::pair<PureState, double> normalize(const PureState& state);

// Applies u over the listed DOF values on one photon; labels whose value is
// not listed pass through untouched. u must be unitary within kUnitaryTol.
PureState apply_mode_unitary(const PureState& state, Photon photon, Dof dof, const CMatrix& u,
                             std::span<const int> values);

// Probability of each DOF value on one photon of a normalized state.
std::map<int, double> marginal_distribution(const PureState& state, Photon photon, Dof dof);

// Injective label rewrite; a collision of two distinct labels is a usage
// error (the rewrite would discard physical information).
PureState transform_labels(const PureState& state,
                           const std::function<BasisKey(const BasisKey&)>& fn);

// Unnormalized single-photon remainder after projecting `which` of a
// two-photon state onto `single`: sum_a conj(single[a]) * state[(a,b)].
PureState project_photon(const PureState& state, Photon which, const PureState& single);

// Keeps the requested photon of a two-photon state whose other photon is a
// point mass (single basis label).
PureState single_photon_part(const PureState& state, Photon keep);

// Unnormalized restriction to terms whose DOF equals `value` on `photon`.
PureState project_dof_value(const PureState& state, Photon photon, Dof dof, int value);

struct DofMeasurement {
    int value = 0;
    PureState state;
    double probability = 0.0;
};

// Projective measurement of one DOF of one photon in the label basis.
DofMeasurement measure_dof(const PureState& state, Photon photon, Dof dof, RngStream& rng);

}  // namespace hyperqkd
