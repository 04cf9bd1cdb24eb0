#pragma once

#include "adrc/smallmat.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace adrc {

// Extended-state representation, all in the tracking-error domain:
//   Standard3  z = [e, e', f]
//   Extended5  z = [e, e', f, f', f'']
//   Resonant5  z = [e, e', f, f_o', f_o'']   with f_o'' = -w_r^2 f_o embedded
enum class EsoVariant { Standard3, Extended5, Resonant5 };

struct EsoStructure {
  EsoVariant variant = EsoVariant::Standard3;
  double resonant_rate = 0.0;  // rad/s, Resonant5 only

  [[nodiscard]] std::size_t order() const { return variant == EsoVariant::Standard3 ? 3 : 5; }
  void validate() const;
};

struct EsoInput {
  double y = 0.0;      // measured tracking error e + w
  double u_eff = 0.0;  // (tau - hm_hat) / J_hat
};

struct Estimates {
  double e = 0.0;
  double edot = 0.0;
  double f = 0.0;
};

struct StructureMatrices {
  smallmat::Mat a;  // state matrix
  smallmat::Mat b;  // control input column
  smallmat::Mat c;  // output row
  smallmat::Mat d;  // perturbation entry column
};

StructureMatrices structure_matrices(const EsoStructure& s);

// Binomial coefficients of (s + w)^n, n in {3, 5}.
std::vector<double> luenberger_gains(std::size_t n, double bandwidth);

// i-th entry (0-based) of the chain map of the structure evaluated on z:
// z_{i+1}, with u_eff subtracted at i = 1 and the oscillator closure in the
// last row of Resonant5.
double chain_map(const EsoStructure& s, std::size_t i, std::span<const double> z, double u_eff);

class LuenbergerEso {
 public:
  LuenbergerEso(EsoStructure structure, double bandwidth);

  [[nodiscard]] const EsoStructure& structure() const { return structure_; }
  [[nodiscard]] double bandwidth() const { return bandwidth_; }
  [[nodiscard]] std::span<const double> gains() const { return gains_; }
  [[nodiscard]] std::size_t state_size() const { return structure_.order(); }

  // dx/dt = A x - b u_eff + l (y - c x)
  void derivative(std::span<const double> x, const EsoInput& in, std::span<double> dx) const;
  [[nodiscard]] Estimates estimates(std::span<const double> x) const { return {x[0], x[1], x[2]}; }
  // Observer state consistent with a known extended state z.
  [[nodiscard]] std::vector<double> state_for(std::span<const double> z) const { return {z.begin(), z.end()}; }

 private:
  EsoStructure structure_;
  double bandwidth_;
  std::vector<double> gains_;
};

using AmBlockGain = std::array<double, 2>;

// Block gains obtained with the low-power tuning procedure for n = 3 and
// n = 5 (the n = 5 set is also used for the resonant structure).
std::vector<AmBlockGain> am_default_gains(std::size_t n);

// Astolfi/Marconi low-power observer: n-1 cascaded blocks eta_i of length 2,
// each injecting w*a_i1 and w^2*a_i2 times its local error. The extended
// estimate is z_hat = L xi with L = blkdiag(I2, b2, ..., b2).
class AmObserver {
 public:
  AmObserver(EsoStructure structure, double bandwidth);
  AmObserver(EsoStructure structure, double bandwidth, std::vector<AmBlockGain> gains);

  [[nodiscard]] const EsoStructure& structure() const { return structure_; }
  [[nodiscard]] double bandwidth() const { return bandwidth_; }
  [[nodiscard]] const std::vector<AmBlockGain>& block_gains() const { return gains_; }
  [[nodiscard]] std::size_t state_size() const { return 2 * (structure_.order() - 1); }

  void derivative(std::span<const double> xi, const EsoInput& in, std::span<double> dxi) const;
  [[nodiscard]] std::vector<double> extract(std::span<const double> xi) const;
  [[nodiscard]] Estimates estimates(std::span<const double> xi) const { return {xi[0], xi[1], xi[3]}; }
  // xi = [z1 z2, z2 z3, ..., z_{n-1} z_n]: every block error vanishes.
  [[nodiscard]] std::vector<double> state_for(std::span<const double> z) const;

 private:
  EsoStructure structure_;
  double bandwidth_;
  std::vector<AmBlockGain> gains_;
};

enum class ObserverKind { Eso3, Eso5, Reso, AmEso3, AmEso5, AmReso };

inline constexpr std::array<ObserverKind, 6> kAllObserverKinds = {
    ObserverKind::Eso3, ObserverKind::Eso5, ObserverKind::Reso,
    ObserverKind::AmEso3, ObserverKind::AmEso5, ObserverKind::AmReso};

// Config tag ("eso3", "am_reso", ...) and table label ("ESO n=3", "AM RESO", ...).
std::string_view observer_tag(ObserverKind kind);
std::string_view observer_label(ObserverKind kind);
ObserverKind parse_observer_kind(std::string_view tag);
bool is_am(ObserverKind kind);
EsoVariant variant_of(ObserverKind kind);

// Tagged union over the six observers. Owns the observer state; the
// span-taking overloads evaluate on an external state of state_size().
class ObserverInstance {
 public:
  using Impl = std::variant<LuenbergerEso, AmObserver>;

  ObserverInstance(ObserverKind kind, double bandwidth, double resonant_rate = 15.0,
                   std::vector<AmBlockGain> am_gains = {});

  [[nodiscard]] ObserverKind kind() const { return kind_; }
  [[nodiscard]] const Impl& impl() const { return impl_; }
  [[nodiscard]] double bandwidth() const;
  [[nodiscard]] std::size_t state_size() const;

  [[nodiscard]] std::span<const double> state() const { return state_; }
  void set_state(std::span<const double> x);
  void set_extended_state(std::span<const double> z);

  void derivative(std::span<const double> x, const EsoInput& in, std::span<double> dx) const;
  [[nodiscard]] std::vector<double> derivative(const EsoInput& in) const;
  [[nodiscard]] Estimates estimates(std::span<const double> x) const;
  [[nodiscard]] std::vector<double> extended_estimate(std::span<const double> x) const;

 private:
  ObserverKind kind_;
  Impl impl_;
  std::vector<double> state_;
};

Estimates observer_estimates(const ObserverInstance& o);
std::vector<double> am_extract(const AmObserver& o, std::span<const double> xi);

}  // namespace adrc
