#include "adrc/observers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adrc {

using smallmat::Mat;

void EsoStructure::validate() const {
  if (variant == EsoVariant::Resonant5 && !(resonant_rate > 0.0)) {
    throw std::invalid_argument("resonant structure needs a positive resonant angular rate");
  }
}

StructureMatrices structure_matrices(const EsoStructure& s) {
  s.validate();
  const std::size_t n = s.order();
  StructureMatrices m{Mat(n, n), Mat(n, 1), Mat(1, n), Mat(n, 1)};
  for (std::size_t i = 0; i + 1 < n; ++i) m.a(i, i + 1) = 1.0;
  m.b(1, 0) = 1.0;
  m.c(0, 0) = 1.0;
  if (s.variant == EsoVariant::Resonant5) {
    m.a(4, 3) = -s.resonant_rate * s.resonant_rate;
    m.d(2, 0) = 1.0;
  } else {
    m.d(n - 1, 0) = 1.0;
  }
  return m;
}

std::vector<double> luenberger_gains(std::size_t n, double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("observer bandwidth must be positive");
  const double w = bandwidth;
  switch (n) {
    case 3:
      return {3 * w, 3 * w * w, w * w * w};
    case 5:
      return {5 * w, 10 * w * w, 10 * w * w * w, 5 * w * w * w * w, w * w * w * w * w};
    default:
      throw std::invalid_argument("unsupported observer order " + std::to_string(n));
  }
}

double chain_map(const EsoStructure& s, std::size_t i, std::span<const double> z, double u_eff) {
  const std::size_t n = s.order();
  if (i + 1 == n) {
    return s.variant == EsoVariant::Resonant5 ? -s.resonant_rate * s.resonant_rate * z[3] : 0.0;
  }
  return i == 1 ? z[2] - u_eff : z[i + 1];
}

LuenbergerEso::LuenbergerEso(EsoStructure structure, double bandwidth)
    : structure_(structure), bandwidth_(bandwidth), gains_(luenberger_gains(structure.order(), bandwidth)) {
  structure_.validate();
}

void LuenbergerEso::derivative(std::span<const double> x, const EsoInput& in, std::span<double> dx) const {
  const std::size_t n = structure_.order();
  const double innovation = in.y - x[0];
  for (std::size_t i = 0; i < n; ++i) dx[i] = chain_map(structure_, i, x, in.u_eff) + gains_[i] * innovation;
}

std::vector<AmBlockGain> am_default_gains(std::size_t n) {
  switch (n) {
    case 3:
      return {{0.8, 0.48}, {0.8, 0.16}};
    case 5:
      return {{0.6, 0.36}, {0.6, 0.135}, {0.6, 0.06}, {0.6, 0.025}};
    default:
      throw std::invalid_argument("no Astolfi/Marconi gains for order " + std::to_string(n));
  }
}

AmObserver::AmObserver(EsoStructure structure, double bandwidth)
    : AmObserver(structure, bandwidth, am_default_gains(structure.order())) {}

AmObserver::AmObserver(EsoStructure structure, double bandwidth, std::vector<AmBlockGain> gains)
    : structure_(structure), bandwidth_(bandwidth), gains_(std::move(gains)) {
  structure_.validate();
  if (!(bandwidth > 0.0)) throw std::invalid_argument("observer bandwidth must be positive");
  if (gains_.size() != structure_.order() - 1) {
    throw std::invalid_argument("Astolfi/Marconi observer of order " + std::to_string(structure_.order()) +
                                " needs " + std::to_string(structure_.order() - 1) + " block gains, got " +
                                std::to_string(gains_.size()));
  }
}

std::vector<double> AmObserver::extract(std::span<const double> xi) const {
  const std::size_t n = structure_.order();
  std::vector<double> z(n);
  z[0] = xi[0];
  for (std::size_t k = 1; k < n; ++k) z[k] = xi[2 * (k - 1) + 1];
  return z;
}

void AmObserver::derivative(std::span<const double> xi, const EsoInput& in, std::span<double> dxi) const {
  const std::size_t n = structure_.order();
  std::array<double, 5> z{};
  z[0] = xi[0];
  for (std::size_t k = 1; k < n; ++k) z[k] = xi[2 * (k - 1) + 1];
  const std::span<const double> zs(z.data(), n);

  const double w = bandwidth_;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // eps_1 = y - c2 eta_1;  eps_i = b2^T eta_{i-1} - c2 eta_i
    const double err = i == 0 ? in.y - xi[0] : xi[2 * (i - 1) + 1] - xi[2 * i];
    dxi[2 * i] = chain_map(structure_, i, zs, in.u_eff) + w * gains_[i][0] * err;
    dxi[2 * i + 1] = chain_map(structure_, i + 1, zs, in.u_eff) + w * w * gains_[i][1] * err;
  }
}

std::vector<double> AmObserver::state_for(std::span<const double> z) const {
  const std::size_t n = structure_.order();
  std::vector<double> xi(state_size());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    xi[2 * i] = z[i];
    xi[2 * i + 1] = z[i + 1];
  }
  return xi;
}

std::string_view observer_tag(ObserverKind kind) {
  switch (kind) {
    case ObserverKind::Eso3: return "eso3";
    case ObserverKind::Eso5: return "eso5";
    case ObserverKind::Reso: return "reso";
    case ObserverKind::AmEso3: return "am_eso3";
    case ObserverKind::AmEso5: return "am_eso5";
    case ObserverKind::AmReso: return "am_reso";
  }
  return "?";
}

std::string_view observer_label(ObserverKind kind) {
  switch (kind) {
    case ObserverKind::Eso3: return "ESO n=3";
    case ObserverKind::Eso5: return "ESO n=5";
    case ObserverKind::Reso: return "RESO";
    case ObserverKind::AmEso3: return "AM ESO n=3";
    case ObserverKind::AmEso5: return "AM ESO n=5";
    case ObserverKind::AmReso: return "AM RESO";
  }
  return "?";
}

ObserverKind parse_observer_kind(std::string_view tag) {
  for (ObserverKind k : kAllObserverKinds) {
    if (observer_tag(k) == tag) return k;
  }
  throw std::invalid_argument("unknown observer variant '" + std::string(tag) +
                              "' (expected eso3, eso5, reso, am_eso3, am_eso5 or am_reso)");
}

bool is_am(ObserverKind kind) {
  return kind == ObserverKind::AmEso3 || kind == ObserverKind::AmEso5 || kind == ObserverKind::AmReso;
}

EsoVariant variant_of(ObserverKind kind) {
  switch (kind) {
    case ObserverKind::Eso3:
    case ObserverKind::AmEso3: return EsoVariant::Standard3;
    case ObserverKind::Eso5:
    case ObserverKind::AmEso5: return EsoVariant::Extended5;
    case ObserverKind::Reso:
    case ObserverKind::AmReso: return EsoVariant::Resonant5;
  }
  return EsoVariant::Standard3;
}

namespace {

ObserverInstance::Impl make_impl(ObserverKind kind, double bandwidth, double resonant_rate,
                                 std::vector<AmBlockGain> am_gains) {
  EsoStructure s{variant_of(kind), variant_of(kind) == EsoVariant::Resonant5 ? resonant_rate : 0.0};
  if (!is_am(kind)) return LuenbergerEso(s, bandwidth);
  if (am_gains.empty()) return AmObserver(s, bandwidth);
  return AmObserver(s, bandwidth, std::move(am_gains));
}

}  // namespace

ObserverInstance::ObserverInstance(ObserverKind kind, double bandwidth, double resonant_rate,
                                   std::vector<AmBlockGain> am_gains)
    : kind_(kind), impl_(make_impl(kind, bandwidth, resonant_rate, std::move(am_gains))) {
  state_.assign(state_size(), 0.0);
}

double ObserverInstance::bandwidth() const {
  return std::visit([](const auto& o) { return o.bandwidth(); }, impl_);
}

std::size_t ObserverInstance::state_size() const {
  return std::visit([](const auto& o) { return o.state_size(); }, impl_);
}

void ObserverInstance::set_state(std::span<const double> x) {
  if (x.size() != state_size()) throw std::invalid_argument("observer state has the wrong length");
  state_.assign(x.begin(), x.end());
}

void ObserverInstance::set_extended_state(std::span<const double> z) {
  const std::size_t n = std::visit([](const auto& o) { return o.structure().order(); }, impl_);
  if (z.size() != n) throw std::invalid_argument("extended state has the wrong length");
  state_ = std::visit([z](const auto& o) { return o.state_for(z); }, impl_);
}

void ObserverInstance::derivative(std::span<const double> x, const EsoInput& in, std::span<double> dx) const {
  std::visit([&](const auto& o) { o.derivative(x, in, dx); }, impl_);
}

std::vector<double> ObserverInstance::derivative(const EsoInput& in) const {
  std::vector<double> dx(state_size());
  derivative(state_, in, dx);
  return dx;
}

Estimates ObserverInstance::estimates(std::span<const double> x) const {
  return std::visit([x](const auto& o) { return o.estimates(x); }, impl_);
}

std::vector<double> ObserverInstance::extended_estimate(std::span<const double> x) const {
  if (const auto* am = std::get_if<AmObserver>(&impl_)) return am->extract(x);
  return {x.begin(), x.end()};
}

Estimates observer_estimates(const ObserverInstance& o) { return o.estimates(o.state()); }

std::vector<double> am_extract(const AmObserver& o, std::span<const double> xi) { return o.extract(xi); }

}  // namespace adrc
