#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace adrc {

// Classical fixed-step 4th-order Runge-Kutta on a flat state of at most
// Capacity entries. `deriv(t, x, dx)` must fill dx for the given x.
//
// The final stage is evaluated at the left limit of t + dt. Right-continuous
// switching signals (steps, gates) whose switch instant falls on the grid are
// then integrated as piecewise-smooth functions, with no spurious jump
// inside a step. Callers are assumed to step on the grid t_k = k * dt, so
// t + dt is snapped to the grid value (k + 1) * dt before taking the limit;
// plain t + dt can round past a switch instant.
template <std::size_t Capacity, class Deriv>
void rk4_step(Deriv&& deriv, double t, double dt, std::span<double> x) {
  const std::size_t n = x.size();
  std::array<double, Capacity> k1{}, k2{}, k3{}, k4{}, tmp{};
  auto view = [n](std::array<double, Capacity>& a) { return std::span<double>(a.data(), n); };
  auto cview = [n](const std::array<double, Capacity>& a) { return std::span<const double>(a.data(), n); };
  double t_next = t + dt;
  const double index = std::round(t_next / dt);
  if (std::abs(t_next / dt - index) < 1e-6) t_next = index * dt;
  const double t_end = std::nextafter(t_next, -std::numeric_limits<double>::infinity());

  deriv(t, std::span<const double>(x.data(), n), view(k1));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
  deriv(t + 0.5 * dt, cview(tmp), view(k2));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
  deriv(t + 0.5 * dt, cview(tmp), view(k3));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
  deriv(t_end, cview(tmp), view(k4));
  for (std::size_t i = 0; i < n; ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace adrc
