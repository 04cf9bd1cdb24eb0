#include "adrc/plant.hpp"
#include "adrc/rk4.hpp"

#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>

using namespace adrc;
using Catch::Approx;

namespace {

PlantModel double_lag_with_load() {
  const DisturbanceSchedule load{2.5, 15.0, 0.0, 5.0};
  return preset_double_lag(1.0, 2.0, 1.0, load);
}

}  // namespace

TEST_CASE("double-lag plant acceleration", "[plant]") {
  const PlantModel m = preset_double_lag();
  CHECK(plant_derivative(m, {0.0, 0.0}, 1.0, 0.0).qddot == 1.0);
  CHECK(plant_derivative(m, {1.0, 1.0}, 0.0, 0.0).qddot == -3.0);
  CHECK(plant_derivative(m, {0.3, -0.7}, 0.0, 0.0).qdot == -0.7);

  const PlantModel loaded = double_lag_with_load();
  CHECK(plant_derivative(loaded, {0.0, 0.0}, 0.0, 6.0).qddot == Approx(-2.5 * std::sin(90.0)).epsilon(1e-14));
  CHECK(plant_derivative(loaded, {0.0, 0.0}, 0.0, 4.999).qddot == 0.0);
}

TEST_CASE("disturbance schedule switches on at its start time", "[plant]") {
  const DisturbanceSchedule d{2.5, 15.0, 0.5, 5.0};
  CHECK(d(4.999999) == 0.0);
  CHECK(d(5.0) == Approx(0.5 + 2.5 * std::sin(75.0)));
  CHECK(d(7.0) == Approx(0.5 + 2.5 * std::sin(105.0)));
}

TEST_CASE("non-positive inertia is a model error", "[plant]") {
  PlantModel m = preset_double_lag();
  m.inertia = [](double q) { return 1.0 - q; };
  CHECK_NOTHROW(plant_derivative(m, {0.5, 0.0}, 0.0, 0.0));
  CHECK_THROWS_AS(plant_derivative(m, {1.0, 0.0}, 0.0, 0.0), ModelError);
  CHECK_THROWS_AS(plant_derivative(m, {2.0, 0.0}, 0.0, 0.0), ModelError);
}

TEST_CASE("acceleration is affine in torque with slope 1/J", "[plant][property]") {
  PlantModel m = double_lag_with_load();
  m.inertia = [](double q) { return 2.0 + std::sin(q); };
  for (double q : {-1.0, 0.0, 0.4, 2.0}) {
    for (double qd : {-3.0, 0.0, 1.5}) {
      const PlantState s{q, qd};
      const double a0 = plant_derivative(m, s, 0.0, 6.1).qddot;
      const double a1 = plant_derivative(m, s, 1.0, 6.1).qddot;
      const double a7 = plant_derivative(m, s, 7.0, 6.1).qddot;
      CHECK(a1 - a0 == Approx(1.0 / (2.0 + std::sin(q))).epsilon(1e-12));
      CHECK(a7 - a0 == Approx(7.0 * (a1 - a0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("total disturbance is independent of torque under an exact model", "[plant][property]") {
  const PlantModel m = double_lag_with_load();
  const ModelEstimate est{};
  for (double t : {0.0, 5.3, 12.0}) {
    for (double q : {-0.5, 0.0, 1.2}) {
      for (double qd : {-2.0, 0.3}) {
        const PlantState s{q, qd};
        const double qdd_d = 0.17;
        const double f0 = total_disturbance_truth(m, est, s, 0.0, qdd_d, t, qd);
        CHECK(total_disturbance_truth(m, est, s, -10.0, qdd_d, t, qd) == Approx(f0).margin(1e-12));
        CHECK(total_disturbance_truth(m, est, s, 10.0, qdd_d, t, qd) == Approx(f0).margin(1e-12));
        const DisturbanceSchedule load{2.5, 15.0, 0.0, 5.0};
        CHECK(f0 == Approx(qdd_d + 2.0 * qd + q + load(t)).margin(1e-12));
      }
    }
  }
}

TEST_CASE("total disturbance keeps a torque term under a wrong inertia estimate", "[plant]") {
  const PlantModel m = preset_double_lag();
  ModelEstimate est;
  est.inertia = 2.0;
  const PlantState s{0.0, 0.0};
  const double f0 = total_disturbance_truth(m, est, s, 0.0, 0.0, 0.0, 0.0);
  const double f1 = total_disturbance_truth(m, est, s, 1.0, 0.0, 0.0, 0.0);
  // q'' responds with 1/J = 1, the model expects 1/J_hat = 0.5.
  CHECK(f1 - f0 == Approx(-1.0 + 0.5));
}

TEST_CASE("modeled dynamics cancel when the estimate matches", "[plant]") {
  PlantModel m = preset_double_lag();
  m.modeled = [](double, double qd) { return 0.3 * qd; };
  ModelEstimate est;
  est.modeled = m.modeled;
  const PlantState s{0.2, 1.0};
  const double f_a = total_disturbance_truth(m, est, s, -4.0, 0.0, 0.0, s.qdot);
  const double f_b = total_disturbance_truth(m, est, s, 4.0, 0.0, 0.0, s.qdot);
  CHECK(f_a == Approx(f_b).margin(1e-12));
  CHECK(f_a == Approx(2.0 * 1.0 + 0.2).margin(1e-12));
}

TEST_CASE("double-lag preset settles to unit gain under unit torque", "[plant]") {
  const PlantModel m = preset_double_lag();
  std::array<double, 2> x{0.0, 0.0};
  auto deriv = [&](double t, std::span<const double> s, std::span<double> dx) {
    const auto d = plant_derivative(m, {s[0], s[1]}, 1.0, t);
    dx[0] = d.qdot;
    dx[1] = d.qddot;
  };
  const double dt = 1e-3;
  for (int k = 0; k < 30000; ++k) rk4_step<2>(deriv, k * dt, dt, x);
  CHECK(x[0] == Approx(1.0).margin(1e-9));
  CHECK(x[1] == Approx(0.0).margin(1e-9));
}

TEST_CASE("double-lag preset stays at rest without input", "[plant]") {
  const PlantModel m = preset_double_lag();
  std::array<double, 2> x{0.0, 0.0};
  auto deriv = [&](double t, std::span<const double> s, std::span<double> dx) {
    const auto d = plant_derivative(m, {s[0], s[1]}, 0.0, t);
    dx[0] = d.qdot;
    dx[1] = d.qddot;
  };
  for (int k = 0; k < 1000; ++k) rk4_step<2>(deriv, k * 1e-3, 1e-3, x);
  CHECK(x[0] == 0.0);
  CHECK(x[1] == 0.0);
}
