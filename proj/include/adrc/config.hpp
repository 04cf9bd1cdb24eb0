#pragma once

#include "adrc/simkernel.hpp"

#include <array>
#include <filesystem>
#include <istream>
#include <string>

namespace adrc {

// Reference bandwidths per observer, in kAllObserverKinds order, for the
// noise-free (1) and noisy (2) benchmark scenarios.
const std::array<double, 6>& reference_bandwidths(int scenario);
double reference_bandwidth(int scenario, ObserverKind kind);

// Full benchmark protocol: double-lag plant, filtered unit step at 7.5 s,
// 2.5 sin(15 t) load from 5 s, controller on at 1 s, 20 s horizon. Scenario 2
// adds Gaussian measurement noise of variance 1e-5. The observer is set to
// `kind` at its reference bandwidth. Throws ConfigError for other scenarios.
ScenarioConfig preset_config(int scenario, ObserverKind kind = ObserverKind::Eso3);

// INI-style scenario document. An optional top-level `preset` selects
// scenario1 or scenario2 as the base; sections [plant], [trajectory],
// [observer], [controller], [noise], [disturbance] and [sim] override it.
// Unknown sections or keys are rejected. The result is validated.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_string(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace adrc
