// Copyright 2026 The chancompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Named instances for the CLI and the test suites.
//
//   identity-pair       compat: (id_2, id_2)
//   depolarizing-pair   compat: two fully depolarizing qubit channels
//   max-entangled       steer: |ψ⁺⟩⟨ψ⁺| with (id, H·H†); bell: four identities
//   w-state             steer: ρ_W with (id, id); bell: four identities
//   theta-family:<θ>    bell: |ψ⁺⟩⟨ψ⁺| with Φ_{U1}, Φ_{U2}, Φ_{V1}, Φ_{V2}

#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chancompat/channel.hpp"
#include "chancompat/chsh.hpp"

namespace chancompat {

struct PresetInfo {
  std::string name;
  std::string commands;
  std::string description;
};

inline std::vector<PresetInfo> preset_list() {
  return {
      {"identity-pair", "compat", "two qubit identity channels"},
      {"depolarizing-pair", "compat", "two fully depolarizing qubit channels"},
      {"max-entangled", "steer bell", "|psi+><psi+|; steer with (id, Hadamard), bell with four identities"},
      {"w-state", "steer bell", "Tr_3 |W><W|; steer with (id, id), bell with four identities"},
      {"theta-family:<theta>", "bell", "|psi+><psi+| with the unitary theta family, theta >= 0"},
  };
}

struct CompatInstance {
  Channel c1, c2;
};

struct SteerInstance {
  DensityMatrix rho;
  Channel c1, c2;
};

struct BellInstance {
  DensityMatrix rho;
  Channel c11, c21, c12, c22;
};

namespace detail {

inline std::optional<double> theta_suffix(const std::string& name) {
  const std::string prefix = "theta-family:";
  if (name.rfind(prefix, 0) != 0) return std::nullopt;
  const std::string rest = name.substr(prefix.size());
  double v = 0.0;
  const auto res = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (rest.empty() || res.ec != std::errc() || res.ptr != rest.data() + rest.size())
    throw ValidationError("preset: cannot parse theta in \"" + name + "\"");
  return v;
}

[[noreturn]] inline void unknown_preset(const std::string& name, const char* command) {
  throw ValidationError("preset \"" + name + "\" is not defined for " + command + " (see `preset list`)");
}

}  // namespace detail

inline CompatInstance compat_preset(const std::string& name) {
  if (name == "identity-pair") return {identity_channel(2), identity_channel(2)};
  if (name == "depolarizing-pair") return {depolarizing_channel(2), depolarizing_channel(2)};
  detail::unknown_preset(name, "compat");
}

inline SteerInstance steer_preset(const std::string& name) {
  if (name == "max-entangled") return {max_entangled(2), identity_channel(2), unitary_channel(hadamard())};
  if (name == "w-state") return {w_marginal(), identity_channel(2), identity_channel(2)};
  detail::unknown_preset(name, "steer");
}

inline BellInstance bell_preset(const std::string& name) {
  const Channel id = identity_channel(2);
  if (name == "max-entangled") return {max_entangled(2), id, id, id, id};
  if (name == "w-state") return {w_marginal(), id, id, id, id};
  if (const auto theta = detail::theta_suffix(name)) {
    const ThetaFamily f = theta_family(*theta);
    return {max_entangled(2), unitary_channel(f.u1), unitary_channel(f.u2), unitary_channel(f.v1),
            unitary_channel(f.v2)};
  }
  detail::unknown_preset(name, "bell");
}

}  // namespace chancompat
