// Copyright 2026 The rydanneal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "rydanneal/hardness.hpp"
#include "rydanneal/layout.hpp"
#include "rydanneal/optimizer.hpp"

namespace rydanneal {

using Json = nlohmann::ordered_json;
using Metadata = std::map<std::string, std::string>;

/// %.12g, the fixed text format of every numeric CSV field.
std::string format_number(double v);

// Models: {"n", "linear", "quadratic": [[i, j, c]], "constant", "convention"}
// plus an optional "metadata" object of strings.
Json to_json(const QuboModel& m, const Metadata& metadata = {});
Json to_json(const IsingModel& m, const Metadata& metadata = {});
/// Reads either convention; Ising input is converted to the binary form.
QuboModel model_from_json(const Json& j, Metadata* metadata = nullptr);

// Schedules: {"T_us", "basis", "delta": {"initial", "coefficients"},
// "omega": {"coefficients", "max", "nonnegative"}, "sample_count"}.
Json to_json(const Schedule& s);
Schedule schedule_from_json(const Json& j);

// Layouts: {"dim", "positions_um", "C6"}.
Json to_json(const AtomLayout& l);
AtomLayout layout_from_json(const Json& j);

Json to_json(const HardwareLimits& l);
/// Keys present in j override the defaults.
HardwareLimits limits_from_json(const Json& j);

Json to_json(const EncodedTarget& t);
EncodedTarget encoded_from_json(const Json& j);

// Plans: {"stages": [{"kind", "max_evals", "tolerance"}]}.
Json to_json(const StagePlan& p);
StagePlan plan_from_json(const Json& j);

Json to_json(const HardnessReport& r);
HardnessReport hardness_from_json(const Json& j);

/// Columns t_us, omega, delta_G, delta_1..delta_n, E, F; delta_j is the
/// per-atom detuning Δ_G(t)·Δ_j(T). A leading "# manifest <hash>" line is
/// written when hash is nonempty.
std::string trajectory_csv(const Trajectory& traj, const EncodedTarget& t,
                           const std::string& hash = {});

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rydanneal
