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

#include <cstdint>
#include <string>
#include <string_view>

#include "rydanneal/io.hpp"

namespace rydanneal {

inline constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view data);

/// Everything that determines the numbers a command produces.
struct RunManifest {
  std::string command;
  std::string instance;  // built-in instance name or model path
  std::string mode = "ideal";
  std::uint64_t seed = 0;
  /// Free-form configuration (schedule, plan, limits, flags).
  Json config = Json::object();
  std::string tool_version = kToolVersion;
  std::string created;  // UTC timestamp; excluded from the hash

  /// Canonical JSON without the timestamp.
  Json canonical() const;
  /// 16 hex digits of FNV-1a over canonical().dump().
  std::string hash() const;
  /// canonical() plus "created" and "hash".
  Json to_json() const;
};

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace rydanneal
