// Copyright 2026 The mollab Authors
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

#include "json.hpp"

namespace mollab {

/// Outcome of one verification sweep: {check, parameters, worst_case, deviation, pass}.
struct CheckReport {
  std::string check;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  nlohmann::ordered_json worst_case = nlohmann::ordered_json::object();
  double deviation = 0;
  double tolerance = 0;
  bool pass = false;

  nlohmann::ordered_json to_json() const;
};

/// Shortest decimal string that round-trips the double.
std::string format_double(double x);

}  // namespace mollab
