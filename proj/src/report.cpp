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

#include "mollab/report.hpp"

#include <charconv>
#include <cmath>

namespace mollab {

nlohmann::ordered_json CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["parameters"] = parameters;
  j["worst_case"] = worst_case;
  j["deviation"] = deviation;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  return j;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace mollab
