// Copyright 2026 The InPipe Authors
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

// INI scenario files. Sections [robot], [spring], [pipe], [drag],
// [controller] and [sim]; lengths in mm, angles in degrees, converted to SI
// on load. Unknown sections or keys are rejected.

#ifndef INPIPE_CONFIG_HPP_
#define INPIPE_CONFIG_HPP_

#include <istream>
#include <ostream>
#include <string>

#include "inpipe/scenario.hpp"

namespace inpipe {

ScenarioConfig default_config();

// `path` == "default" returns default_config(). Throws ValidationError naming
// the path when the file is missing or malformed.
ScenarioConfig load_config(const std::string& path);

ScenarioConfig parse_config(std::istream& in, const std::string& source);

// Writes every key in file units; the output parses back to the same config.
void write_config(std::ostream& out, const ScenarioConfig& config);

}  // namespace inpipe

#endif  // INPIPE_CONFIG_HPP_
