// Copyright 2026 The hmimo Authors.
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

#include <iosfwd>
#include <string>

#include "hmimo/scheduler.hpp"

namespace hmimo::app {

// Controls with probabilities, selections, powers and full outer precoders
// (column-major real/imaginary parts), so a reloaded policy can be re-validated.
void write_policy_json(std::ostream& os, const ControlPolicy& policy, int num_bs, int dim);

// Rates are recomputed from the powers. Throws ValidationError on malformed input.
ControlPolicy read_policy_json(std::istream& is);
ControlPolicy load_policy_json(const std::string& path);

}  // namespace hmimo::app
