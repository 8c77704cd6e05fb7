// Copyright 2026 The causim Authors
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
#include <vector>

namespace causim::cli {

/// Exit codes: 0 all checks as expected, 1 unexpected verification
/// failure, 2 input or schema error.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Output directory used by `run` when --output is absent.
std::string default_output_dir();

} // namespace causim::cli
