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

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace causim {

/// Outcome of one verification check. Evidence values are always finite.
struct VerificationReport {
    std::string scenario;
    std::string check;
    bool pass = false;
    /// Set when the check is a negative control expected to fail.
    bool expected_failure = false;
    std::map<std::string, double> evidence;
    std::map<std::string, double> tolerances;
    std::map<std::string, std::string> notes;
    /// Optional (x, y) series for plotting, e.g. a parameter sweep.
    std::vector<std::pair<double, double>> series;

    /// True when the result matches what was expected of it.
    [[nodiscard]] bool as_expected() const { return pass != expected_failure; }
};

} // namespace causim
