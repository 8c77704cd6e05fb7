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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "causim/causal_site.hpp"
#include "causim/harness.hpp"
#include "causim/report.hpp"

namespace causim::io {

using nlohmann::json;

/// Parses `text`; syntax errors become ParseError with line and column.
json parse_json(const std::string &text, const std::string &source);
json read_json_file(const std::string &path);
std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

// ---------------------------------------------------------------- sites

json site_to_json(const CausalSite &site);
CausalSite site_from_json(const json &doc);

/// Region given as a list of [t, x] pairs or bare event ids.
Region region_from_json(const CausalSite &site, const json &spec, const std::string &where);
json region_to_json(const CausalSite &site, const Region &r);

// ------------------------------------------------------------ scenarios

struct LatticeSpec {
    int time_extent = 0;
    int spatial_extent = 0;
    int cone_slope = 2;
};

struct RegionSpec {
    std::string name;
    /// Either explicit coordinates or a rectangle [t0, t1] x [x0, x1].
    std::vector<LatticeCoord> events;
    std::optional<std::array<int, 4>> rectangle;
    std::size_t factor = 0;
};

struct AssignmentSpec {
    std::string region;
    /// Family description kept as written: projective, weak, unitary,
    /// kraus, dense or random.
    json family;
    /// Selected outcome index or label; empty for non-selective.
    std::optional<json> outcome;
};

struct DynamicsSpec {
    int from_level = 0;
    std::optional<int> to_level;
    /// Operator expression, or "haar" for a seeded random unitary.
    std::string unitary;
};

struct CheckSpec {
    std::string name;
    json params = json::object();
    bool expect_pass = true;
};

struct ScenarioFile {
    std::string id;
    std::uint64_t seed = 0;
    LatticeSpec lattice;
    std::vector<Eigen::Index> factors;
    std::vector<RegionSpec> regions;
    std::vector<AssignmentSpec> assignments;
    std::vector<DynamicsSpec> dynamics;
    json initial_state;
    std::vector<CheckSpec> checks;
};

/// Schema validation only; names are resolved by compile_scenario.
ScenarioFile scenario_file_from_json(const json &doc);
json scenario_file_to_json(const ScenarioFile &file);

struct CompiledScenario {
    Scenario scenario;
    std::vector<CheckSpec> checks;
    /// Every named region, assigned or not.
    std::map<std::string, Region> regions;
};

/// Resolves regions, families, dynamics and the initial state. Throws
/// InvalidScenario naming the offending entry.
CompiledScenario compile_scenario(const ScenarioFile &file,
                                  std::optional<std::uint64_t> seed_override = std::nullopt,
                                  double tolerance_scale = 1.0);

/// Runs one check; verifier errors become failing records with a note.
VerificationReport run_check(const CompiledScenario &compiled, const CheckSpec &check);

// -------------------------------------------------------------- reports

json report_to_json(const VerificationReport &rep, double runtime_ms);
VerificationReport report_from_json(const json &record);

std::string reports_to_jsonl(const std::vector<VerificationReport> &reports,
                             const std::vector<double> &runtime_ms);
std::vector<VerificationReport> reports_from_jsonl(const std::string &text,
                                                   std::vector<double> *runtime_ms = nullptr);

std::string render_table(const std::vector<VerificationReport> &reports);
std::string render_csv(const std::vector<VerificationReport> &reports,
                       const std::vector<double> &runtime_ms);
std::string render_plotdata(const std::vector<VerificationReport> &reports);

} // namespace causim::io
