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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "causim/causal_site.hpp"
#include "causim/foliation.hpp"
#include "causim/quantum.hpp"
#include "causim/report.hpp"

namespace causim {

using State = std::variant<PureState, DensityOperator>;

/// A measurement family bound to a region. Without an outcome the
/// measurement is non-selective.
struct Assignment {
    std::string name;
    Region region;
    MeasurementFamily family;
    std::optional<std::size_t> outcome;
};

/// Unitary applied between level `from_level` and the next one. Negative
/// values count from the end: -1 is the last transition.
struct DynamicsStep {
    int from_level = 0;
    Unitary unitary;
};

struct Scenario {
    std::string id;
    std::shared_ptr<const CausalSite> site;
    std::vector<Eigen::Index> dims;
    std::vector<Assignment> assignments;
    std::vector<DynamicsStep> dynamics;
    State initial;
    std::uint64_t seed = 0;
    Tolerances tol;

    [[nodiscard]] Eigen::Index dim() const;
    /// Index of the assignment named `name`; throws InvalidScenario.
    [[nodiscard]] std::size_t find(const std::string &name) const;
    /// Nonempty regions on this site, consistent dimensions, known outcomes.
    void validate() const;
};

struct FiringRecord {
    std::size_t assignment = 0;
    int level = 0;
    /// State just before the firing, as a density operator.
    Matrix before;
    /// Outcome probabilities on that state.
    std::vector<double> distribution;
};

struct FoliationRun {
    /// Per assignment: the maximum level over its future boundary.
    std::vector<int> firing_level;
    /// State after the firings at each level.
    std::vector<std::pair<int, State>> trajectory;
    std::vector<FiringRecord> firings;
    double probability = 1.0;
    /// Same-level firings whose operators are not proportional.
    bool order_sensitive_tie = false;
    State final_state;
};

FoliationRun run_foliation(const Scenario &scenario, const Foliation &foliation);

/// Relative ray phase and fidelity between the two orders of a spacelike
/// pair of selective assignments.
VerificationReport verify_spacelike_commutation(const Scenario &scenario, std::size_t u,
                                                std::size_t v);

/// Commutator of the derived effects and the φ = 4η linkage, η taken from
/// the square roots of the effects.
VerificationReport verify_povm_bosonic(const Scenario &scenario, std::size_t u,
                                       std::size_t v);

/// Probe statistics with and without the non-selective sender.
VerificationReport verify_no_signalling(const Scenario &scenario, std::size_t sender,
                                        std::size_t probe);

/// TV distance of the probe's outcome distribution with the sender active
/// vs replaced by the identity.
double detect_signalling(const Scenario &scenario, std::size_t sender, std::size_t probe);
VerificationReport detect_signalling_report(const Scenario &scenario, std::size_t sender,
                                            std::size_t probe);

/// Kick at U, mediator at W, probe at V. `pass` means no signal reached V.
VerificationReport run_sorkin(const Scenario &scenario, std::size_t kick,
                              std::size_t mediator, std::size_t probe);

/// run_sorkin with the mediator replaced by `mediator_at(θ)` for each θ;
/// evidence compares against a direct matrix computation.
VerificationReport run_sorkin_sweep(const Scenario &scenario, std::size_t kick,
                                    std::size_t mediator, std::size_t probe,
                                    const std::function<Matrix(double)> &mediator_at,
                                    const std::vector<double> &thetas);

/// Proportionality chain M2M3M1 ∝ M3M2M1 ∝ M3M1M2 and what it forces.
VerificationReport test_sorkin_dichotomy(const Matrix &m1, const Matrix &m2,
                                         const Matrix &m3, const Tolerances &tol = {});

} // namespace causim
