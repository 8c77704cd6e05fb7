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

// Brute-force reference for causal queries. Works from the covering
// relation alone, walking every chain explicitly; nothing here touches the
// reachability matrix of CausalSite.

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "causim/causal_site.hpp"

namespace causim::oracle {

using Ids = std::set<EventId>;

class Poset {
  public:
    explicit Poset(const CausalSite &site);

    [[nodiscard]] std::size_t size() const { return up_.size(); }
    [[nodiscard]] bool reaches(EventId a, EventId b) const;

    [[nodiscard]] Ids future(const Ids &r) const;
    [[nodiscard]] Ids past(const Ids &r) const;
    [[nodiscard]] Ids chronological_future(const Ids &r) const;
    [[nodiscard]] Ids chronological_past(const Ids &r) const;
    [[nodiscard]] Ids dependence_future(const Ids &s) const;
    [[nodiscard]] Ids dependence_past(const Ids &s) const;
    [[nodiscard]] Ids future_boundary(const Ids &r) const;
    [[nodiscard]] Ids past_boundary(const Ids &r) const;
    [[nodiscard]] bool spacelike(const Ids &u, const Ids &v) const;
    [[nodiscard]] bool acausal(const Ids &s) const;
    [[nodiscard]] bool cauchy(const Ids &s) const;
    [[nodiscard]] Ids minimal() const;
    [[nodiscard]] Ids maximal() const;

    /// Calls `f` on every maximal antichain.
    void for_each_maximal_antichain(const std::function<void(const Ids &)> &f) const;

    /// Whether a Cauchy slice Σ exists with Σ disjoint from the site's
    /// minimal and maximal events, Σ ∩ J+(first) ≠ ∅, Σ ∩ J-(first) = ∅,
    /// Σ ∩ J+(second) = ∅ and Σ ∩ J-(second) ≠ ∅.
    [[nodiscard]] bool separating_slice_exists(const Ids &first, const Ids &second) const;

  private:
    Ids dependence(const Ids &s, bool future) const;

    std::vector<std::vector<EventId>> up_;
    std::vector<std::vector<EventId>> down_;
    std::vector<std::optional<LatticeCoord>> coords_;
    std::optional<int> slope_;
    std::vector<std::vector<bool>> reach_;
};

Ids to_ids(const Region &r);

/// Random order on n events: each pair i < j of a random permutation is
/// related with probability `density`.
CausalSite random_site(std::size_t n, double density, std::mt19937_64 &rng);

/// Random subset where each event is kept with probability `p`.
Region random_region(const CausalSite &site, double p, std::mt19937_64 &rng);

} // namespace causim::oracle
