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
#include <vector>

#include "causim/causal_site.hpp"

namespace causim {

/// Discrete Cauchy time function: a level per event, strictly increasing
/// along the order, with levels 0..n all occupied.
class Foliation {
  public:
    /// Throws InvalidFoliation unless `level` is strictly monotone on the
    /// order and its values are exactly 0..max.
    static Foliation make(const CausalSite &site, std::vector<int> level);

    [[nodiscard]] std::uint64_t site_uid() const noexcept { return site_uid_; }
    [[nodiscard]] int level(EventId id) const { return level_.at(id); }
    [[nodiscard]] const std::vector<int> &levels() const noexcept { return level_; }
    [[nodiscard]] int level_count() const noexcept { return level_count_; }
    [[nodiscard]] Region slice(const CausalSite &site, int k) const;

    /// Throws FoliationMismatch when built for another site.
    void require_site(const CausalSite &site) const;

  private:
    Foliation(std::uint64_t uid, std::vector<int> level, int count)
        : site_uid_(uid), level_(std::move(level)), level_count_(count) {}
    std::uint64_t site_uid_;
    std::vector<int> level_;
    int level_count_;
};

/// Level = length of the longest cover chain ending at the event.
Foliation rank_foliation(const CausalSite &site);

/// The four intersection tests placing a slice between U and V:
/// Σ ∩ J+(first) ≠ ∅, Σ ∩ J-(first) = ∅, Σ ∩ J+(second) = ∅,
/// Σ ∩ J-(second) ≠ ∅.
std::array<bool, 4> ordering_predicates(const CausalSite &site,
                                        const Region &slice,
                                        const Region &first,
                                        const Region &second);

struct TwoFoliations {
    /// U is measured before V in `first`, after it in `second`.
    Foliation first;
    Foliation second;
    int first_middle = 0;
    int second_middle = 0;
    /// Level of the shared bottom slice (0 in both) and of the shared top
    /// slice in each foliation.
    int first_top = 0;
    int second_top = 0;
};

/// Two foliations sharing bottom and top slices (the site-minimal and
/// site-maximal events) with a Cauchy middle slice separating U and V in
/// opposite orders. Throws NotSpacelike or NoFoliationFound.
TwoFoliations build_two_foliations(const CausalSite &site, const Region &u,
                                   const Region &v);

struct TwoFoliationCheck {
    std::array<bool, 4> first{};
    std::array<bool, 4> second{};
    bool shared_bottom = false;
    bool shared_top = false;
    bool bounds_enclose = false;
    bool middles_cauchy = false;

    [[nodiscard]] bool all() const;
};

/// Re-derives every property promised by build_two_foliations.
TwoFoliationCheck check_two_foliations(const CausalSite &site,
                                       const TwoFoliations &pair,
                                       const Region &u, const Region &v);

} // namespace causim
