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

#include "causim/foliation.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "causim/causal_queries.hpp"
#include "causim/error.hpp"

namespace causim {

namespace {

std::vector<EventId> by_past_size(const CausalSite &site) {
    std::vector<EventId> order(site.size());
    std::iota(order.begin(), order.end(), EventId{0});
    std::stable_sort(order.begin(), order.end(), [&](EventId a, EventId b) {
        return site.strict_past(a).count() < site.strict_past(b).count();
    });
    return order;
}

// Longest chain inside `zone` ending at each member; -1 outside the zone.
std::vector<int> zone_rank(const CausalSite &site, const EventSet &zone) {
    std::vector<int> rank(site.size(), -1);
    for (EventId p : by_past_size(site)) {
        if (!zone.test(p)) continue;
        int r = 0;
        const EventSet below = site.strict_past(p) & zone;
        for (auto q = below.find_first(); q != EventSet::npos; q = below.find_next(q)) {
            r = std::max(r, rank[q] + 1);
        }
        rank[p] = r;
    }
    return rank;
}

EventSet cone(const CausalSite &site, const EventSet &s, bool future) {
    EventSet out = s;
    for (auto p = s.find_first(); p != EventSet::npos; p = s.find_next(p)) {
        out |= future ? site.strict_future(p) : site.strict_past(p);
    }
    return out;
}

// Finds a down-closed set Δ with required ⊆ Δ ⊆ allowed such that no
// member of `required` is maximal in Δ and max(Δ) is a maximal antichain.
class SliceSearch {
  public:
    SliceSearch(const CausalSite &site, EventSet required, EventSet allowed)
        : site_(site), required_(std::move(required)), allowed_(std::move(allowed)) {}

    std::optional<EventSet> run() { return visit(required_); }

  private:
    static constexpr std::size_t kBudget = 200000;

    bool is_max(const EventSet &delta, EventId p) const {
        return !site_.strict_future(p).intersects(delta);
    }

    // An event outside Δ whose predecessors are all in Δ but none maximal
    // there can never sit above max(Δ); it has to join Δ.
    bool propagate(EventSet &delta) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (EventId q = 0; q < site_.size(); ++q) {
                if (delta.test(q)) continue;
                const auto &preds = site_.covers_below(q);
                if (preds.empty()) return false;
                bool all_in = true;
                bool some_max = false;
                for (EventId p : preds) {
                    if (!delta.test(p)) {
                        all_in = false;
                        break;
                    }
                    some_max = some_max || is_max(delta, p);
                }
                if (!all_in || some_max) continue;
                if (!allowed_.test(q)) return false;
                delta.set(q);
                changed = true;
            }
        }
        return true;
    }

    std::optional<EventSet> visit(EventSet delta) {
        if (++nodes_ > kBudget) {
            throw Error(ErrorCode::NoFoliationFound,
                        "slice search budget exhausted");
        }
        if (!propagate(delta)) return std::nullopt;
        if (!seen_.insert(delta).second) return std::nullopt;

        std::optional<EventId> stuck;
        for (auto a = required_.find_first(); a != EventSet::npos;
             a = required_.find_next(a)) {
            if (is_max(delta, a)) {
                stuck = a;
                break;
            }
        }
        if (!stuck) return delta;

        std::vector<std::pair<std::size_t, EventSet>> options;
        for (EventId s : site_.covers_above(*stuck)) {
            if (!allowed_.test(s)) continue;
            EventSet grown = delta | site_.strict_past(s);
            grown.set(s);
            options.emplace_back((grown - delta).count(), std::move(grown));
        }
        std::stable_sort(options.begin(), options.end(),
                         [](const auto &a, const auto &b) { return a.first < b.first; });
        for (auto &[cost, grown] : options) {
            if (auto found = visit(std::move(grown))) return found;
        }
        return std::nullopt;
    }

    const CausalSite &site_;
    EventSet required_;
    EventSet allowed_;
    std::set<EventSet> seen_;
    std::size_t nodes_ = 0;
};

struct Separated {
    Foliation foliation;
    int middle;
    int top;
};

Separated separate(const CausalSite &site, const Region &first,
                   const Region &second) {
    const EventSet &min = site.minimal_events();
    const EventSet &max = site.maximal_events();
    const EventSet required = cone(site, first.members(), false) | min;
    const EventSet allowed = ~(cone(site, second.members(), true) | max);

    SliceSearch search(site, required, allowed);
    auto delta = search.run();
    if (!delta) {
        throw Error(ErrorCode::NoFoliationFound,
                    "no Cauchy slice separates the regions on this site");
    }

    EventSet middle(site.size());
    for (auto p = delta->find_first(); p != EventSet::npos; p = delta->find_next(p)) {
        if (!site.strict_future(p).intersects(*delta)) middle.set(p);
    }
    const EventSet lower = *delta - middle - min;
    const EventSet upper = ~*delta - max;

    const auto lower_rank = zone_rank(site, lower);
    const auto upper_rank = zone_rank(site, upper);
    const int lower_levels =
        lower.any() ? *std::max_element(lower_rank.begin(), lower_rank.end()) + 1 : 0;
    const int upper_levels =
        upper.any() ? *std::max_element(upper_rank.begin(), upper_rank.end()) + 1 : 0;
    const int mid = 1 + lower_levels;
    const int top = mid + 1 + upper_levels;

    std::vector<int> level(site.size());
    for (EventId p = 0; p < site.size(); ++p) {
        if (min.test(p)) level[p] = 0;
        else if (lower.test(p)) level[p] = 1 + lower_rank[p];
        else if (middle.test(p)) level[p] = mid;
        else if (upper.test(p)) level[p] = mid + 1 + upper_rank[p];
        else level[p] = top;
    }
    return {Foliation::make(site, std::move(level)), mid, top};
}

} // namespace

Foliation Foliation::make(const CausalSite &site, std::vector<int> level) {
    if (level.size() != site.size()) {
        throw Error(ErrorCode::InvalidFoliation, "level map size differs from site size");
    }
    if (level.empty()) return {site.uid(), std::move(level), 0};
    const int top = *std::max_element(level.begin(), level.end());
    std::vector<bool> used(static_cast<std::size_t>(std::max(top, 0)) + 1, false);
    for (int l : level) {
        if (l < 0) throw Error(ErrorCode::InvalidFoliation, "negative level");
        used[static_cast<std::size_t>(l)] = true;
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) {
        throw Error(ErrorCode::InvalidFoliation, "levels skip a value");
    }
    for (EventId a = 0; a < site.size(); ++a) {
        for (EventId b : site.covers_above(a)) {
            if (level[a] >= level[b]) {
                throw Error(ErrorCode::InvalidFoliation,
                            "level does not increase from event " + std::to_string(a) +
                                " to " + std::to_string(b));
            }
        }
    }
    return {site.uid(), std::move(level), top + 1};
}

Region Foliation::slice(const CausalSite &site, int k) const {
    require_site(site);
    EventSet out(site.size());
    for (EventId p = 0; p < level_.size(); ++p) {
        if (level_[p] == k) out.set(p);
    }
    return site.region_of(std::move(out));
}

void Foliation::require_site(const CausalSite &site) const {
    if (site.uid() != site_uid_) {
        throw Error(ErrorCode::FoliationMismatch, "foliation belongs to another site");
    }
}

Foliation rank_foliation(const CausalSite &site) {
    EventSet all(site.size());
    all.set();
    return Foliation::make(site, zone_rank(site, all));
}

std::array<bool, 4> ordering_predicates(const CausalSite &site,
                                        const Region &slice,
                                        const Region &first,
                                        const Region &second) {
    return {slice.intersects(causal_future(site, first)),
            !slice.intersects(causal_past(site, first)),
            !slice.intersects(causal_future(site, second)),
            slice.intersects(causal_past(site, second))};
}

TwoFoliations build_two_foliations(const CausalSite &site, const Region &u,
                                   const Region &v) {
    site.require(u);
    site.require(v);
    if (u.empty() || v.empty()) {
        throw Error(ErrorCode::InvalidArgument, "regions must be nonempty");
    }
    if (!is_spacelike_separated(site, u, v)) {
        throw Error(ErrorCode::NotSpacelike, "regions are causally related");
    }
    const EventSet ends = site.minimal_events() | site.maximal_events();
    if (site.minimal_events().intersects(site.maximal_events())) {
        throw Error(ErrorCode::NoFoliationFound,
                    "site has isolated events; bottom and top slices would overlap");
    }
    if (u.members().intersects(ends) || v.members().intersects(ends)) {
        throw Error(ErrorCode::NoFoliationFound,
                    "regions touch the first or last slice of the site");
    }
    auto a = separate(site, u, v);
    auto b = separate(site, v, u);
    return {std::move(a.foliation), std::move(b.foliation), a.middle, b.middle,
            a.top, b.top};
}

bool TwoFoliationCheck::all() const {
    const auto ok = [](const std::array<bool, 4> &p) {
        return std::all_of(p.begin(), p.end(), [](bool x) { return x; });
    };
    return ok(first) && ok(second) && shared_bottom && shared_top &&
           bounds_enclose && middles_cauchy;
}

TwoFoliationCheck check_two_foliations(const CausalSite &site,
                                       const TwoFoliations &pair,
                                       const Region &u, const Region &v) {
    pair.first.require_site(site);
    pair.second.require_site(site);
    TwoFoliationCheck out;
    const Region sigma1 = pair.first.slice(site, pair.first_middle);
    const Region sigma2 = pair.second.slice(site, pair.second_middle);
    out.first = ordering_predicates(site, sigma1, u, v);
    out.second = ordering_predicates(site, sigma2, v, u);

    const Region bottom1 = pair.first.slice(site, 0);
    const Region bottom2 = pair.second.slice(site, 0);
    const Region top1 = pair.first.slice(site, pair.first_top);
    const Region top2 = pair.second.slice(site, pair.second_top);
    out.shared_bottom = bottom1 == bottom2 && is_maximal_antichain(site, bottom1);
    out.shared_top = top1 == top2 && is_maximal_antichain(site, top1) &&
                     pair.first_top == pair.first.level_count() - 1 &&
                     pair.second_top == pair.second.level_count() - 1;

    const Region both = u.united(v);
    out.bounds_enclose = both.is_subset_of(strict_causal_future(site, bottom1)) &&
                         both.is_subset_of(strict_causal_past(site, top1)) &&
                         0 < pair.first_middle && pair.first_middle < pair.first_top &&
                         0 < pair.second_middle && pair.second_middle < pair.second_top;
    out.middles_cauchy = is_acausal(site, sigma1) && is_acausal(site, sigma2) &&
                         is_cauchy_slice(site, sigma1) && is_cauchy_slice(site, sigma2);
    return out;
}

} // namespace causim
