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

#include "causim/causal_site.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

#include "causim/error.hpp"

namespace causim {

namespace {

std::uint64_t next_uid() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

} // namespace

// ---------------------------------------------------------------- Region

std::vector<EventId> Region::ids() const {
    std::vector<EventId> out;
    out.reserve(members_.count());
    for (auto i = members_.find_first(); i != EventSet::npos;
         i = members_.find_next(i)) {
        out.push_back(i);
    }
    return out;
}

void Region::require_same_site(const Region &other) const {
    if (site_uid_ != other.site_uid_) {
        throw Error(ErrorCode::SiteMismatch,
                    "regions belong to different causal sites");
    }
}

Region Region::united(const Region &other) const {
    require_same_site(other);
    return {site_uid_, members_ | other.members_};
}

Region Region::intersected(const Region &other) const {
    require_same_site(other);
    return {site_uid_, members_ & other.members_};
}

Region Region::minus(const Region &other) const {
    require_same_site(other);
    return {site_uid_, members_ - other.members_};
}

bool Region::is_subset_of(const Region &other) const {
    require_same_site(other);
    return members_.is_subset_of(other.members_);
}

bool Region::intersects(const Region &other) const {
    require_same_site(other);
    return members_.intersects(other.members_);
}

// ------------------------------------------------------------ CausalSite

CausalSite CausalSite::from_relations(
    std::size_t event_count,
    const std::vector<std::pair<EventId, EventId>> &relations) {
    std::vector<std::vector<EventId>> out(event_count);
    std::vector<std::size_t> indegree(event_count, 0);
    for (auto [a, b] : relations) {
        if (a >= event_count || b >= event_count) {
            throw Error(ErrorCode::InvalidSite, "relation references event " +
                                                    std::to_string(std::max(a, b)) +
                                                    " outside the site");
        }
        if (a == b) {
            throw Error(ErrorCode::InvalidSite,
                        "event " + std::to_string(a) + " precedes itself");
        }
        out[a].push_back(b);
        ++indegree[b];
    }

    // Kahn's algorithm; leftover events sit on a cycle.
    std::vector<EventId> order;
    order.reserve(event_count);
    for (EventId i = 0; i < event_count; ++i) {
        if (indegree[i] == 0) order.push_back(i);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (EventId b : out[order[head]]) {
            if (--indegree[b] == 0) order.push_back(b);
        }
    }
    if (order.size() != event_count) {
        throw Error(ErrorCode::InvalidSite,
                    "relation contains a closed causal loop");
    }

    std::vector<EventSet> future(event_count, EventSet(event_count));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        for (EventId b : out[*it]) {
            future[*it].set(b);
            future[*it] |= future[b];
        }
    }

    CausalSite site;
    site.events_.resize(event_count);
    for (EventId i = 0; i < event_count; ++i) site.events_[i].id = i;
    site.finish(std::move(future));
    return site;
}

CausalSite CausalSite::diamond_lattice(int time_extent, int spatial_extent,
                                       int cone_slope) {
    if (time_extent < 1) {
        throw Error(ErrorCode::InvalidArgument, "time extent must be >= 1");
    }
    if (spatial_extent < 0) {
        throw Error(ErrorCode::InvalidArgument, "spatial extent must be >= 0");
    }
    if (cone_slope < 1) {
        throw Error(ErrorCode::InvalidArgument, "cone slope must be >= 1");
    }
    const auto width = static_cast<std::size_t>(spatial_extent) + 1;
    const std::size_t n = (static_cast<std::size_t>(time_extent) + 1) * width;

    CausalSite site;
    site.events_.resize(n);
    for (EventId i = 0; i < n; ++i) {
        site.events_[i].id = i;
        site.events_[i].coords = LatticeCoord{static_cast<int>(i / width),
                                              static_cast<int>(i % width)};
    }
    std::vector<EventSet> future(n, EventSet(n));
    for (EventId a = 0; a < n; ++a) {
        const auto ca = *site.events_[a].coords;
        for (EventId b = 0; b < n; ++b) {
            const auto cb = *site.events_[b].coords;
            const int dt = cb.t - ca.t;
            if (dt > 0 && cone_slope * std::abs(cb.x - ca.x) <= dt) {
                future[a].set(b);
            }
        }
    }
    site.cone_slope_ = cone_slope;
    site.time_extent_ = time_extent;
    site.spatial_extent_ = spatial_extent;
    site.finish(std::move(future));
    if (!site.check_invariants()) {
        throw Error(ErrorCode::InvalidSite,
                    "lattice cone relation is not a strict partial order");
    }
    return site;
}

CausalSite CausalSite::from_parts(
    std::vector<Event> events,
    const std::vector<std::pair<EventId, EventId>> &covers,
    std::optional<int> cone_slope) {
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].id != i) {
            throw Error(ErrorCode::InvalidSite,
                        "event ids must be contiguous from 0; found id " +
                            std::to_string(events[i].id) + " at position " +
                            std::to_string(i));
        }
    }
    CausalSite site = from_relations(events.size(), covers);
    const bool all_coords =
        !events.empty() && std::all_of(events.begin(), events.end(),
                                       [](const Event &e) { return e.coords.has_value(); });
    if (cone_slope.has_value()) {
        if (!all_coords) {
            throw Error(ErrorCode::InvalidSite,
                        "a cone slope requires coordinates on every event");
        }
        int t_max = 0;
        int x_max = 0;
        for (const auto &e : events) {
            t_max = std::max(t_max, e.coords->t);
            x_max = std::max(x_max, e.coords->x);
        }
        CausalSite lattice = diamond_lattice(t_max, x_max, *cone_slope);
        if (lattice.size() != events.size()) {
            throw Error(ErrorCode::InvalidSite,
                        "lattice coordinates do not fill a full rectangle");
        }
        // Events may be listed in any id order; compare through coordinates.
        for (EventId a = 0; a < events.size(); ++a) {
            const EventId la = lattice.at(events[a].coords->t, events[a].coords->x);
            for (EventId b = 0; b < events.size(); ++b) {
                const EventId lb = lattice.at(events[b].coords->t, events[b].coords->x);
                if (site.precedes(a, b) != lattice.precedes(la, lb)) {
                    throw Error(ErrorCode::InvalidSite,
                                "covers disagree with the cone rule at events " +
                                    std::to_string(a) + ", " + std::to_string(b));
                }
            }
        }
        site.cone_slope_ = cone_slope;
        site.time_extent_ = t_max;
        site.spatial_extent_ = x_max;
    }
    site.events_ = std::move(events);
    return site;
}

void CausalSite::finish(std::vector<EventSet> future) {
    const std::size_t n = events_.size();
    uid_ = next_uid();
    future_ = std::move(future);
    past_.assign(n, EventSet(n));
    for (EventId a = 0; a < n; ++a) {
        for (auto b = future_[a].find_first(); b != EventSet::npos;
             b = future_[a].find_next(b)) {
            past_[b].set(a);
        }
    }
    covers_up_.assign(n, {});
    covers_down_.assign(n, {});
    for (EventId a = 0; a < n; ++a) {
        EventSet reachable_in_two(n);
        for (auto b = future_[a].find_first(); b != EventSet::npos;
             b = future_[a].find_next(b)) {
            reachable_in_two |= future_[b];
        }
        const EventSet direct = future_[a] - reachable_in_two;
        for (auto b = direct.find_first(); b != EventSet::npos;
             b = direct.find_next(b)) {
            covers_up_[a].push_back(b);
            covers_down_[b].push_back(a);
        }
    }
    minimal_.resize(n);
    maximal_.resize(n);
    for (EventId a = 0; a < n; ++a) {
        minimal_[a] = past_[a].none();
        maximal_[a] = future_[a].none();
    }
}

std::vector<std::pair<EventId, EventId>> CausalSite::cover_pairs() const {
    std::vector<std::pair<EventId, EventId>> out;
    for (EventId a = 0; a < size(); ++a) {
        for (EventId b : covers_up_[a]) out.emplace_back(a, b);
    }
    return out;
}

std::optional<EventId> CausalSite::find(LatticeCoord c) const {
    if (!is_lattice() || c.t < 0 || c.x < 0 || c.t > time_extent_ ||
        c.x > spatial_extent_) {
        return std::nullopt;
    }
    const auto width = static_cast<std::size_t>(spatial_extent_) + 1;
    const EventId guess = static_cast<std::size_t>(c.t) * width +
                          static_cast<std::size_t>(c.x);
    if (guess < size() && events_[guess].coords == c) return guess;
    for (const auto &e : events_) {
        if (e.coords == c) return e.id;
    }
    return std::nullopt;
}

EventId CausalSite::at(int t, int x) const {
    if (!is_lattice()) {
        throw Error(ErrorCode::NotLatticeSite,
                    "coordinate lookup on a site without lattice coordinates");
    }
    auto id = find({t, x});
    if (!id) {
        throw Error(ErrorCode::InvalidArgument,
                    "no event at (t=" + std::to_string(t) +
                        ", x=" + std::to_string(x) + ")");
    }
    return *id;
}

Region CausalSite::region(const std::vector<EventId> &ids) const {
    EventSet members(size());
    for (EventId id : ids) {
        if (id >= size()) {
            throw Error(ErrorCode::InvalidArgument,
                        "event id " + std::to_string(id) + " outside the site");
        }
        members.set(id);
    }
    return {uid_, std::move(members)};
}

Region CausalSite::region_at(const std::vector<LatticeCoord> &coords) const {
    std::vector<EventId> ids;
    ids.reserve(coords.size());
    for (auto c : coords) ids.push_back(at(c.t, c.x));
    return region(ids);
}

Region CausalSite::region_of(EventSet members) const {
    if (members.size() != size()) {
        throw Error(ErrorCode::InvalidArgument, "event set has wrong width");
    }
    return {uid_, std::move(members)};
}

Region CausalSite::rectangle(int t0, int t1, int x0, int x1) const {
    std::vector<EventId> ids;
    for (int t = t0; t <= t1; ++t) {
        for (int x = x0; x <= x1; ++x) ids.push_back(at(t, x));
    }
    return region(ids);
}

Region CausalSite::empty_region() const { return {uid_, EventSet(size())}; }

Region CausalSite::all_events() const {
    EventSet all(size());
    all.set();
    return {uid_, std::move(all)};
}

void CausalSite::require(const Region &r) const {
    if (r.site_uid() != uid_ || r.members().size() != size()) {
        throw Error(ErrorCode::SiteMismatch,
                    "region does not belong to this causal site");
    }
}

CausalSite CausalSite::reversed() const {
    CausalSite out;
    out.events_ = events_;
    if (is_lattice()) {
        for (auto &e : out.events_) e.coords->t = time_extent_ - e.coords->t;
    }
    out.cone_slope_ = cone_slope_;
    out.time_extent_ = time_extent_;
    out.spatial_extent_ = spatial_extent_;
    out.finish(past_);
    return out;
}

bool CausalSite::check_invariants() const {
    const std::size_t n = size();
    for (EventId a = 0; a < n; ++a) {
        if (future_[a].test(a)) return false;
        for (auto b = future_[a].find_first(); b != EventSet::npos;
             b = future_[a].find_next(b)) {
            if (!future_[b].is_subset_of(future_[a])) return false;
        }
    }
    // Closure of the covering relation, rebuilt from scratch by DFS.
    for (EventId a = 0; a < n; ++a) {
        EventSet seen(n);
        std::vector<EventId> stack(covers_up_[a].begin(), covers_up_[a].end());
        while (!stack.empty()) {
            const EventId b = stack.back();
            stack.pop_back();
            if (seen.test(b)) continue;
            seen.set(b);
            for (EventId c : covers_up_[b]) stack.push_back(c);
        }
        if (seen != future_[a]) return false;
    }
    return true;
}

// -------------------------------------------------------------- Isometry

Isometry Isometry::make(const CausalSite &site, std::vector<EventId> map) {
    const std::size_t n = site.size();
    if (map.size() != n) {
        throw Error(ErrorCode::NonIsometry, "map size differs from site size");
    }
    EventSet hit(n);
    for (EventId image : map) {
        if (image >= n || hit.test(image)) {
            throw Error(ErrorCode::NonIsometry, "map is not a bijection");
        }
        hit.set(image);
    }
    for (EventId a = 0; a < n; ++a) {
        for (EventId b = 0; b < n; ++b) {
            if (site.precedes(a, b) != site.precedes(map[a], map[b])) {
                throw Error(ErrorCode::NonIsometry,
                            "map breaks the causal order at events " +
                                std::to_string(a) + ", " + std::to_string(b));
            }
        }
    }
    return {site.uid(), std::move(map)};
}

Region Isometry::apply(const CausalSite &site, const Region &r) const {
    site.require(r);
    if (site.uid() != site_uid_) {
        throw Error(ErrorCode::SiteMismatch, "isometry belongs to another site");
    }
    EventSet image(site.size());
    for (EventId id : r.ids()) image.set(map_[id]);
    return site.region_of(std::move(image));
}

Isometry spatial_reflection(const CausalSite &site) {
    if (!site.is_lattice()) {
        throw Error(ErrorCode::NotLatticeSite, "reflection needs lattice coordinates");
    }
    std::vector<EventId> map(site.size());
    for (const auto &e : site.events()) {
        map[e.id] = site.at(e.coords->t, site.spatial_extent() - e.coords->x);
    }
    return Isometry::make(site, std::move(map));
}

std::vector<EventId> cyclic_time_shift_map(const CausalSite &site, int shift) {
    if (!site.is_lattice()) {
        throw Error(ErrorCode::NotLatticeSite, "time shift needs lattice coordinates");
    }
    const int period = site.time_extent() + 1;
    std::vector<EventId> map(site.size());
    for (const auto &e : site.events()) {
        const int t = ((e.coords->t + shift) % period + period) % period;
        map[e.id] = site.at(t, e.coords->x);
    }
    return map;
}

} // namespace causim
