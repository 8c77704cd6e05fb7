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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace causim {

using EventId = std::size_t;
using EventSet = boost::dynamic_bitset<>;

struct LatticeCoord {
    int t = 0;
    int x = 0;
    auto operator<=>(const LatticeCoord &) const = default;
};

struct Event {
    EventId id = 0;
    std::optional<LatticeCoord> coords;
};

class CausalSite;

/// A subset of the events of one particular site.
class Region {
  public:
    [[nodiscard]] std::uint64_t site_uid() const noexcept { return site_uid_; }
    [[nodiscard]] const EventSet &members() const noexcept { return members_; }
    [[nodiscard]] std::size_t size() const noexcept { return members_.count(); }
    [[nodiscard]] bool empty() const noexcept { return members_.none(); }
    [[nodiscard]] bool contains(EventId id) const {
        return id < members_.size() && members_.test(id);
    }
    [[nodiscard]] std::vector<EventId> ids() const;

    [[nodiscard]] Region united(const Region &other) const;
    [[nodiscard]] Region intersected(const Region &other) const;
    [[nodiscard]] Region minus(const Region &other) const;
    [[nodiscard]] bool is_subset_of(const Region &other) const;
    [[nodiscard]] bool intersects(const Region &other) const;

    bool operator==(const Region &other) const {
        return site_uid_ == other.site_uid_ && members_ == other.members_;
    }

  private:
    friend class CausalSite;
    Region(std::uint64_t uid, EventSet members)
        : site_uid_(uid), members_(std::move(members)) {}
    void require_same_site(const Region &other) const;

    std::uint64_t site_uid_;
    EventSet members_;
};

/// Finite strict partial order standing in for a globally hyperbolic
/// spacetime. Immutable after construction; every query is read-only.
///
/// The order is stored twice: as the full reachability matrix (`future_`,
/// `past_`) and as its transitive reduction (the covering relation).
class CausalSite {
  public:
    /// Builds the order generated by `relations` (pairs a < b). The
    /// transitive closure is taken; a cycle raises InvalidSite.
    static CausalSite from_relations(
        std::size_t event_count,
        const std::vector<std::pair<EventId, EventId>> &relations);

    /// 1+1 diamond lattice: events (t, x) with 0 <= t <= T, 0 <= x <= L and
    /// (t,x) < (t',x') iff t' > t and slope * |x' - x| <= t' - t.
    static CausalSite diamond_lattice(int time_extent, int spatial_extent,
                                      int cone_slope);

    /// Rebuilds a site from its serialized parts. Lattice coordinates, when
    /// present for every event, must agree with the cone rule for `slope`.
    static CausalSite from_parts(
        std::vector<Event> events,
        const std::vector<std::pair<EventId, EventId>> &covers,
        std::optional<int> cone_slope);

    [[nodiscard]] std::uint64_t uid() const noexcept { return uid_; }
    [[nodiscard]] std::size_t size() const noexcept { return events_.size(); }
    [[nodiscard]] const std::vector<Event> &events() const noexcept {
        return events_;
    }

    [[nodiscard]] bool precedes(EventId a, EventId b) const {
        return future_[a].test(b);
    }
    [[nodiscard]] bool related(EventId a, EventId b) const {
        return precedes(a, b) || precedes(b, a);
    }
    /// Strict future / past of one event as a bitset over event ids.
    [[nodiscard]] const EventSet &strict_future(EventId a) const {
        return future_[a];
    }
    [[nodiscard]] const EventSet &strict_past(EventId a) const {
        return past_[a];
    }
    [[nodiscard]] const std::vector<EventId> &covers_above(EventId a) const {
        return covers_up_[a];
    }
    [[nodiscard]] const std::vector<EventId> &covers_below(EventId a) const {
        return covers_down_[a];
    }
    [[nodiscard]] std::vector<std::pair<EventId, EventId>> cover_pairs() const;

    [[nodiscard]] const EventSet &minimal_events() const noexcept {
        return minimal_;
    }
    [[nodiscard]] const EventSet &maximal_events() const noexcept {
        return maximal_;
    }

    [[nodiscard]] bool is_lattice() const noexcept {
        return cone_slope_.has_value();
    }
    [[nodiscard]] std::optional<int> cone_slope() const noexcept {
        return cone_slope_;
    }
    [[nodiscard]] int time_extent() const noexcept { return time_extent_; }
    [[nodiscard]] int spatial_extent() const noexcept {
        return spatial_extent_;
    }
    [[nodiscard]] const std::optional<LatticeCoord> &
    coords(EventId id) const {
        return events_[id].coords;
    }
    [[nodiscard]] std::optional<EventId> find(LatticeCoord c) const;
    [[nodiscard]] EventId at(int t, int x) const;

    [[nodiscard]] Region region(const std::vector<EventId> &ids) const;
    [[nodiscard]] Region region_at(const std::vector<LatticeCoord> &coords) const;
    [[nodiscard]] Region region_of(EventSet members) const;
    /// Rectangle t0..t1 x x0..x1 (inclusive) of a lattice site.
    [[nodiscard]] Region rectangle(int t0, int t1, int x0, int x1) const;
    [[nodiscard]] Region empty_region() const;
    [[nodiscard]] Region all_events() const;

    /// Throws SiteMismatch when `r` was made on another site.
    void require(const Region &r) const;

    /// Same events with the order reversed; lattice coordinates map
    /// t -> T - t so the reversed site is again a diamond lattice.
    [[nodiscard]] CausalSite reversed() const;

    /// Irreflexivity, transitivity, and closure(covers) == reachability.
    [[nodiscard]] bool check_invariants() const;

  private:
    CausalSite() = default;
    void finish(std::vector<EventSet> future);

    std::uint64_t uid_ = 0;
    std::vector<Event> events_;
    std::vector<EventSet> future_;
    std::vector<EventSet> past_;
    std::vector<std::vector<EventId>> covers_up_;
    std::vector<std::vector<EventId>> covers_down_;
    EventSet minimal_;
    EventSet maximal_;
    std::optional<int> cone_slope_;
    int time_extent_ = 0;
    int spatial_extent_ = 0;
};

/// Order automorphism of a site: p < q iff map(p) < map(q).
class Isometry {
  public:
    /// Throws NonIsometry if `map` is not a bijection or breaks the order.
    static Isometry make(const CausalSite &site, std::vector<EventId> map);

    [[nodiscard]] std::uint64_t site_uid() const noexcept { return site_uid_; }
    [[nodiscard]] EventId operator()(EventId id) const { return map_[id]; }
    [[nodiscard]] Region apply(const CausalSite &site, const Region &r) const;

  private:
    Isometry(std::uint64_t uid, std::vector<EventId> map)
        : site_uid_(uid), map_(std::move(map)) {}
    std::uint64_t site_uid_;
    std::vector<EventId> map_;
};

/// x -> L - x on a lattice site.
Isometry spatial_reflection(const CausalSite &site);

/// Raw event map t -> (t + shift) mod (T + 1). A bijection, but on a finite
/// lattice the wrapped top row loses its successors, so Isometry::make
/// rejects it for any shift that is nonzero mod T + 1.
std::vector<EventId> cyclic_time_shift_map(const CausalSite &site, int shift);

} // namespace causim
