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

#include "causal_oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace causim::oracle {

Poset::Poset(const CausalSite &site)
    : up_(site.size()), down_(site.size()), coords_(site.size()),
      slope_(site.cone_slope()) {
    for (auto [a, b] : site.cover_pairs()) {
        up_[a].push_back(b);
        down_[b].push_back(a);
    }
    for (EventId i = 0; i < site.size(); ++i) coords_[i] = site.coords(i);

    reach_.assign(size(), std::vector<bool>(size(), false));
    for (EventId a = 0; a < size(); ++a) {
        std::vector<EventId> stack(up_[a]);
        while (!stack.empty()) {
            const EventId b = stack.back();
            stack.pop_back();
            if (reach_[a][b]) continue;
            reach_[a][b] = true;
            for (EventId c : up_[b]) stack.push_back(c);
        }
    }
}

bool Poset::reaches(EventId a, EventId b) const { return reach_[a][b]; }

Ids Poset::future(const Ids &r) const {
    Ids out;
    for (EventId q = 0; q < size(); ++q) {
        for (EventId p : r) {
            if (p == q || reaches(p, q)) {
                out.insert(q);
                break;
            }
        }
    }
    return out;
}

Ids Poset::past(const Ids &r) const {
    Ids out;
    for (EventId q = 0; q < size(); ++q) {
        for (EventId p : r) {
            if (p == q || reaches(q, p)) {
                out.insert(q);
                break;
            }
        }
    }
    return out;
}

Ids Poset::chronological_future(const Ids &r) const {
    Ids out;
    for (EventId p : r) {
        for (EventId q = 0; q < size(); ++q) {
            const int dt = coords_[q]->t - coords_[p]->t;
            if (dt > 0 && *slope_ * std::abs(coords_[q]->x - coords_[p]->x) < dt) {
                out.insert(q);
            }
        }
    }
    return out;
}

Ids Poset::chronological_past(const Ids &r) const {
    Ids out;
    for (EventId p : r) {
        for (EventId q = 0; q < size(); ++q) {
            const int dt = coords_[p]->t - coords_[q]->t;
            if (dt > 0 && *slope_ * std::abs(coords_[q]->x - coords_[p]->x) < dt) {
                out.insert(q);
            }
        }
    }
    return out;
}

Ids Poset::dependence(const Ids &s, bool future) const {
    const Ids behind = future ? past(s) : this->future(s);
    const Ids ahead = future ? this->future(s) : past(s);
    const auto &next = future ? up_ : down_;
    const auto &prev = future ? down_ : up_;
    std::vector<bool> escapes(size(), false);

    // Depth-first walk over every chain starting at an end of the site.
    std::function<void(EventId, std::optional<EventId>, bool)> walk =
        [&](EventId p, std::optional<EventId> from, bool met) {
            met = met || s.count(p) > 0 ||
                  (from && behind.count(*from) > 0 && ahead.count(p) > 0);
            if (!met) escapes[p] = true;
            for (EventId q : next[p]) walk(q, p, met);
        };
    for (EventId p = 0; p < size(); ++p) {
        if (prev[p].empty()) walk(p, std::nullopt, false);
    }
    Ids out;
    for (EventId p = 0; p < size(); ++p) {
        if (!escapes[p]) out.insert(p);
    }
    return out;
}

Ids Poset::dependence_future(const Ids &s) const { return dependence(s, true); }
Ids Poset::dependence_past(const Ids &s) const { return dependence(s, false); }

Ids Poset::future_boundary(const Ids &r) const {
    Ids out;
    for (EventId p : r) {
        bool top = true;
        for (EventId q : r) top = top && !reaches(p, q);
        if (top) out.insert(p);
    }
    return out;
}

Ids Poset::past_boundary(const Ids &r) const {
    Ids out;
    for (EventId p : r) {
        bool bottom = true;
        for (EventId q : r) bottom = bottom && !reaches(q, p);
        if (bottom) out.insert(p);
    }
    return out;
}

bool Poset::spacelike(const Ids &u, const Ids &v) const {
    for (EventId p : u) {
        for (EventId q : v) {
            if (p == q || reaches(p, q) || reaches(q, p)) return false;
        }
    }
    return true;
}

bool Poset::acausal(const Ids &s) const {
    for (EventId p : s) {
        for (EventId q : s) {
            if (reaches(p, q)) return false;
        }
    }
    return true;
}

bool Poset::cauchy(const Ids &s) const {
    Ids all = dependence_future(s);
    const Ids back = dependence_past(s);
    all.insert(back.begin(), back.end());
    return all.size() == size();
}

Ids Poset::minimal() const {
    Ids out;
    for (EventId p = 0; p < size(); ++p) {
        if (down_[p].empty()) out.insert(p);
    }
    return out;
}

Ids Poset::maximal() const {
    Ids out;
    for (EventId p = 0; p < size(); ++p) {
        if (up_[p].empty()) out.insert(p);
    }
    return out;
}

void Poset::for_each_maximal_antichain(
    const std::function<void(const Ids &)> &f) const {
    std::vector<EventId> chosen;
    const auto related = [&](EventId a, EventId b) {
        return reaches(a, b) || reaches(b, a);
    };
    std::function<void(EventId)> step = [&](EventId i) {
        if (i == size()) {
            for (EventId q = 0; q < size(); ++q) {
                bool covered = false;
                for (EventId p : chosen) covered = covered || p == q || related(p, q);
                if (!covered) return;
            }
            f(Ids(chosen.begin(), chosen.end()));
            return;
        }
        bool free = true;
        for (EventId p : chosen) free = free && !related(p, i);
        if (free) {
            chosen.push_back(i);
            step(i + 1);
            chosen.pop_back();
        }
        step(i + 1);
    };
    step(0);
}

bool Poset::separating_slice_exists(const Ids &first, const Ids &second) const {
    const Ids lo = minimal();
    const Ids hi = maximal();
    for (EventId p : lo) {
        if (hi.count(p)) return false;
    }
    const Ids f_up = future(first);
    const Ids f_down = past(first);
    const Ids s_up = future(second);
    const Ids s_down = past(second);
    const auto meets = [](const Ids &a, const Ids &b) {
        return std::any_of(a.begin(), a.end(), [&](EventId p) { return b.count(p) > 0; });
    };
    bool found = false;
    for_each_maximal_antichain([&](const Ids &a) {
        if (found || meets(a, lo) || meets(a, hi)) return;
        found = meets(a, f_up) && !meets(a, f_down) && !meets(a, s_up) &&
                meets(a, s_down);
    });
    return found;
}

Ids to_ids(const Region &r) {
    const auto v = r.ids();
    return {v.begin(), v.end()};
}

CausalSite random_site(std::size_t n, double density, std::mt19937_64 &rng) {
    std::vector<EventId> perm(n);
    std::iota(perm.begin(), perm.end(), EventId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution coin(density);
    std::vector<std::pair<EventId, EventId>> rel;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (coin(rng)) rel.emplace_back(perm[i], perm[j]);
        }
    }
    return CausalSite::from_relations(n, rel);
}

Region random_region(const CausalSite &site, double p, std::mt19937_64 &rng) {
    std::bernoulli_distribution coin(p);
    std::vector<EventId> ids;
    for (EventId i = 0; i < site.size(); ++i) {
        if (coin(rng)) ids.push_back(i);
    }
    return site.region(ids);
}

} // namespace causim::oracle
