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

#include "causim/causal_queries.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "causim/error.hpp"

namespace causim {

namespace {

EventSet closure(const CausalSite &site, const EventSet &members, bool future) {
    EventSet out = members;
    for (auto p = members.find_first(); p != EventSet::npos;
         p = members.find_next(p)) {
        out |= future ? site.strict_future(p) : site.strict_past(p);
    }
    return out;
}

Region chronological(const CausalSite &site, const Region &r, bool future) {
    site.require(r);
    if (!site.is_lattice()) {
        throw Error(ErrorCode::NotLatticeSite,
                    "chronological relation needs lattice coordinates");
    }
    const int slope = *site.cone_slope();
    EventSet out(site.size());
    for (EventId p : r.ids()) {
        const auto cp = *site.coords(p);
        for (EventId q = 0; q < site.size(); ++q) {
            const auto cq = *site.coords(q);
            const int dt = future ? cq.t - cp.t : cp.t - cq.t;
            if (dt > 0 && slope * std::abs(cq.x - cp.x) < dt) out.set(q);
        }
    }
    return site.region_of(std::move(out));
}

// Events ordered so that every event follows all of its predecessors.
std::vector<EventId> linear_extension(const CausalSite &site) {
    std::vector<EventId> order(site.size());
    std::iota(order.begin(), order.end(), EventId{0});
    std::stable_sort(order.begin(), order.end(), [&](EventId a, EventId b) {
        return site.strict_past(a).count() < site.strict_past(b).count();
    });
    return order;
}

// Events reachable from a minimal event by a cover chain that never meets S.
EventSet avoiders(const CausalSite &site, const EventSet &s, const EventSet &below,
                  const EventSet &above, bool future) {
    EventSet avoid(site.size());
    auto order = linear_extension(site);
    if (!future) std::reverse(order.begin(), order.end());
    for (EventId p : order) {
        if (s.test(p)) continue;
        const auto &preds = future ? site.covers_below(p) : site.covers_above(p);
        if (preds.empty()) {
            avoid.set(p);
            continue;
        }
        for (EventId a : preds) {
            const bool crosses = below.test(a) && above.test(p);
            if (avoid.test(a) && !crosses) {
                avoid.set(p);
                break;
            }
        }
    }
    return avoid;
}

} // namespace

Region causal_future(const CausalSite &site, const Region &r) {
    site.require(r);
    return site.region_of(closure(site, r.members(), true));
}

Region causal_past(const CausalSite &site, const Region &r) {
    site.require(r);
    return site.region_of(closure(site, r.members(), false));
}

Region strict_causal_future(const CausalSite &site, const Region &r) {
    return causal_future(site, r).minus(r);
}

Region strict_causal_past(const CausalSite &site, const Region &r) {
    return causal_past(site, r).minus(r);
}

Region chronological_future(const CausalSite &site, const Region &r) {
    return chronological(site, r, true);
}

Region chronological_past(const CausalSite &site, const Region &r) {
    return chronological(site, r, false);
}

Region domain_of_dependence(const CausalSite &site, const Region &s,
                            Direction direction) {
    site.require(s);
    const EventSet up = closure(site, s.members(), true);
    const EventSet down = closure(site, s.members(), false);
    EventSet out(site.size());
    if (direction != Direction::Past) {
        out |= ~avoiders(site, s.members(), down, up, true);
    }
    if (direction != Direction::Future) {
        out |= ~avoiders(site, s.members(), up, down, false);
    }
    return site.region_of(std::move(out));
}

Region future_boundary(const CausalSite &site, const Region &r) {
    site.require(r);
    EventSet out(site.size());
    for (EventId p : r.ids()) {
        if (!site.strict_future(p).intersects(r.members())) out.set(p);
    }
    return site.region_of(std::move(out));
}

Region past_boundary(const CausalSite &site, const Region &r) {
    site.require(r);
    EventSet out(site.size());
    for (EventId p : r.ids()) {
        if (!site.strict_past(p).intersects(r.members())) out.set(p);
    }
    return site.region_of(std::move(out));
}

bool is_spacelike_separated(const CausalSite &site, const Region &u,
                            const Region &v) {
    site.require(u);
    site.require(v);
    const EventSet cone = closure(site, u.members(), true) |
                          closure(site, u.members(), false);
    return !cone.intersects(v.members());
}

bool is_acausal(const CausalSite &site, const Region &s) {
    site.require(s);
    for (EventId p : s.ids()) {
        if (site.strict_future(p).intersects(s.members())) return false;
    }
    return true;
}

bool is_cauchy_slice(const CausalSite &site, const Region &s) {
    if (!is_acausal(site, s)) {
        throw Error(ErrorCode::NotAcausal, "Cauchy test needs an acausal set");
    }
    return domain_of_dependence(site, s, Direction::Both).size() == site.size();
}

bool is_maximal_antichain(const CausalSite &site, const Region &s) {
    if (!is_acausal(site, s)) return false;
    const EventSet reach = closure(site, s.members(), true) |
                           closure(site, s.members(), false);
    return reach.all();
}

std::vector<std::pair<EventId, EventId>> causal_pairs(const CausalSite &site,
                                                      const Region &s) {
    site.require(s);
    std::vector<std::pair<EventId, EventId>> out;
    for (EventId p : s.ids()) {
        const EventSet hit = site.strict_future(p) & s.members();
        for (auto q = hit.find_first(); q != EventSet::npos; q = hit.find_next(q)) {
            out.emplace_back(p, q);
        }
    }
    return out;
}

VerificationReport verify_boundary_properties(const CausalSite &site,
                                              const Region &r) {
    const Region bplus = future_boundary(site, r);
    const Region bminus = past_boundary(site, r);
    const auto plus_pairs = causal_pairs(site, bplus);
    const auto minus_pairs = causal_pairs(site, bminus);

    VerificationReport rep;
    rep.check = "boundary_properties";
    rep.pass = plus_pairs.empty() && minus_pairs.empty() && !r.empty() &&
               !bplus.empty() && !bminus.empty();
    rep.evidence["region_size"] = static_cast<double>(r.size());
    rep.evidence["future_boundary_size"] = static_cast<double>(bplus.size());
    rep.evidence["past_boundary_size"] = static_cast<double>(bminus.size());
    rep.evidence["future_boundary_causal_pairs"] =
        static_cast<double>(plus_pairs.size());
    rep.evidence["past_boundary_causal_pairs"] =
        static_cast<double>(minus_pairs.size());
    rep.evidence["boundary_overlap"] =
        static_cast<double>(bplus.intersected(bminus).size());
    rep.tolerances["exact"] = 0.0;
    rep.notes["compactness"] = "automatic on a finite site";
    std::string violations;
    for (const auto &[p, q] : plus_pairs) {
        violations += "+(" + std::to_string(p) + "," + std::to_string(q) + ")";
    }
    for (const auto &[p, q] : minus_pairs) {
        violations += "-(" + std::to_string(p) + "," + std::to_string(q) + ")";
    }
    if (!violations.empty()) rep.notes["violations"] = violations;
    return rep;
}

VerificationReport verify_boundary_covariance(const CausalSite &site,
                                              const Isometry &iso,
                                              const Region &r) {
    const Region image = iso.apply(site, r);
    const Region lhs_plus = future_boundary(site, image);
    const Region rhs_plus = iso.apply(site, future_boundary(site, r));
    const Region lhs_minus = past_boundary(site, image);
    const Region rhs_minus = iso.apply(site, past_boundary(site, r));

    const auto mismatch = [](const Region &a, const Region &b) {
        return static_cast<double>((a.members() ^ b.members()).count());
    };
    VerificationReport rep;
    rep.check = "boundary_covariance";
    rep.evidence["future_boundary_mismatch"] = mismatch(lhs_plus, rhs_plus);
    rep.evidence["past_boundary_mismatch"] = mismatch(lhs_minus, rhs_minus);
    rep.evidence["region_size"] = static_cast<double>(r.size());
    rep.tolerances["exact"] = 0.0;
    rep.pass = lhs_plus == rhs_plus && lhs_minus == rhs_minus;
    return rep;
}

} // namespace causim
