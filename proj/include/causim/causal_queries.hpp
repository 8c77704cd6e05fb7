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

#include <utility>
#include <vector>

#include "causim/causal_site.hpp"
#include "causim/report.hpp"

namespace causim {

enum class Direction { Future, Past, Both };

/// J+(R) = R ∪ {q : p < q for some p in R}.
Region causal_future(const CausalSite &site, const Region &r);
Region causal_past(const CausalSite &site, const Region &r);

/// J+(R) \ R.
Region strict_causal_future(const CausalSite &site, const Region &r);
Region strict_causal_past(const CausalSite &site, const Region &r);

/// Open-cone future: t_q > t_p and slope * |x_q - x_p| < t_q - t_p.
/// Lattice sites only.
Region chronological_future(const CausalSite &site, const Region &r);
Region chronological_past(const CausalSite &site, const Region &r);

/// Events every saturated chain of covers through which, starting at a
/// site-minimal event (resp. ending at a site-maximal one), meets S.
/// A chain meets S when it contains a member of S or steps across S,
/// i.e. has consecutive a < b with a in J-(S) and b in J+(S).
Region domain_of_dependence(const CausalSite &site, const Region &s,
                            Direction direction);

/// B+(R) = {p in R : J+(p) ∩ R = {p}}.
Region future_boundary(const CausalSite &site, const Region &r);
Region past_boundary(const CausalSite &site, const Region &r);

/// (J+(U) ∪ J-(U)) ∩ V = ∅.
bool is_spacelike_separated(const CausalSite &site, const Region &u,
                            const Region &v);

bool is_acausal(const CausalSite &site, const Region &s);

/// Throws NotAcausal when S is not acausal.
bool is_cauchy_slice(const CausalSite &site, const Region &s);

/// An acausal set meeting every event's past or future; equivalent to
/// is_cauchy_slice for acausal input.
bool is_maximal_antichain(const CausalSite &site, const Region &s);

/// Pairs (p, q) of members with p < q.
std::vector<std::pair<EventId, EventId>> causal_pairs(const CausalSite &site,
                                                      const Region &s);

/// Acausality of B+(R) and B-(R); also flags B+ ∩ B- ≠ ∅.
VerificationReport verify_boundary_properties(const CausalSite &site,
                                              const Region &r);

/// B±(iso(R)) == iso(B±(R)).
VerificationReport verify_boundary_covariance(const CausalSite &site,
                                              const Isometry &iso,
                                              const Region &r);

} // namespace causim
