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

#include <catch_amalgamated.hpp>

#include <random>

#include "causal_oracle.hpp"
#include "causim/causal_queries.hpp"
#include "causim/error.hpp"

using namespace causim;

namespace {

CausalSite chain3() { return CausalSite::from_relations(3, {{0, 1}, {1, 2}}); }

Region row(const CausalSite &site, int t) {
    return site.rectangle(t, t, 0, site.spatial_extent());
}

void compare_with_oracle(const CausalSite &site, const Region &r, const Region &s) {
    oracle::Poset ref(site);
    const auto ir = oracle::to_ids(r);
    const auto is = oracle::to_ids(s);
    REQUIRE(oracle::to_ids(causal_future(site, r)) == ref.future(ir));
    REQUIRE(oracle::to_ids(causal_past(site, r)) == ref.past(ir));
    REQUIRE(oracle::to_ids(future_boundary(site, r)) == ref.future_boundary(ir));
    REQUIRE(oracle::to_ids(past_boundary(site, r)) == ref.past_boundary(ir));
    REQUIRE(oracle::to_ids(domain_of_dependence(site, r, Direction::Future)) ==
            ref.dependence_future(ir));
    REQUIRE(oracle::to_ids(domain_of_dependence(site, r, Direction::Past)) ==
            ref.dependence_past(ir));
    REQUIRE(is_spacelike_separated(site, r, s) == ref.spacelike(ir, is));
    REQUIRE(is_acausal(site, r) == ref.acausal(ir));
    if (site.is_lattice()) {
        REQUIRE(oracle::to_ids(chronological_future(site, r)) ==
                ref.chronological_future(ir));
        REQUIRE(oracle::to_ids(chronological_past(site, r)) ==
                ref.chronological_past(ir));
    }
}

} // namespace

TEST_CASE("causal future on a chain") {
    auto site = chain3();
    CHECK(causal_future(site, site.region({0})) == site.region({0, 1, 2}));
    CHECK(strict_causal_future(site, site.region({0})) == site.region({1, 2}));
    CHECK(causal_future(site, site.all_events()) == site.all_events());
    CHECK(strict_causal_future(site, site.all_events()).empty());
}

TEST_CASE("strict future of the lattice origin has eight events") {
    auto site = CausalSite::diamond_lattice(4, 2, 2);
    CHECK(strict_causal_future(site, site.region_at({{0, 0}})).size() == 8);
}

TEST_CASE("chronological future uses the open cone") {
    auto site = CausalSite::diamond_lattice(4, 2, 2);
    auto fut = chronological_future(site, site.region_at({{0, 0}}));
    CHECK_FALSE(fut.contains(site.at(2, 1)));
    CHECK(fut.contains(site.at(3, 1)));
    CHECK(fut.contains(site.at(1, 0)));
    CHECK(chronological_future(site, site.empty_region()).empty());
    auto chain = chain3();
    CHECK_THROWS_AS(chronological_future(chain, chain.region({0})), Error);
}

TEST_CASE("flat slice has full domain of dependence") {
    auto site = CausalSite::diamond_lattice(4, 2, 2);
    const Region slice = row(site, 2);
    CHECK(domain_of_dependence(site, slice, Direction::Both) == site.all_events());
    CHECK(is_cauchy_slice(site, slice));
    CHECK(domain_of_dependence(site, site.empty_region(), Direction::Both).empty());
}

TEST_CASE("single event is not Cauchy once there is room to pass it") {
    auto site = CausalSite::diamond_lattice(4, 2, 2);
    CHECK_FALSE(is_cauchy_slice(site, site.region_at({{2, 1}})));
    auto dplus = domain_of_dependence(site, site.region_at({{0, 1}}), Direction::Future);
    CHECK(dplus == site.region_at({{0, 1}, {1, 1}}));
    auto column = CausalSite::diamond_lattice(4, 0, 2);
    for (int t = 0; t <= 4; ++t) CHECK(is_cauchy_slice(column, column.region_at({{t, 0}})));
}

TEST_CASE("Cauchy test rejects causal input") {
    auto site = chain3();
    try {
        (void)is_cauchy_slice(site, site.region({0, 1}));
        FAIL("expected NotAcausal");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NotAcausal);
    }
}

TEST_CASE("boundaries") {
    auto chain = chain3();
    CHECK(future_boundary(chain, chain.all_events()) == chain.region({2}));
    CHECK(past_boundary(chain, chain.all_events()) == chain.region({0}));

    auto site = CausalSite::diamond_lattice(4, 2, 2);
    CHECK(future_boundary(site, site.region_at({{1, 0}, {2, 0}})) ==
          site.region_at({{2, 0}}));
    const Region flat = row(site, 3);
    CHECK(future_boundary(site, flat) == flat);
    CHECK(past_boundary(site, flat) == flat);
}

TEST_CASE("spacelike separation") {
    auto site = CausalSite::diamond_lattice(4, 2, 2);
    CHECK(is_spacelike_separated(site, site.region_at({{2, 0}}), site.region_at({{2, 2}})));
    CHECK_FALSE(is_spacelike_separated(site, site.region_at({{0, 0}}), site.region_at({{4, 0}})));
    CHECK_FALSE(is_spacelike_separated(site, site.region_at({{2, 1}}),
                                       site.region_at({{2, 1}, {2, 2}})));
}

TEST_CASE("acausality") {
    auto chain = chain3();
    CHECK_FALSE(is_acausal(chain, chain.region({0, 1})));
    CHECK(is_acausal(chain, chain.region({1})));
    auto site = CausalSite::diamond_lattice(6, 4, 2);
    std::vector<LatticeCoord> stair;
    for (int x = 0; x <= 4; ++x) stair.push_back({x, x});
    CHECK(is_acausal(site, site.region_at(stair)));
}

TEST_CASE("queries agree with the chain-walking oracle on random sites") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 40; ++i) {
        auto site = oracle::random_site(8 + i % 20, 0.12 + 0.01 * (i % 8), rng);
        for (int j = 0; j < 5; ++j) {
            compare_with_oracle(site, oracle::random_region(site, 0.2, rng),
                                oracle::random_region(site, 0.2, rng));
        }
    }
}

TEST_CASE("queries agree with the oracle on lattices") {
    std::mt19937_64 rng(99);
    for (int t : {1, 3, 6, 9}) {
        for (int l : {0, 2, 5, 9}) {
            auto site = CausalSite::diamond_lattice(t, l, 2);
            for (int j = 0; j < 3; ++j) {
                compare_with_oracle(site, oracle::random_region(site, 0.1, rng),
                                    oracle::random_region(site, 0.1, rng));
            }
        }
    }
}

TEST_CASE("Cauchy slices are exactly the maximal antichains") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 12; ++i) {
        auto site = i % 3 == 0 ? CausalSite::diamond_lattice(3, 2, 2)
                               : oracle::random_site(9 + i % 4, 0.25, rng);
        oracle::Poset ref(site);
        int maximal = 0;
        ref.for_each_maximal_antichain([&](const oracle::Ids &a) {
            ++maximal;
            auto r = site.region({a.begin(), a.end()});
            REQUIRE(is_cauchy_slice(site, r));
            REQUIRE(ref.cauchy(a));
        });
        REQUIRE(maximal > 0);
        for (int j = 0; j < 40; ++j) {
            auto r = oracle::random_region(site, 0.3, rng);
            if (!is_acausal(site, r)) continue;
            REQUIRE(is_cauchy_slice(site, r) == is_maximal_antichain(site, r));
            REQUIRE(is_cauchy_slice(site, r) == ref.cauchy(oracle::to_ids(r)));
        }
    }
}

TEST_CASE("closure properties of the cones") {
    std::mt19937_64 rng(11);
    auto site = CausalSite::diamond_lattice(8, 6, 2);
    for (int i = 0; i < 50; ++i) {
        auto r = oracle::random_region(site, 0.1, rng);
        auto s = oracle::random_region(site, 0.1, rng);
        auto jr = causal_future(site, r);
        CHECK(r.is_subset_of(jr));
        CHECK(causal_future(site, jr) == jr);
        CHECK(chronological_future(site, r).is_subset_of(jr));
        CHECK(causal_future(site, r.intersected(s)).is_subset_of(jr));
        CHECK(future_boundary(site, r).is_subset_of(r));
        CHECK(is_acausal(site, future_boundary(site, r)));
        CHECK(is_acausal(site, past_boundary(site, r)));
        CHECK(is_spacelike_separated(site, r, s) == is_spacelike_separated(site, s, r));
    }
}

TEST_CASE("boundary property report") {
    auto chain = chain3();
    auto rep = verify_boundary_properties(chain, chain.all_events());
    CHECK(rep.pass);
    CHECK(rep.evidence.at("future_boundary_size") == 1.0);
    CHECK(rep.evidence.at("past_boundary_size") == 1.0);

    auto site = CausalSite::diamond_lattice(10, 10, 2);
    std::mt19937_64 rng(3);
    auto iso = spatial_reflection(site);
    for (int i = 0; i < 100; ++i) {
        auto r = oracle::random_region(site, 0.15, rng);
        if (r.empty()) continue;
        CHECK(verify_boundary_properties(site, r).pass);
        CHECK(verify_boundary_covariance(site, iso, r).pass);
    }
}
